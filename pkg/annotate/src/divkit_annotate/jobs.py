"""Sidecar export jobs.

Both exporters read the dataset JSON document directly (its schema is a
stable public format) and write the sidecar pair / JSON-lines files the
core toolkit consumes. Token alignment for POS export comes from invoking
the core CLI's ``tokenize`` subcommand in a subprocess, so the tag
sequences are aligned to the core tokenizer by construction rather than
by re-implementing it.

All writes are atomic: payloads land in a temp file first and are renamed
into place, so a crash can never leave a partial sidecar behind.
"""

from __future__ import annotations

import json
import os
import subprocess
from dataclasses import dataclass

import numpy as np

from .encoders import DEFAULT_MODEL, make_encoder
from .taggers import LEXICON_MODEL, make_tagger


class AlignmentError(RuntimeError):
    pass


@dataclass(frozen=True)
class AnnotationJob:
    dataset_path: str
    out_stem: str
    model: str = DEFAULT_MODEL
    batch_size: int = 64
    divkit_bin: str = "divkit"

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def read_references(dataset_path: str) -> list[tuple[str, int, str]]:
    with open(dataset_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    out: list[tuple[str, int, str]] = []
    for sample in doc["samples"]:
        sid = str(sample["id"])
        for k, ref in enumerate(sample["references"]):
            out.append((sid, k, str(ref)))
    return out


def core_tokenize(job: AnnotationJob) -> dict[tuple[str, int], list[str]]:
    """Token lists per reference, via the core CLI."""
    proc = subprocess.run(
        [job.divkit_bin, "tokenize", "--dataset", job.dataset_path],
        capture_output=True, text=True)
    if proc.returncode != 0:
        raise AlignmentError(
            f"divkit tokenize failed (exit {proc.returncode}): "
            f"{proc.stderr.strip()}")
    tokens: dict[tuple[str, int], list[str]] = {}
    for line in proc.stdout.splitlines():
        sid, ref_index, rest = line.split("\t", 2)
        tokens[(sid, int(ref_index))] = rest.split() if rest else []
    return tokens


def _atomic_write_bytes(path: str, payload: bytes) -> None:
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def export_embeddings(job: AnnotationJob) -> dict:
    """Write ``<stem>.emb.json`` + ``<stem>.emb.bin``: one L2-normalized
    row per (sample_id, ref_index), in dataset order. Identical caption
    strings are encoded once and share one row value."""
    references = read_references(job.dataset_path)
    encoder = make_encoder(job.model)

    unique: list[str] = list(dict.fromkeys(text for _, _, text in references))
    encoded: dict[str, np.ndarray] = {}
    for start in range(0, len(unique), job.batch_size):
        batch = unique[start:start + job.batch_size]
        vectors = encoder.encode(batch)
        if vectors.shape != (len(batch), encoder.dim):
            raise RuntimeError(
                f"encoder returned shape {vectors.shape}, expected "
                f"({len(batch)}, {encoder.dim})")
        for text, vec in zip(batch, vectors):
            encoded[text] = vec

    matrix = np.zeros((len(references), encoder.dim), dtype=np.float64)
    for row, (_, _, text) in enumerate(references):
        matrix[row] = encoded[text]
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    matrix = matrix / np.where(norms > 0, norms, 1.0)

    manifest = {
        "dim": encoder.dim,
        "count": len(references),
        "model": encoder.name,
        "records": [{"sample_id": sid, "ref_index": k, "row": row}
                    for row, (sid, k, _) in enumerate(references)],
    }
    _atomic_write_bytes(job.out_stem + ".emb.bin",
                        matrix.astype("<f4").tobytes())
    _atomic_write_bytes(job.out_stem + ".emb.json",
                        json.dumps(manifest, sort_keys=True).encode("utf-8"))
    return {"records": len(references), "dim": encoder.dim,
            "model": encoder.name}


def export_pos(job: AnnotationJob) -> dict:
    """Write the JSON-lines POS sidecar; one record per reference with
    exactly as many tags as core tokens."""
    model = job.model if job.model != DEFAULT_MODEL else LEXICON_MODEL
    tagger = make_tagger(model)
    references = read_references(job.dataset_path)
    tokens = core_tokenize(job)

    lines: list[str] = []
    for sid, k, _ in references:
        key = (sid, k)
        if key not in tokens:
            raise AlignmentError(f"no tokenizer output for reference {key}")
        toks = tokens[key]
        tags = tagger.tag(toks)
        if len(tags) != len(toks):
            raise AlignmentError(
                f"tagger produced {len(tags)} tags for {len(toks)} tokens "
                f"on reference {key}")
        lines.append(json.dumps(
            {"sample_id": sid, "ref_index": k, "tags": tags},
            sort_keys=True))
    payload = ("\n".join(lines) + "\n") if lines else ""
    _atomic_write_bytes(job.out_stem + ".pos.jsonl", payload.encode("utf-8"))
    return {"records": len(lines), "model": tagger.name}
