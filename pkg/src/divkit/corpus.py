"""Dataset data model, file ingestion, validation, and embedding sidecars.

A dataset is a single UTF-8 JSON document::

    {"name": "toy",
     "samples": [{"id": "a", "split": "train",
                  "references": ["a man runs", ...],
                  "labels": ["dog", ...]}, ...]}

Samples keep their file order, references keep their index order (the
reference index is a stable key used by sidecar files), and duplicate
reference strings are kept: the leave-one-out procedure depends on them.
Caption strings are normalized by Unicode NFC + trimming only.

Embedding sidecars come as a pair of files sharing a stem:
``<stem>.emb.json`` (manifest) and ``<stem>.emb.bin`` (little-endian
float32, row-major).
"""

from __future__ import annotations

import json
import os
import re
import unicodedata
from dataclasses import dataclass, field

import numpy as np

from .report import content_hash

SPLITS = ("train", "val", "test")


class DatasetError(ValueError):
    """Raised on unloadable or invariant-violating dataset files."""

    def __init__(self, message: str, sample_id: str | None = None,
                 byte_offset: int | None = None):
        detail = message
        if sample_id is not None:
            detail += f" (sample id: {sample_id!r}"
            detail += f", byte offset: {byte_offset})" if byte_offset is not None else ")"
        elif byte_offset is not None:
            detail += f" (byte offset: {byte_offset})"
        super().__init__(detail)
        self.sample_id = sample_id
        self.byte_offset = byte_offset


class SidecarError(ValueError):
    """Raised on malformed or inconsistent sidecar files."""


def normalize_caption(text: str) -> str:
    return unicodedata.normalize("NFC", text).strip()


@dataclass(frozen=True)
class Sample:
    id: str
    split: str
    references: tuple[str, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.split not in SPLITS:
            raise DatasetError(f"unknown split {self.split!r}", sample_id=self.id)
        if not self.references:
            raise DatasetError("sample has zero references", sample_id=self.id)


@dataclass(frozen=True)
class CaptionDataset:
    name: str
    samples: tuple[Sample, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for s in self.samples:
            if s.id in seen:
                raise DatasetError("duplicate sample id", sample_id=s.id)
            seen.add(s.id)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def reference_count(self) -> int:
        return sum(len(s.references) for s in self.samples)

    def filter_split(self, split: str) -> "CaptionDataset":
        """Subset to one split; ``all`` returns self unchanged."""
        if split == "all":
            return self
        if split not in SPLITS:
            raise DatasetError(f"unknown split {split!r}")
        kept = tuple(s for s in self.samples if s.split == split)
        return CaptionDataset(name=self.name, samples=kept)

    def to_document(self) -> dict:
        doc: dict = {"name": self.name, "samples": []}
        for s in self.samples:
            rec: dict = {"id": s.id, "split": s.split,
                         "references": list(s.references)}
            if s.labels is not None:
                rec["labels"] = list(s.labels)
            doc["samples"].append(rec)
        return doc

    def content_hash(self) -> str:
        return content_hash(self.to_document())


@dataclass(frozen=True)
class ValidationReport:
    sample_count: int
    reference_count: int
    duplicate_id_list: tuple[str, ...]
    empty_reference_ids: tuple[str, ...]
    split_histogram: dict[str, int]


def _byte_offset_of_id(raw: bytes, sample_id: str) -> int | None:
    # Best-effort: locate the JSON-encoded id literal in the raw document.
    needle = json.dumps(sample_id).encode("utf-8")
    pat = re.compile(rb'"id"\s*:\s*' + re.escape(needle))
    m = pat.search(raw)
    return m.start() if m else None


def load_dataset(path: str) -> CaptionDataset:
    if not os.path.exists(path):
        raise DatasetError(f"dataset file not found: {path}")
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise DatasetError(f"dataset is not valid UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError(f"malformed dataset JSON: {exc.msg}",
                           byte_offset=exc.pos) from exc
    if not isinstance(doc, dict) or "samples" not in doc:
        raise DatasetError("dataset document must be an object with a 'samples' list")

    name = doc.get("name", os.path.splitext(os.path.basename(path))[0])
    samples: list[Sample] = []
    seen: set[str] = set()
    for i, rec in enumerate(doc["samples"]):
        if not isinstance(rec, dict) or "id" not in rec:
            raise DatasetError(f"sample #{i} is not an object with an 'id'")
        sid = str(rec["id"])
        offset = _byte_offset_of_id(raw, sid)
        if sid in seen:
            raise DatasetError("duplicate sample id", sample_id=sid,
                               byte_offset=offset)
        seen.add(sid)
        refs = rec.get("references", [])
        if not isinstance(refs, list) or not refs:
            raise DatasetError("sample has zero references", sample_id=sid,
                               byte_offset=offset)
        if not all(isinstance(r, str) for r in refs):
            raise DatasetError("references must be strings", sample_id=sid,
                               byte_offset=offset)
        split = rec.get("split", "train")
        if split not in SPLITS:
            raise DatasetError(f"unknown split {split!r}", sample_id=sid,
                               byte_offset=offset)
        labels = rec.get("labels")
        if labels is not None:
            labels = tuple(str(x) for x in labels)
        samples.append(Sample(
            id=sid, split=split,
            references=tuple(normalize_caption(r) for r in refs),
            labels=labels,
        ))
    return CaptionDataset(name=str(name), samples=tuple(samples))


def save_dataset(dataset: CaptionDataset, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset.to_document(), fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def validate(dataset: CaptionDataset) -> ValidationReport:
    """Summary report; loaded datasets already enforce the invariants,
    so the problem lists are empty unless a dataset was built by hand."""
    hist = {s: 0 for s in SPLITS}
    dupes: list[str] = []
    empty: list[str] = []
    seen: set[str] = set()
    for s in dataset.samples:
        hist[s.split] += 1
        if s.id in seen:
            dupes.append(s.id)
        seen.add(s.id)
        if not s.references:
            empty.append(s.id)
    return ValidationReport(
        sample_count=len(dataset.samples),
        reference_count=dataset.reference_count,
        duplicate_id_list=tuple(dupes),
        empty_reference_ids=tuple(empty),
        split_histogram=hist,
    )


@dataclass
class EmbeddingStore:
    """Per-reference unit vectors keyed by (sample_id, ref_index)."""

    dim: int
    matrix: np.ndarray = field(repr=False)
    index: dict[tuple[str, int], int] = field(repr=False)

    def get(self, sample_id: str, ref_index: int) -> np.ndarray:
        return self.matrix[self.index[(sample_id, ref_index)]]

    def __len__(self) -> int:
        return len(self.index)


def attach_embeddings(dataset: CaptionDataset, sidecar_stem: str) -> EmbeddingStore:
    """Load a ``<stem>.emb.json`` / ``<stem>.emb.bin`` sidecar pair and
    check it covers every reference of the dataset exactly once."""
    stem = sidecar_stem
    if stem.endswith(".emb.json") or stem.endswith(".emb.bin"):
        stem = stem.rsplit(".emb.", 1)[0]
    manifest_path, bin_path = stem + ".emb.json", stem + ".emb.bin"
    for p in (manifest_path, bin_path):
        if not os.path.exists(p):
            raise SidecarError(f"missing sidecar file: {p}")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    dim = int(manifest["dim"])
    count = int(manifest["count"])
    if dim <= 0:
        raise SidecarError(f"embedding dim must be positive, got {dim}")
    if count != dataset.reference_count:
        raise SidecarError(
            f"sidecar has {count} records but dataset has "
            f"{dataset.reference_count} references")

    data = np.fromfile(bin_path, dtype="<f4")
    if data.size != count * dim:
        raise SidecarError(
            f"binary sidecar holds {data.size} floats, expected {count * dim}")
    matrix = data.reshape(count, dim)
    if not np.all(np.isfinite(matrix)):
        bad = int(np.argwhere(~np.isfinite(matrix).all(axis=1))[0][0])
        raise SidecarError(f"non-finite vector entries at row {bad}")

    index: dict[tuple[str, int], int] = {}
    for rec in manifest["records"]:
        key = (str(rec["sample_id"]), int(rec["ref_index"]))
        row = int(rec["row"])
        if key in index:
            raise SidecarError(f"duplicate sidecar record for {key}")
        if not (0 <= row < count):
            raise SidecarError(f"row {row} out of range for {key}")
        index[key] = row
    for s in dataset.samples:
        for k in range(len(s.references)):
            if (s.id, k) not in index:
                raise SidecarError(f"missing embedding record for ({s.id!r}, {k})")
    return EmbeddingStore(dim=dim, matrix=matrix, index=index)


def write_embedding_sidecar(stem: str, dim: int,
                            records: list[tuple[str, int]],
                            matrix: np.ndarray) -> None:
    """Write the sidecar pair atomically (temp file + rename)."""
    if matrix.shape != (len(records), dim):
        raise SidecarError(f"matrix shape {matrix.shape} does not match "
                           f"{len(records)} records of dim {dim}")
    manifest = {
        "dim": dim,
        "count": len(records),
        "records": [{"sample_id": sid, "ref_index": k, "row": j}
                    for j, (sid, k) in enumerate(records)],
    }
    tmp = stem + ".emb.bin.tmp"
    matrix.astype("<f4").tofile(tmp)
    os.replace(tmp, stem + ".emb.bin")
    tmp = stem + ".emb.json.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh)
    os.replace(tmp, stem + ".emb.json")
