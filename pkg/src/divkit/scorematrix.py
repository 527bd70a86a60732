"""Dense hypothesis x sample score matrices with an on-disk cache.

Rows are deduplicated hypothesis captions (first-occurrence order), columns
are evaluation samples. Sentence-level scoring only; BLEU rows default to
add-one count smoothing so sparse per-sample scores stay usable. CIDEr
matrices compute document frequency over the evaluation samples of the
call, so a matrix is only comparable to itself.

Cache entries are a ``<identity>.mat.json`` manifest plus a
``<identity>.mat.bin`` payload of little-endian float32, row major, written
atomically (temp file + rename). A checksum mismatch triggers a recompute
with a warning instead of an error.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels, metrics
from .corpus import Sample
from .report import content_hash
from .textproc import tokenize

log = logging.getLogger("divkit")

TILE_ROWS = 128


@dataclass
class ScoreMatrix:
    hypothesis_keys: tuple[str, ...]
    sample_ids: tuple[str, ...]
    values: np.ndarray = field(repr=False)
    identity: str
    cache_status: str = "miss"  # miss | hit | corrupt

    def score(self, row: int, col: int) -> float:
        return float(self.values[row, col])


def matrix_identity(hypotheses: tuple[str, ...], samples: list[Sample],
                    params: metrics.MetricParams) -> str:
    return content_hash({
        "hypotheses": list(hypotheses),
        "samples": [{"id": s.id, "references": list(s.references)}
                    for s in samples],
        "params": params.key(),
    })


def dedup_hypotheses(hypotheses) -> tuple[str, ...]:
    return tuple(dict.fromkeys(hypotheses))


class _Interner:
    def __init__(self):
        self._ids: dict[tuple, int] = {}

    def get(self, gram: tuple) -> int:
        out = self._ids.get(gram)
        if out is None:
            out = len(self._ids)
            self._ids[gram] = out
        return out


def _cook_rows(token_lists, n, interner, counts_fn):
    """Per-(row, order) sorted (id, count) segments in one flat layout."""
    indptr = [0]
    ids: list[int] = []
    cnts: list[int] = []
    for tokens in token_lists:
        for k in range(1, n + 1):
            seg = sorted((interner.get(g), c)
                         for g, c in counts_fn(tokens, k).items())
            ids.extend(g for g, _ in seg)
            cnts.extend(c for _, c in seg)
            indptr.append(len(ids))
    return (np.asarray(indptr, dtype=np.int64),
            np.asarray(ids, dtype=np.int64),
            np.asarray(cnts, dtype=np.int32))


def _bleu_matrix(hyp_tokens, sample_refs, n, smoothing, jobs) -> np.ndarray:
    interner = _Interner()
    h_indptr, h_ids, h_cnts = _cook_rows(hyp_tokens, n, interner,
                                         metrics.ngram_counts)
    s_indptr, s_ids, s_cnts = _cook_rows(
        sample_refs, n, interner,
        lambda refs, k: metrics.max_ref_counts(refs, k))
    hyp_len = np.asarray([len(t) for t in hyp_tokens], dtype=np.int32)
    reflen_indptr = [0]
    reflen_vals: list[int] = []
    for refs in sample_refs:
        reflen_vals.extend(len(r) for r in refs)
        reflen_indptr.append(len(reflen_vals))
    reflen_indptr = np.asarray(reflen_indptr, dtype=np.int64)
    reflen_vals = np.asarray(reflen_vals, dtype=np.int32)

    out = np.zeros((len(hyp_tokens), len(sample_refs)), dtype=np.float32)
    tiles = [(r, min(r + TILE_ROWS, len(hyp_tokens)))
             for r in range(0, len(hyp_tokens), TILE_ROWS)]

    def run(tile):
        r0, r1 = tile
        kernels.bleu_matrix_block(n, smoothing, h_indptr, h_ids, h_cnts,
                                  hyp_len, s_indptr, s_ids, s_cnts,
                                  reflen_indptr, reflen_vals, out, r0, r1)

    if jobs > 1 and len(tiles) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(run, tiles))
    else:
        for tile in tiles:
            run(tile)
    return out


def _cider_matrix(hyp_tokens, sample_refs, max_n) -> np.ndarray:
    df = metrics.cider_document_frequency(sample_refs, max_n)
    log_n = np.log(len(sample_refs))
    out = np.zeros((len(hyp_tokens), len(sample_refs)), dtype=np.float32)
    cooked_refs = []
    for refs in sample_refs:
        cooked_refs.append([metrics._tfidf_by_order(
            metrics._all_order_counts(r, max_n), df, log_n, max_n)
            for r in refs])
    for r, hyp in enumerate(hyp_tokens):
        hvecs, hnorms = metrics._tfidf_by_order(
            metrics._all_order_counts(hyp, max_n), df, log_n, max_n)
        for c, refs in enumerate(cooked_refs):
            order_sums = [0.0] * max_n
            for rvecs, rnorms in refs:
                for k in range(max_n):
                    if hnorms[k] == 0.0 or rnorms[k] == 0.0:
                        continue
                    hv, rv = hvecs[k], rvecs[k]
                    if len(rv) < len(hv):
                        hv, rv = rv, hv
                    dot = sum(w * rv[g] for g, w in hv.items() if g in rv)
                    order_sums[k] += dot / (hnorms[k] * rnorms[k])
            out[r, c] = 10.0 * sum(s / len(refs) for s in order_sums) / max_n
    return out


def _generic_matrix(hyp_tokens, sample_refs, params, jobs) -> np.ndarray:
    out = np.zeros((len(hyp_tokens), len(sample_refs)), dtype=np.float32)

    def run(r):
        hyp = hyp_tokens[r]
        for c, refs in enumerate(sample_refs):
            out[r, c] = metrics.sentence_score(hyp, refs, params)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(run, range(len(hyp_tokens))))
    else:
        for r in range(len(hyp_tokens)):
            run(r)
    return out


def compute_matrix(hypotheses: tuple[str, ...], samples: list[Sample],
                   params: metrics.MetricParams, jobs: int = 1) -> np.ndarray:
    hyp_tokens = [tokenize(h).tokens for h in hypotheses]
    sample_refs = [[tokenize(r).tokens for r in s.references] for s in samples]
    if params.metric.startswith("bleu"):
        return _bleu_matrix(hyp_tokens, sample_refs, params.bleu_order,
                            params.bleu_smoothing == "add_one_counts", jobs)
    if params.metric == "cider":
        return _cider_matrix(hyp_tokens, sample_refs, params.cider_max_n)
    return _generic_matrix(hyp_tokens, sample_refs, params, jobs)


def _cache_paths(cache_dir: str, identity: str) -> tuple[str, str]:
    return (os.path.join(cache_dir, identity + ".mat.json"),
            os.path.join(cache_dir, identity + ".mat.bin"))


def _try_load(cache_dir: str, identity: str, rows: int, cols: int):
    manifest_path, bin_path = _cache_paths(cache_dir, identity)
    if not os.path.exists(manifest_path):
        return None, "miss"
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
        with open(bin_path, "rb") as fh:
            payload = fh.read()
        if manifest.get("identity") != identity:
            raise ValueError("identity mismatch")
        if (manifest.get("rows"), manifest.get("cols")) != (rows, cols):
            raise ValueError("dimension mismatch")
        if hashlib.sha256(payload).hexdigest() != manifest.get("bin_sha256"):
            raise ValueError("checksum mismatch")
        values = np.frombuffer(payload, dtype="<f4").reshape(rows, cols).copy()
        return values, "hit"
    except Exception as exc:
        log.warning("score-matrix cache %s is corrupt (%s); recomputing",
                    identity[:12], exc)
        return None, "corrupt"


def _store(cache_dir: str, identity: str, params, values: np.ndarray) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    manifest_path, bin_path = _cache_paths(cache_dir, identity)
    payload = np.ascontiguousarray(values, dtype="<f4").tobytes()
    manifest = {
        "format": 1,
        "identity": identity,
        "rows": int(values.shape[0]),
        "cols": int(values.shape[1]),
        "params": params.key(),
        "bin_sha256": hashlib.sha256(payload).hexdigest(),
    }
    tmp = bin_path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, bin_path)
    tmp = manifest_path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True)
    os.replace(tmp, manifest_path)


def build_score_matrix(hypotheses, samples: list[Sample],
                       params: metrics.MetricParams,
                       cache_dir: str | None = None,
                       jobs: int = 1) -> ScoreMatrix:
    keys = dedup_hypotheses(hypotheses)
    if not keys:
        raise ValueError("hypotheses must be non-empty")
    identity = matrix_identity(keys, samples, params)
    status = "miss"
    values = None
    if cache_dir:
        values, status = _try_load(cache_dir, identity, len(keys), len(samples))
    if values is None:
        values = compute_matrix(keys, samples, params, jobs=jobs)
        if cache_dir:
            _store(cache_dir, identity, params, values)
    return ScoreMatrix(
        hypothesis_keys=keys,
        sample_ids=tuple(s.id for s in samples),
        values=values,
        identity=identity,
        cache_status=status,
    )
