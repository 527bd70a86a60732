"""Within-sample semantic analyses over reference embeddings.

All measures work on the unique caption strings of a sample (exact match
after NFC + trim + lowercase); duplicated strings change nothing. Distance
is cosine distance (1 - cosine similarity). Samples with fewer than two
unique captions are excluded and counted, never errors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import CaptionDataset, EmbeddingStore
from .textproc import builtin_embed, tokenize

HIST_BUCKET = 0.05
HIST_RANGE = (0.0, 2.0)


@dataclass(frozen=True)
class SampleSemantics:
    sample_id: str
    unique_caption_count: int
    min_pairwise_distances: tuple[float, ...]
    variance: float
    mean_delta_pct: float
    novelty_pct: float


def builtin_store(dataset: CaptionDataset) -> EmbeddingStore:
    """EmbeddingStore backed by the built-in hash embedder (dim 256)."""
    rows = []
    index: dict[tuple[str, int], int] = {}
    for s in dataset.samples:
        for k, ref in enumerate(s.references):
            index[(s.id, k)] = len(rows)
            rows.append(builtin_embed(tokenize(ref)))
    matrix = np.asarray(rows, dtype=np.float32)
    return EmbeddingStore(dim=matrix.shape[1], matrix=matrix, index=index)


def _norm_key(text: str) -> str:
    import unicodedata
    return unicodedata.normalize("NFC", text).strip().lower()


def unique_caption_vectors(sample, store: EmbeddingStore) -> np.ndarray:
    """One embedding per unique caption string (first occurrence wins)."""
    seen: set[str] = set()
    rows: list[np.ndarray] = []
    for k, ref in enumerate(sample.references):
        key = _norm_key(ref)
        if key in seen:
            continue
        seen.add(key)
        rows.append(np.asarray(store.get(sample.id, k), dtype=np.float64))
    return np.vstack(rows) if rows else np.zeros((0, store.dim))


def cosine_distance_matrix(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = vectors / safe[:, None]
    sim = unit @ unit.T
    dist = 1.0 - np.clip(sim, -1.0, 1.0)
    np.fill_diagonal(dist, 0.0)
    return dist


def _pairwise_values(dist: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(dist.shape[0], k=1)
    return dist[iu]


def sample_semantics(dataset: CaptionDataset,
                     store: EmbeddingStore) -> tuple[list[SampleSemantics], int]:
    """Per-sample redundancy, variance, mean-delta and novelty. Returns
    (records, excluded_count); excluded samples have < 2 unique captions
    and contribute only their novelty via ``novelty``."""
    records: list[SampleSemantics] = []
    excluded = 0
    for s in dataset.samples:
        vectors = unique_caption_vectors(s, store)
        u = vectors.shape[0]
        nov = novelty_of_sample(s)
        if u < 2:
            excluded += 1
            continue
        dist = cosine_distance_matrix(vectors)
        off = dist + np.diag(np.full(u, np.inf))
        h_values = off.min(axis=1)
        variance = float(np.var(_pairwise_values(dist)))

        deltas = []
        for j in range(u):
            others = np.delete(vectors, j, axis=0)
            d_min = float(h_values[j])
            mean_vec = others.mean(axis=0)
            d_mean = _cos_dist(vectors[j], mean_vec)
            deltas.append(0.0 if d_mean == 0 else 100.0 * (d_mean - d_min) / d_mean)
        records.append(SampleSemantics(
            sample_id=s.id,
            unique_caption_count=u,
            min_pairwise_distances=tuple(float(x) for x in h_values),
            variance=variance,
            mean_delta_pct=float(np.mean(deltas)),
            novelty_pct=nov,
        ))
    return records, excluded


def _cos_dist(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0 or nb == 0:
        return 0.0
    sim = float(np.dot(a, b) / (na * nb))
    return 1.0 - max(-1.0, min(1.0, sim))


def redundancy(dataset: CaptionDataset,
               store: EmbeddingStore) -> tuple[list[float], dict[str, int], int]:
    """All per-caption minimum distances (a distribution over references),
    a 0.05-wide histogram over [0, 2], and the excluded-sample count."""
    records, excluded = sample_semantics(dataset, store)
    values = [d for rec in records for d in rec.min_pairwise_distances]
    nbuckets = int(round((HIST_RANGE[1] - HIST_RANGE[0]) / HIST_BUCKET))
    hist: dict[str, int] = {}
    for v in values:
        b = min(int(v / HIST_BUCKET), nbuckets - 1)
        key = f"{b * HIST_BUCKET:.2f}"
        hist[key] = hist.get(key, 0) + 1
    return values, hist, excluded


def mean_delta(dataset: CaptionDataset,
               store: EmbeddingStore) -> tuple[dict[str, float], int]:
    records, excluded = sample_semantics(dataset, store)
    return {rec.sample_id: rec.mean_delta_pct for rec in records}, excluded


def novelty_of_sample(sample) -> float:
    keys = [_norm_key(r) for r in sample.references]
    from collections import Counter
    counts = Counter(keys)
    once = sum(1 for k in keys if counts[k] == 1)
    return 100.0 * once / len(keys)


def novelty(dataset: CaptionDataset) -> tuple[dict[str, float], float]:
    """Per-sample percentage of references whose exact string occurs once
    within the sample, plus the dataset mean."""
    per_sample = {s.id: novelty_of_sample(s) for s in dataset.samples}
    mean = sum(per_sample.values()) / len(per_sample) if per_sample else 0.0
    return per_sample, mean


def sample_variance(dataset: CaptionDataset,
                    store: EmbeddingStore) -> tuple[dict[str, float], int]:
    """Population variance of all pairwise distances among each sample's
    unique captions."""
    records, excluded = sample_semantics(dataset, store)
    return {rec.sample_id: rec.variance for rec in records}, excluded
