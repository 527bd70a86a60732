"""Greedy set-cover caption core-sets over a score matrix.

A sample is covered by a hypothesis when its matrix score meets the
threshold (a per-sample requirement, stricter than covering a mean).
The greedy loop picks the hypothesis covering the most still-uncovered
samples, breaking ties toward the lower hypothesis index, which makes the
selection fully deterministic. Columns whose best score is below the
threshold are reported as uncoverable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scorematrix import ScoreMatrix


@dataclass(frozen=True)
class CoverResult:
    threshold: float
    selected: tuple[str, ...]  # greedy pick order
    selected_indices: tuple[int, ...]
    covered: int
    coverable: int
    uncoverable: tuple[str, ...]
    mean_covered_score: float


def greedy_cover(matrix: ScoreMatrix, threshold: float) -> CoverResult:
    values = matrix.values
    if values.size == 0:
        raise ValueError("empty score matrix")
    covers = values >= np.float32(threshold)
    col_best = values.max(axis=0)
    coverable_mask = covers.any(axis=0)
    uncoverable = tuple(sid for sid, ok in zip(matrix.sample_ids, coverable_mask)
                        if not ok)

    uncovered = coverable_mask.copy()
    picked: list[int] = []
    while uncovered.any():
        gains = covers[:, uncovered].sum(axis=1)
        best = int(np.argmax(gains))  # argmax takes the first max: lowest index
        if gains[best] == 0:  # pragma: no cover - coverable_mask prevents this
            break
        picked.append(best)
        uncovered &= ~covers[best]

    covered = int(coverable_mask.sum())
    if picked:
        best_per_col = values[picked][:, coverable_mask].max(axis=0) \
            if covered else np.zeros(0, dtype=np.float32)
        mean_score = float(best_per_col.mean()) if covered else 0.0
    else:
        mean_score = 0.0
    return CoverResult(
        threshold=float(threshold),
        selected=tuple(matrix.hypothesis_keys[i] for i in picked),
        selected_indices=tuple(picked),
        covered=covered,
        coverable=covered,
        uncoverable=uncoverable,
        mean_covered_score=mean_score,
    )


def coverage_curve(matrix: ScoreMatrix,
                   thresholds: list[float]) -> list[CoverResult]:
    if sorted(thresholds) != list(thresholds):
        raise ValueError("thresholds must be sorted ascending")
    return [greedy_cover(matrix, t) for t in thresholds]
