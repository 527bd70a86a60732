"""Quantile binning shared by the split generator and variance-binned LOO.

Assignment is threshold-based: bin ``k`` takes values up to the empirical
quantile at rank ceil(n * (k+1) / B), and ties at a boundary always fall
to the lower bin, so equal values can never straddle a boundary.
"""

from __future__ import annotations

import math


def quantile_assign(values: list[float], bins: int) -> list[int]:
    if bins < 2:
        raise ValueError("need at least 2 bins")
    n = len(values)
    if n == 0:
        return []
    ordered = sorted(values)
    thresholds = [ordered[min(n, math.ceil(n * (k + 1) / bins)) - 1]
                  for k in range(bins)]
    out: list[int] = []
    for v in values:
        for k in range(bins):
            if v <= thresholds[k]:
                out.append(k)
                break
        else:
            out.append(bins - 1)
    return out
