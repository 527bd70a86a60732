"""Feature-extractor label overlap and concept core-set evaluation.

Label matching is case-insensitive substring containment without word
boundaries, a deliberate lower bound on conceptual overlap: the label
"playing baseball" does not match a caption containing only "baseball".
A fuzzy variant (normalized Levenshtein partial ratio, threshold 90) is
reported separately and never feeds concept pools.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import metrics
from .corpus import CaptionDataset, Sample, normalize_caption
from .textproc import tokenize


@dataclass(frozen=True)
class LabelSet:
    name: str
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("label set is empty")

    @staticmethod
    def load(path: str) -> "LabelSet":
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        labels = tuple(dict.fromkeys(
            normalize_caption(str(x)).lower() for x in doc["labels"]))
        return LabelSet(name=str(doc.get("name", "labels")), labels=labels)


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def partial_ratio(needle: str, haystack: str) -> float:
    """Best normalized Levenshtein ratio (0..100) of ``needle`` against
    any window of ``haystack`` of the same length."""
    if not needle or not haystack:
        return 0.0
    if len(needle) > len(haystack):
        needle, haystack = haystack, needle
    n = len(needle)
    best = 0.0
    for start in range(len(haystack) - n + 1):
        window = haystack[start:start + n]
        dist = levenshtein(needle, window)
        ratio = 100.0 * (2 * n - dist) / (2 * n)
        if ratio > best:
            best = ratio
            if best == 100.0:
                break
    return best


def _caption_lc(text: str) -> str:
    return normalize_caption(text).lower()


def _sample_matches(sample: Sample, labels, mode: str, threshold: float) -> bool:
    captions = [_caption_lc(r) for r in sample.references]
    for label in labels:
        for cap in captions:
            if mode == "exact":
                if label in cap:
                    return True
            else:
                if partial_ratio(label, cap) >= threshold:
                    return True
    return False


def overlap(dataset: CaptionDataset, labelset: LabelSet, mode: str = "exact",
            fuzzy_threshold: float = 90.0) -> float:
    """Percentage of samples with at least one reference matching at
    least one label."""
    if mode not in ("exact", "fuzzy"):
        raise ValueError(f"unknown overlap mode {mode!r}")
    if not dataset.samples:
        raise ValueError("empty dataset")
    hits = sum(1 for s in dataset.samples
               if _sample_matches(s, labelset.labels, mode, fuzzy_threshold))
    return 100.0 * hits / len(dataset.samples)


@dataclass
class ConceptPools:
    labelset_name: str
    pools: dict[str, tuple[str, ...]]  # label -> lowercase training captions


def build_concept_pools(train_samples: list[Sample],
                        labelset: LabelSet) -> ConceptPools:
    """Exact-substring pools; a caption joins every pool whose label it
    contains, and empty pools are retained."""
    pools: dict[str, list[str]] = {label: [] for label in labelset.labels}
    seen: dict[str, set[str]] = {label: set() for label in labelset.labels}
    for s in train_samples:
        for ref in s.references:
            cap = _caption_lc(ref)
            for label in labelset.labels:
                if label in cap and cap not in seen[label]:
                    seen[label].add(cap)
                    pools[label].append(cap)
    return ConceptPools(
        labelset_name=labelset.name,
        pools={label: tuple(caps) for label, caps in pools.items()},
    )


def concept_coreset_eval(test_samples: list[Sample], pools: ConceptPools,
                         params: metrics.MetricParams | None = None) -> dict:
    """Mean over samples of the best score among pool captions sharing a
    label with the sample's own references (the sample's own captions are
    removed from its hypothesis set first)."""
    params = params or metrics.MetricParams(metric="bleu4")
    scored: list[float] = []
    skipped = 0
    for s in test_samples:
        own = {_caption_lc(r) for r in s.references}
        matched = [label for label in pools.pools
                   if any(label in cap for cap in own)]
        hyp_set: dict[str, None] = {}
        for label in matched:
            for cap in pools.pools[label]:
                if cap not in own:
                    hyp_set[cap] = None
        if not matched or not hyp_set:
            skipped += 1
            continue
        refs = [tokenize(r).tokens for r in s.references]
        best = max(metrics.sentence_score(tokenize(h).tokens, refs, params)
                   for h in hyp_set)
        scored.append(best)
    if not scored:
        raise ValueError("all samples were skipped (no usable hypothesis sets)")
    return {
        "mean_best_score": sum(scored) / len(scored),
        "scored_samples": len(scored),
        "skipped_samples": skipped,
        "metric": params.metric,
    }
