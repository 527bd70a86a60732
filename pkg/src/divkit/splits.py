"""Diversity-stratified evaluation split generation.

Split files are derived artifacts (`{"axis": ..., "bins": {...},
"seed": ...}`), never mutations of the source dataset. Quantile axes
partition the eligible samples; the concept axis may put a sample in
several label bins, with a "none" bin keeping the union exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass

from .binning import quantile_assign
from .concepts import LabelSet, _caption_lc
from .corpus import CaptionDataset, EmbeddingStore
from .semantic import sample_semantics
from .textproc import tokenize

AXES = ("caption_length", "concept_label", "sample_variance")


@dataclass(frozen=True)
class SplitSpec:
    axis: str
    bins: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown split axis {self.axis!r}")
        if self.axis != "concept_label" and self.bins < 2:
            raise ValueError("quantile axes need bins >= 2")


def generate_splits(dataset: CaptionDataset, spec: SplitSpec,
                    labelset: LabelSet | None = None,
                    store: EmbeddingStore | None = None) -> dict:
    if spec.axis == "caption_length":
        values = [
            sum(len(tokenize(r).tokens) for r in s.references) / len(s.references)
            for s in dataset.samples
        ]
        assignment = quantile_assign(values, spec.bins)
        bins: dict[str, list[str]] = {str(b): [] for b in range(spec.bins)}
        for s, b in zip(dataset.samples, assignment):
            bins[str(b)].append(s.id)
    elif spec.axis == "sample_variance":
        if store is None:
            raise ValueError("sample_variance axis requires embeddings")
        records, _ = sample_semantics(dataset, store)
        variance_of = {rec.sample_id: rec.variance for rec in records}
        eligible = [s for s in dataset.samples if s.id in variance_of]
        values = [variance_of[s.id] for s in eligible]
        assignment = quantile_assign(values, spec.bins)
        bins = {str(b): [] for b in range(spec.bins)}
        bins["none"] = [s.id for s in dataset.samples
                        if s.id not in variance_of]
        for s, b in zip(eligible, assignment):
            bins[str(b)].append(s.id)
    else:  # concept_label
        if labelset is None:
            raise ValueError("concept_label axis requires a label set")
        bins = {label: [] for label in labelset.labels}
        bins["none"] = []
        for s in dataset.samples:
            captions = [_caption_lc(r) for r in s.references]
            matched = [label for label in labelset.labels
                       if any(label in cap for cap in captions)]
            if matched:
                for label in matched:
                    bins[label].append(s.id)
            else:
                bins["none"].append(s.id)
    return {"axis": spec.axis, "bins": bins, "seed": spec.seed}
