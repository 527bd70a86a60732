"""Leave-one-out ground-truth performance estimation.

Per iteration ``t`` a private RNG seeded with ``seed ^ t`` walks the
eligible samples (those with at least two references) in dataset order and
picks one reference as the hypothesis; exactly that occurrence is removed
from the reference set, so duplicate strings stay behind and can still be
matched. The corpus-level metric of the resulting (hypothesis, references)
pairs is one iteration score; the estimate is mean +/- std over iterations.

Iterations parallelize freely because every iteration owns its RNG, and
the reduction runs in fixed iteration order, so results are byte-identical
at any worker count.

The BLEU path avoids recooking the corpus per iteration: per-sample n-gram
counts are indexed once with the two largest per-reference counts, making
the leave-one-out clipped count an O(1) lookup per n-gram. ROUGE-L and
meteor_lite precompute all within-sample pair scores, reducing iterations
to table lookups. CIDEr stays an honest per-iteration computation because
its idf term is corpus-dependent and changes with every draw.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels, metrics
from .binning import quantile_assign
from .corpus import CaptionDataset, EmbeddingStore
from .semantic import sample_semantics
from .textproc import (MaskCounter, MaskingPolicy, pos_tagged_sequences,
                       semantic_mask, tokenize, vocab_tail_mask)

SUBSAMPLE_SALT = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class LooConfig:
    params: metrics.MetricParams = field(default_factory=metrics.MetricParams)
    iterations: int = 750
    seed: int = 0
    mask: MaskingPolicy = field(default_factory=MaskingPolicy)
    refs_per_sample: int | None = None
    variance_bins: int | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.refs_per_sample is not None and self.refs_per_sample < 1:
            raise ValueError("refs_per_sample must be >= 1")
        if self.variance_bins is not None and self.variance_bins < 2:
            raise ValueError("variance_bins must be >= 2")


@dataclass(frozen=True)
class LooResult:
    metric: str
    mean: float
    std: float
    iterations: int
    dropped_samples: int
    scores: tuple[float, ...] = field(repr=False)

    def to_report(self) -> dict:
        return {"metric": self.metric, "mean": self.mean, "std": self.std,
                "iterations": self.iterations,
                "dropped_samples": self.dropped_samples}


TokenMap = dict[tuple[str, int], tuple[str, ...]]


def dataset_token_map(dataset: CaptionDataset) -> TokenMap:
    return {(s.id, k): tokenize(ref).tokens
            for s in dataset.samples for k, ref in enumerate(s.references)}


def semantic_masked_token_map(dataset: CaptionDataset,
                              pos_sidecar: str | None = None) -> TokenMap:
    """Masked token sequences with mask ids unique across the whole
    corpus, assigned in deterministic dataset order."""
    tagged = pos_tagged_sequences(dataset, pos_sidecar)
    counter = MaskCounter()
    out: TokenMap = {}
    for s in dataset.samples:
        for k in range(len(s.references)):
            out[(s.id, k)] = semantic_mask(tagged[(s.id, k)], counter).tokens
    return out


def vocab_masked_token_map(dataset: CaptionDataset,
                           head_fraction: float) -> TokenMap:
    return {key: seq.tokens
            for key, seq in vocab_tail_mask(dataset, head_fraction).items()}


class _Eligible:
    """Eligible samples (>= 2 references) in dataset order, with their
    (possibly transformed) token sequences."""

    def __init__(self, dataset: CaptionDataset, token_map: TokenMap | None):
        token_map = token_map if token_map is not None else dataset_token_map(dataset)
        self.samples = [s for s in dataset.samples if len(s.references) >= 2]
        self.dropped = len(dataset.samples) - len(self.samples)
        self.ref_tokens = [
            [token_map[(s.id, k)] for k in range(len(s.references))]
            for s in self.samples
        ]
        if not self.samples:
            raise ValueError("no samples with >= 2 references")

    def draw_choices(self, seed: int, iteration: int) -> list[int]:
        rng = random.Random(seed ^ iteration)
        return [rng.randrange(len(refs)) for refs in self.ref_tokens]


def corpus_metric_score(pairs, params: metrics.MetricParams) -> float:
    """Reference corpus-level scorer shared by the slow paths and the
    tests that replay engine iterations."""
    if params.metric.startswith("bleu"):
        return metrics.corpus_bleu(pairs, params.bleu_order)
    if params.metric == "rouge_l":
        vals = [metrics.rouge_l(h, rs, params.rouge_beta) for h, rs in pairs]
    elif params.metric == "meteor_lite":
        vals = [metrics.meteor_lite(h, rs) for h, rs in pairs]
    elif params.metric == "cider":
        vals = metrics.cider(pairs, params.cider_max_n)
    else:  # pragma: no cover
        raise ValueError(params.metric)
    return sum(vals) / len(vals)


class _BleuEngine:
    def __init__(self, eligible: _Eligible, order: int):
        self.n = order
        n = order
        rows_indptr = [0]
        ref_len: list[int] = []
        entry_indptr = [0]
        entry_slot: list[int] = []
        entry_cnt: list[int] = []
        slot_max1: list[int] = []
        slot_arg1: list[int] = []
        slot_max2: list[int] = []
        for refs in eligible.ref_tokens:
            slot_of: dict[tuple, int] = {}
            cooked = [[metrics.ngram_counts(r, k) for k in range(1, n + 1)]
                      for r in refs]
            for j, per_order in enumerate(cooked):
                for counts in per_order:
                    for gram, cnt in counts.items():
                        slot = slot_of.get(gram)
                        if slot is None:
                            slot = slot_of[gram] = len(slot_max1)
                            slot_max1.append(0)
                            slot_arg1.append(-1)
                            slot_max2.append(0)
                        if cnt > slot_max1[slot]:
                            slot_max2[slot] = slot_max1[slot]
                            slot_max1[slot] = cnt
                            slot_arg1[slot] = j
                        elif cnt > slot_max2[slot]:
                            slot_max2[slot] = cnt
            for j, per_order in enumerate(cooked):
                ref_len.append(len(refs[j]))
                for counts in per_order:
                    for gram, cnt in counts.items():
                        entry_slot.append(slot_of[gram])
                        entry_cnt.append(cnt)
                    entry_indptr.append(len(entry_slot))
            rows_indptr.append(len(ref_len))
        self.rows_indptr = np.asarray(rows_indptr, dtype=np.int64)
        self.ref_len = np.asarray(ref_len, dtype=np.int32)
        self.entry_indptr = np.asarray(entry_indptr, dtype=np.int64)
        self.entry_slot = np.asarray(entry_slot, dtype=np.int64)
        self.entry_cnt = np.asarray(entry_cnt, dtype=np.int32)
        self.slot_max1 = np.asarray(slot_max1, dtype=np.int32)
        self.slot_arg1 = np.asarray(slot_arg1, dtype=np.int32)
        self.slot_max2 = np.asarray(slot_max2, dtype=np.int32)

    def score(self, choices: list[int]) -> float:
        arr = np.asarray(choices, dtype=np.int32)
        correct, guess, testlen, reflen = kernels.bleu_loo_stats(
            self.n, arr, self.rows_indptr, self.ref_len, self.entry_indptr,
            self.entry_slot, self.entry_cnt, self.slot_max1, self.slot_arg1,
            self.slot_max2)
        return metrics.bleu_score_from_stats(correct, guess, testlen, reflen,
                                             self.n, False)


class _TableEngine:
    def __init__(self, eligible: _Eligible, pair_score):
        self.tables: list[list[float]] = []
        for refs in eligible.ref_tokens:
            k = len(refs)
            cache: dict[tuple[int, int], float] = {}

            def pscore(a: int, b: int) -> float:
                key = (a, b)
                if key not in cache:
                    cache[key] = pair_score(refs[a], refs[b])
                return cache[key]

            self.tables.append([
                max(pscore(j, m) for m in range(k) if m != j)
                for j in range(k)
            ])

    def score(self, choices: list[int]) -> float:
        vals = [table[j] for table, j in zip(self.tables, choices)]
        return sum(vals) / len(vals)


class _CiderEngine:
    def __init__(self, eligible: _Eligible, max_n: int):
        self.ref_tokens = eligible.ref_tokens
        self.max_n = max_n

    def score(self, choices: list[int]) -> float:
        pairs = []
        for refs, j in zip(self.ref_tokens, choices):
            pairs.append((refs[j], refs[:j] + refs[j + 1:]))
        vals = metrics.cider(pairs, self.max_n)
        return sum(vals) / len(vals)


def _build_engine(eligible: _Eligible, params: metrics.MetricParams):
    if params.metric.startswith("bleu"):
        return _BleuEngine(eligible, params.bleu_order)
    if params.metric == "rouge_l":
        beta = params.rouge_beta
        return _TableEngine(
            eligible,
            lambda a, b: metrics.rouge_f(metrics._lcs(a, b), len(a), len(b), beta)
            if a and b else 0.0)
    if params.metric == "meteor_lite":
        return _TableEngine(
            eligible, lambda a, b: metrics.meteor_pair(a, b) if a else 0.0)
    if params.metric == "cider":
        return _CiderEngine(eligible, params.cider_max_n)
    raise ValueError(params.metric)  # pragma: no cover


def _run_iterations(config: LooConfig, eligible: _Eligible, score_fn) -> list[float]:
    def one(t: int) -> float:
        return score_fn(eligible.draw_choices(config.seed, t), t)

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(one, range(config.iterations)))
    return [one(t) for t in range(config.iterations)]


def _result(config: LooConfig, eligible: _Eligible,
            scores: list[float]) -> LooResult:
    arr = np.asarray(scores, dtype=np.float64)
    return LooResult(
        metric=config.params.metric,
        mean=float(arr.mean()),
        std=float(arr.std()),
        iterations=config.iterations,
        dropped_samples=eligible.dropped,
        scores=tuple(scores),
    )


def loo_estimate(dataset: CaptionDataset, config: LooConfig,
                 token_map: TokenMap | None = None) -> LooResult:
    eligible = _Eligible(dataset, token_map)
    engine = _build_engine(eligible, config.params)
    scores = _run_iterations(config, eligible,
                             lambda choices, _t: engine.score(choices))
    return _result(config, eligible, scores)


def masked_loo(dataset: CaptionDataset, config: LooConfig,
               pos_sidecar: str | None = None) -> LooResult:
    """Semantic masking applied to hypothesis and references before
    scoring; the hypothesis sampling stream matches ``loo_estimate`` for
    the same seed."""
    token_map = semantic_masked_token_map(dataset, pos_sidecar)
    return loo_estimate(dataset, config, token_map=token_map)


def vocab_masked_loo(dataset: CaptionDataset,
                     config: LooConfig) -> tuple[LooResult, LooResult, float]:
    """Returns (plain, masked, relative_drop)."""
    plain = loo_estimate(dataset, config)
    token_map = vocab_masked_token_map(dataset, config.mask.head_fraction)
    masked = loo_estimate(dataset, config, token_map=token_map)
    drop = 0.0 if plain.mean == 0 else (plain.mean - masked.mean) / plain.mean
    return plain, masked, drop


def refcount_sweep(dataset: CaptionDataset, config: LooConfig,
                   r_values: list[int],
                   token_map: TokenMap | None = None) -> dict[int, LooResult]:
    """Leave-one-out with the remaining reference set subsampled to
    ``min(r, |R_i|)`` without replacement (hypothesis chosen first, from
    its own RNG stream, so ``r = max ref count`` reproduces the plain
    estimate exactly)."""
    if not r_values:
        raise ValueError("r_values must be non-empty")
    if any(r < 1 for r in r_values):
        raise ValueError("every r must be >= 1")
    eligible = _Eligible(dataset, token_map)
    out: dict[int, LooResult] = {}
    for r in r_values:
        def score_fn(choices: list[int], t: int, r: int = r) -> float:
            sub_rng = random.Random((config.seed ^ t) ^ SUBSAMPLE_SALT)
            pairs = []
            for refs, j in zip(eligible.ref_tokens, choices):
                remaining = refs[:j] + refs[j + 1:]
                if len(remaining) > r:
                    idx = sorted(sub_rng.sample(range(len(remaining)), r))
                    remaining = [remaining[i] for i in idx]
                pairs.append((refs[j], remaining))
            return corpus_metric_score(pairs, config.params)

        scores = _run_iterations(config, eligible, score_fn)
        out[r] = _result(config, eligible, scores)
    return out


def variance_binned_loo(dataset: CaptionDataset, store: EmbeddingStore,
                        config: LooConfig) -> dict:
    """Quantile-bin samples by within-sample pairwise distance variance and
    run the plain estimate inside each bin."""
    bins = config.variance_bins
    if bins is None or bins < 2:
        raise ValueError("config.variance_bins must be >= 2")
    records, excluded = sample_semantics(dataset, store)
    variance_of = {rec.sample_id: rec.variance for rec in records}
    binnable = [s for s in dataset.samples if s.id in variance_of]
    values = [variance_of[s.id] for s in binnable]
    assignment = quantile_assign(values, bins)

    out: dict = {"excluded_samples": excluded, "bins": {}}
    for b in range(bins):
        members = tuple(s for s, k in zip(binnable, assignment) if k == b)
        if not members:
            out["bins"][str(b)] = None
            continue
        sub = CaptionDataset(name=f"{dataset.name}:bin{b}", samples=members)
        bin_values = [variance_of[s.id] for s in members]
        try:
            result = loo_estimate(sub, replace(config, variance_bins=None))
        except ValueError:
            out["bins"][str(b)] = None
            continue
        out["bins"][str(b)] = {
            "samples": len(members),
            "variance_min": min(bin_values),
            "variance_max": max(bin_values),
            "result": result,
        }
    return out
