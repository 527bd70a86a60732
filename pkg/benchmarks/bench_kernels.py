#!/usr/bin/env python3
"""Benchmark the native kernels against the pure-Python fallback.

Runs each hot kernel through both implementations on identical inputs,
checks the outputs agree, and prints the speedup. Usage:

    python benchmarks/bench_kernels.py [--samples N] [--iterations T]
"""

from __future__ import annotations

import argparse
import random
import sys
import time

import numpy as np

from divkit import metrics
from divkit.corpus import CaptionDataset, Sample
from divkit.kernels import _pure
from divkit.loo import _BleuEngine, _Eligible

try:
    from divkit.kernels import _native
except ImportError:
    _native = None

SLOTS = (
    "a the one".split(),
    "man woman dog kid group".split(),
    "runs walks jumps sits stands".split(),
    "in on near behind".split(),
    "the park a field the street a room".split(),
)


def synthetic_dataset(n_samples: int, seed: int = 7) -> CaptionDataset:
    gen = random.Random(seed)
    samples = []
    for i in range(n_samples):
        refs = []
        for _ in range(gen.randint(3, 6)):
            words = []
            for slot in SLOTS:
                words.extend(gen.choice(slot).split())
            refs.append(" ".join(words))
        samples.append(Sample(id=f"s{i}", split="train",
                              references=tuple(refs)))
    return CaptionDataset(name="bench", samples=tuple(samples))


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def bench_lcs(impl, pairs):
    def run():
        total = 0
        for a, b in pairs:
            total += impl.lcs_length(a, b)
        return total
    return timed(run)


def bench_matrix_kernel(impl, dataset, n_hyps):
    from divkit.scorematrix import _Interner, _cook_rows
    from divkit.textproc import tokenize

    gen = random.Random(11)
    hyps = tuple(dict.fromkeys(
        " ".join(gen.choice(slot) for slot in SLOTS) for _ in range(n_hyps)))
    hyp_tokens = [tokenize(h).tokens for h in hyps]
    sample_refs = [[tokenize(r).tokens for r in s.references]
                   for s in dataset.samples]
    interner = _Interner()
    h = _cook_rows(hyp_tokens, 4, interner, metrics.ngram_counts)
    s = _cook_rows(sample_refs, 4, interner,
                   lambda refs, k: metrics.max_ref_counts(refs, k))
    hyp_len = np.asarray([len(t) for t in hyp_tokens], dtype=np.int32)
    reflen_indptr = [0]
    reflen_vals = []
    for refs in sample_refs:
        reflen_vals.extend(len(r) for r in refs)
        reflen_indptr.append(len(reflen_vals))
    reflen_indptr = np.asarray(reflen_indptr, dtype=np.int64)
    reflen_vals = np.asarray(reflen_vals, dtype=np.int32)
    out = np.zeros((len(hyp_tokens), len(sample_refs)), dtype=np.float32)

    def run():
        impl.bleu_matrix_block(4, True, h[0], h[1], h[2], hyp_len,
                               s[0], s[1], s[2], reflen_indptr, reflen_vals,
                               out, 0, len(hyp_tokens))
        return out.copy()
    return timed(run)


def bench_loo_kernel(impl, dataset, iterations):
    eligible = _Eligible(dataset, None)
    engine = _BleuEngine(eligible, 4)
    draws = [np.asarray(eligible.draw_choices(3, t), dtype=np.int32)
             for t in range(iterations)]

    def run():
        acc = 0
        for choices in draws:
            stats = impl.bleu_loo_stats(
                4, choices, engine.rows_indptr, engine.ref_len,
                engine.entry_indptr, engine.entry_slot, engine.entry_cnt,
                engine.slot_max1, engine.slot_arg1, engine.slot_max2)
            acc += stats[2]
        return acc
    return timed(run)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--samples", type=int, default=500)
    parser.add_argument("--iterations", type=int, default=200)
    args = parser.parse_args()

    if _native is None:
        print("native kernels not built; nothing to compare "
              "(pip install -e . builds them)")
        return 1

    dataset = synthetic_dataset(args.samples)
    gen = random.Random(5)
    lcs_pairs = [([gen.randrange(30) for _ in range(12)],
                  [gen.randrange(30) for _ in range(12)])
                 for _ in range(20000)]

    print(f"corpus: {len(dataset)} samples, "
          f"{dataset.reference_count} references")
    rows = []

    out_p, t_pure = bench_lcs(_pure, lcs_pairs)
    out_n, t_native = bench_lcs(_native, lcs_pairs)
    assert out_p == out_n
    rows.append(("lcs_length x20k", t_pure, t_native))

    out_p, t_pure = bench_loo_kernel(_pure, dataset, args.iterations)
    out_n, t_native = bench_loo_kernel(_native, dataset, args.iterations)
    assert out_p == out_n
    rows.append((f"bleu_loo_stats x{args.iterations}", t_pure, t_native))

    out_p, t_pure = bench_matrix_kernel(_pure, dataset, 100)
    out_n, t_native = bench_matrix_kernel(_native, dataset, 100)
    assert np.array_equal(out_p, out_n)
    rows.append((f"bleu_matrix 100x{len(dataset)}", t_pure, t_native))

    print(f"{'kernel':30s} {'pure':>9s} {'native':>9s} {'speedup':>8s}")
    for name, t_pure, t_native in rows:
        print(f"{name:30s} {t_pure:8.3f}s {t_native:8.3f}s "
              f"{t_pure / t_native:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
