"""Pure and native kernels must agree exactly (same layouts, same math)."""

import random

import numpy as np
import pytest

from divkit.kernels import _pure

native = pytest.importorskip("divkit.kernels._native")


def test_lcs_equivalence():
    gen = random.Random(41)
    for _ in range(60):
        a = [gen.randrange(6) for _ in range(gen.randrange(0, 12))]
        b = [gen.randrange(6) for _ in range(gen.randrange(0, 12))]
        assert _pure.lcs_length(a, b) == native.lcs_length(a, b)


def _random_bleu_inputs(gen, nrows, ncols, n):
    from divkit import metrics
    from divkit.scorematrix import _Interner, _cook_rows

    vocab = "a b c d e f".split()
    hyp_tokens = [tuple(gen.choice(vocab) for _ in range(gen.randrange(0, 7)))
                  for _ in range(nrows)]
    sample_refs = [[tuple(gen.choice(vocab) for _ in range(gen.randrange(1, 7)))
                    for _ in range(gen.randrange(1, 4))]
                   for _ in range(ncols)]
    interner = _Interner()
    h = _cook_rows(hyp_tokens, n, interner, metrics.ngram_counts)
    s = _cook_rows(sample_refs, n, interner,
                   lambda refs, k: metrics.max_ref_counts(refs, k))
    hyp_len = np.asarray([len(t) for t in hyp_tokens], dtype=np.int32)
    reflen_indptr = [0]
    reflen_vals = []
    for refs in sample_refs:
        reflen_vals.extend(len(r) for r in refs)
        reflen_indptr.append(len(reflen_vals))
    return (h, s, hyp_len, np.asarray(reflen_indptr, dtype=np.int64),
            np.asarray(reflen_vals, dtype=np.int32), nrows, ncols)


@pytest.mark.parametrize("smoothing", [True, False])
def test_bleu_matrix_block_equivalence(smoothing):
    gen = random.Random(17)
    for _ in range(10):
        n = gen.choice([1, 2, 4])
        (h, s, hyp_len, r_indptr, r_vals, nrows, ncols) = \
            _random_bleu_inputs(gen, gen.randrange(1, 6), gen.randrange(1, 6), n)
        out_a = np.zeros((nrows, ncols), dtype=np.float32)
        out_b = np.zeros((nrows, ncols), dtype=np.float32)
        _pure.bleu_matrix_block(n, smoothing, h[0], h[1], h[2], hyp_len,
                                s[0], s[1], s[2], r_indptr, r_vals,
                                out_a, 0, nrows)
        native.bleu_matrix_block(n, smoothing, h[0], h[1], h[2], hyp_len,
                                 s[0], s[1], s[2], r_indptr, r_vals,
                                 out_b, 0, nrows)
        assert np.array_equal(out_a, out_b)


def test_bleu_loo_stats_equivalence():
    import random as _random

    from divkit.loo import LooConfig, _BleuEngine, _Eligible

    from conftest import random_corpus

    gen = _random.Random(3)
    ds = random_corpus(gen, n_samples=7, min_refs=2, max_refs=5)
    eligible = _Eligible(ds, None)
    engine = _BleuEngine(eligible, 4)
    for t in range(6):
        choices = np.asarray(eligible.draw_choices(99, t), dtype=np.int32)
        a = _pure.bleu_loo_stats(4, choices, engine.rows_indptr,
                                 engine.ref_len, engine.entry_indptr,
                                 engine.entry_slot, engine.entry_cnt,
                                 engine.slot_max1, engine.slot_arg1,
                                 engine.slot_max2)
        b = native.bleu_loo_stats(4, choices, engine.rows_indptr,
                                  engine.ref_len, engine.entry_indptr,
                                  engine.entry_slot, engine.entry_cnt,
                                  engine.slot_max1, engine.slot_arg1,
                                  engine.slot_max2)
        assert list(a[0]) == list(b[0])
        assert list(a[1]) == list(b[1])
        assert a[2:] == b[2:]


def test_selected_backend_reported():
    from divkit import kernels
    assert kernels.BACKEND in ("pure", "native")
