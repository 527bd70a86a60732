"""Pure-Python kernels.

Mirror of the native extension in ``_native.pyx``: same functions, same
flat-array layouts, same arithmetic (and therefore bit-identical output).
The selector in ``__init__`` falls back to this module when the extension
is unavailable or DIVKIT_PURE_PYTHON=1.

Layout conventions shared with the native kernel:

* N-gram ids are interned integers, one id space across all orders.
* Per-row, per-order segments live in one flat ids/counts array addressed
  by ``indptr[row * n + k]`` .. ``indptr[row * n + k + 1]``.
* ``slot_*`` arrays hold, per sample-local n-gram slot, the largest and
  second-largest per-reference count and which reference attains the
  largest; leaving one reference out then costs O(1) per slot.
"""

from __future__ import annotations

from math import exp, log

BACKEND = "pure"


def lcs_length(a, b) -> int:
    """Longest common subsequence length of two int sequences."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0
    if la < lb:
        a, b, la, lb = b, a, lb, la
    a = list(a)
    b = list(b)
    prev = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur = [0] * (lb + 1)
        ai = a[i - 1]
        for j in range(1, lb + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                pj, cj = prev[j], cur[j - 1]
                cur[j] = pj if pj >= cj else cj
        prev = cur
    return prev[lb]


def _closest_len(lens, start, end, target, skip=-1):
    best = -1
    best_d = 1 << 60
    for i in range(start, end):
        if i == skip:
            continue
        l = lens[i]
        d = l - target if l >= target else target - l
        if d < best_d or (d == best_d and l < best):
            best_d = d
            best = l
    return best


def bleu_matrix_block(n, smoothing, hyp_indptr, hyp_ids, hyp_cnts, hyp_len,
                      smp_indptr, smp_ids, smp_maxcnt,
                      reflen_indptr, reflen_vals, out, r0, r1):
    """Fill ``out[r0:r1, :]`` with sentence BLEU@n scores.

    Hypothesis r vs sample c: clipped modified precisions against the
    sample's max reference counts, add-one smoothing on orders >= 2 when
    requested, closest-reference-length brevity penalty.
    """
    hyp_indptr = list(hyp_indptr)
    hyp_ids = list(hyp_ids)
    hyp_cnts = list(hyp_cnts)
    hyp_len = list(hyp_len)
    smp_indptr = list(smp_indptr)
    smp_ids = list(smp_ids)
    smp_maxcnt = list(smp_maxcnt)
    reflen_indptr = list(reflen_indptr)
    reflen_vals = list(reflen_vals)
    ncols = len(reflen_indptr) - 1
    for r in range(r0, r1):
        hlen = hyp_len[r]
        row_out = out[r]
        for c in range(ncols):
            if hlen == 0:
                row_out[c] = 0.0
                continue
            log_sum = 0.0
            zero = False
            for k in range(n):
                guess = hlen - k if hlen > k else 0
                correct = 0
                hs, he = hyp_indptr[r * n + k], hyp_indptr[r * n + k + 1]
                ss, se = smp_indptr[c * n + k], smp_indptr[c * n + k + 1]
                for e in range(hs, he):
                    gid = hyp_ids[e]
                    lo, hi = ss, se
                    while lo < hi:
                        mid = (lo + hi) >> 1
                        if smp_ids[mid] < gid:
                            lo = mid + 1
                        else:
                            hi = mid
                    if lo < se and smp_ids[lo] == gid:
                        cnt = hyp_cnts[e]
                        mc = smp_maxcnt[lo]
                        correct += cnt if cnt < mc else mc
                if smoothing and k >= 1:
                    correct += 1
                    guess += 1
                if guess == 0:
                    continue  # vacuous order: p = 1
                if correct == 0:
                    zero = True
                    break
                log_sum += log(correct / guess)
            if zero:
                row_out[c] = 0.0
                continue
            score = exp(log_sum / n)
            reflen = _closest_len(reflen_vals, reflen_indptr[c],
                                  reflen_indptr[c + 1], hlen)
            if hlen < reflen:
                score *= exp(1.0 - reflen / hlen)
            row_out[c] = score


def bleu_loo_stats(n, choices, rows_indptr, ref_len,
                   entry_indptr, entry_slot, entry_cnt,
                   slot_max1, slot_arg1, slot_max2):
    """Pooled corpus-BLEU statistics for one leave-one-out draw.

    ``choices[s]`` is the within-sample index of the hypothesis reference
    (< 0 drops the sample). Returns (correct[n], guess[n], testlen, reflen)
    with counts pooled over all kept samples.
    """
    choices = list(choices)
    rows_indptr = list(rows_indptr)
    ref_len = list(ref_len)
    entry_indptr = list(entry_indptr)
    entry_slot = list(entry_slot)
    entry_cnt = list(entry_cnt)
    slot_max1 = list(slot_max1)
    slot_arg1 = list(slot_arg1)
    slot_max2 = list(slot_max2)
    correct = [0] * n
    guess = [0] * n
    testlen = 0
    reflen = 0
    for s in range(len(choices)):
        j = choices[s]
        if j < 0:
            continue
        row = rows_indptr[s] + j
        hlen = ref_len[row]
        testlen += hlen
        reflen += _closest_len(ref_len, rows_indptr[s], rows_indptr[s + 1],
                               hlen, skip=row)
        for k in range(n):
            if hlen > k:
                guess[k] += hlen - k
            acc = 0
            for e in range(entry_indptr[row * n + k],
                           entry_indptr[row * n + k + 1]):
                slot = entry_slot[e]
                m = slot_max1[slot] if slot_arg1[slot] != j else slot_max2[slot]
                cnt = entry_cnt[e]
                acc += cnt if cnt < m else m
            correct[k] += acc
    return correct, guess, testlen, reflen
