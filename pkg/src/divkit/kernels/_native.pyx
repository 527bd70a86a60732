# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Native kernels. Semantics and layouts match ``_pure`` exactly; see the
layout notes there. Heavy loops run without the GIL so thread pools scale."""

from libc.math cimport exp, log
from libc.stdlib cimport free, malloc

import numpy as np

BACKEND = "native"


def lcs_length(a, b):
    """Longest common subsequence length of two int sequences."""
    cdef long[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef long[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t la = av.shape[0], lb = bv.shape[0]
    if la == 0 or lb == 0:
        return 0
    if la < lb:
        av, bv = bv, av
        la, lb = lb, la
    cdef long *prev = <long *> malloc((lb + 1) * sizeof(long))
    cdef long *cur = <long *> malloc((lb + 1) * sizeof(long))
    if prev == NULL or cur == NULL:
        free(prev); free(cur)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef long ai, pj, cj, result
    cdef long *tmp
    with nogil:
        for j in range(lb + 1):
            prev[j] = 0
        for i in range(1, la + 1):
            cur[0] = 0
            ai = av[i - 1]
            for j in range(1, lb + 1):
                if ai == bv[j - 1]:
                    cur[j] = prev[j - 1] + 1
                else:
                    pj = prev[j]; cj = cur[j - 1]
                    cur[j] = pj if pj >= cj else cj
            tmp = prev; prev = cur; cur = tmp
        result = prev[lb]
    free(prev); free(cur)
    return result


cdef inline long _closest_len(const int[::1] lens, Py_ssize_t start,
                              Py_ssize_t end, long target,
                              Py_ssize_t skip) noexcept nogil:
    cdef long best = -1
    cdef long best_d = <long> 1 << 60
    cdef long l, d
    cdef Py_ssize_t i
    for i in range(start, end):
        if i == skip:
            continue
        l = lens[i]
        d = l - target if l >= target else target - l
        if d < best_d or (d == best_d and l < best):
            best_d = d
            best = l
    return best


def bleu_matrix_block(int n, bint smoothing,
                      const long[::1] hyp_indptr, const long[::1] hyp_ids,
                      const int[::1] hyp_cnts, const int[::1] hyp_len,
                      const long[::1] smp_indptr, const long[::1] smp_ids,
                      const int[::1] smp_maxcnt,
                      const long[::1] reflen_indptr, const int[::1] reflen_vals,
                      float[:, ::1] out, Py_ssize_t r0, Py_ssize_t r1):
    """Fill ``out[r0:r1, :]`` with sentence BLEU@n scores (see _pure)."""
    cdef Py_ssize_t ncols = reflen_indptr.shape[0] - 1
    cdef Py_ssize_t r, c, e, lo, hi, mid, hs, he, ss, se
    cdef int k
    cdef long hlen, guess, correct, cnt, mc, gid, reflen
    cdef double log_sum, score
    cdef bint zero
    with nogil:
        for r in range(r0, r1):
            hlen = hyp_len[r]
            for c in range(ncols):
                if hlen == 0:
                    out[r, c] = 0.0
                    continue
                log_sum = 0.0
                zero = False
                for k in range(n):
                    guess = hlen - k if hlen > k else 0
                    correct = 0
                    hs = hyp_indptr[r * n + k]; he = hyp_indptr[r * n + k + 1]
                    ss = smp_indptr[c * n + k]; se = smp_indptr[c * n + k + 1]
                    for e in range(hs, he):
                        gid = hyp_ids[e]
                        lo = ss; hi = se
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
                    log_sum += log((<double> correct) / (<double> guess))
                if zero:
                    out[r, c] = 0.0
                    continue
                score = exp(log_sum / n)
                reflen = _closest_len(reflen_vals, reflen_indptr[c],
                                      reflen_indptr[c + 1], hlen, -1)
                if hlen < reflen:
                    score *= exp(1.0 - (<double> reflen) / (<double> hlen))
                out[r, c] = <float> score


def bleu_loo_stats(int n, const int[::1] choices,
                   const long[::1] rows_indptr, const int[::1] ref_len,
                   const long[::1] entry_indptr, const long[::1] entry_slot,
                   const int[::1] entry_cnt,
                   const int[::1] slot_max1, const int[::1] slot_arg1,
                   const int[::1] slot_max2):
    """Pooled corpus-BLEU statistics for one leave-one-out draw (see _pure)."""
    cdef long[4] correct
    cdef long[4] guess
    cdef int k
    for k in range(4):
        correct[k] = 0
        guess[k] = 0
    cdef long testlen = 0, reflen = 0
    cdef Py_ssize_t s, row, e
    cdef long j, hlen, m, cnt, acc, slot
    cdef Py_ssize_t nsamples = choices.shape[0]
    with nogil:
        for s in range(nsamples):
            j = choices[s]
            if j < 0:
                continue
            row = rows_indptr[s] + j
            hlen = ref_len[row]
            testlen += hlen
            reflen += _closest_len(ref_len, rows_indptr[s],
                                   rows_indptr[s + 1], hlen, row)
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
    return ([correct[k] for k in range(n)], [guess[k] for k in range(n)],
            testlen, reflen)
