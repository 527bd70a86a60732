"""Sentence- and corpus-level n-gram description metrics.

BLEU@N: clipped modified n-gram precisions with a closest-reference-length
brevity penalty, geometric mean over orders. Orders with no n-grams to
propose (hypothesis shorter than the order) are vacuously perfect, which
makes ``hyp == ref`` score exactly 1.0 at every N. Sentence-level calls
may add one to numerator and denominator of orders >= 2 (the smoothing
used for per-sample score matrices); corpus-level pooling never smooths.

ROUGE-L: per reference F-score from LCS precision/recall with a recall
bias ``beta``, maximum over references.

CIDEr: TF-IDF cosine similarity per n-gram order, idf computed over the
reference sets of exactly the pairs passed in (the score is evaluation-set
dependent by construction), averaged over references then orders, x10.

meteor_lite: exact + suffix-stem unigram alignment that maximizes matches
and then minimizes chunks, harmonic mean weighted toward recall with a
fragmentation penalty. No synonym or paraphrase stage: values are not
comparable to full METEOR.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import exp, log
from typing import Iterable, Sequence

from . import kernels

METRICS = ("bleu1", "bleu2", "bleu3", "bleu4", "rouge_l", "cider", "meteor_lite")
BOUNDED_METRICS = ("bleu1", "bleu2", "bleu3", "bleu4", "rouge_l", "meteor_lite")


@dataclass(frozen=True)
class MetricParams:
    metric: str = "bleu4"
    bleu_smoothing: str = "add_one_counts"  # none | add_one_counts
    rouge_beta: float = 1.2
    cider_max_n: int = 4

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.bleu_smoothing not in ("none", "add_one_counts"):
            raise ValueError(f"unknown smoothing {self.bleu_smoothing!r}")
        if self.rouge_beta <= 0:
            raise ValueError("rouge_beta must be positive")
        if not 1 <= self.cider_max_n <= 4:
            raise ValueError("cider_max_n must be in [1, 4]")

    @property
    def bleu_order(self) -> int:
        if not self.metric.startswith("bleu"):
            raise ValueError(f"{self.metric} has no BLEU order")
        return int(self.metric[-1])

    def key(self) -> dict:
        return {"metric": self.metric, "bleu_smoothing": self.bleu_smoothing,
                "rouge_beta": self.rouge_beta, "cider_max_n": self.cider_max_n}


def _toks(x) -> tuple[str, ...]:
    tokens = getattr(x, "tokens", None)
    return tokens if tokens is not None else tuple(x)


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def max_ref_counts(refs: Iterable[Sequence[str]], n: int) -> Counter:
    merged: Counter = Counter()
    for ref in refs:
        for gram, cnt in ngram_counts(ref, n).items():
            if cnt > merged[gram]:
                merged[gram] = cnt
    return merged


def closest_ref_len(ref_lens: Iterable[int], hyp_len: int) -> int:
    return min(ref_lens, key=lambda l: (abs(l - hyp_len), l))


def bleu_score_from_stats(correct: Sequence[int], guess: Sequence[int],
                          testlen: int, reflen: int, n: int,
                          smoothing: bool) -> float:
    if testlen == 0:
        return 0.0
    log_sum = 0.0
    for k in range(n):
        c, g = correct[k], guess[k]
        if smoothing and k >= 1:
            c += 1
            g += 1
        if g == 0:
            continue  # vacuous order: p = 1
        if c == 0:
            return 0.0
        log_sum += log(c / g)
    score = exp(log_sum / n)
    if testlen < reflen:
        score *= exp(1.0 - reflen / testlen)
    return score


def pair_bleu_stats(hyp, refs, n: int) -> tuple[list[int], list[int], int, int]:
    hyp = _toks(hyp)
    ref_tokens = [_toks(r) for r in refs]
    if not ref_tokens:
        raise ValueError("refs must be non-empty")
    hlen = len(hyp)
    correct, guess = [0] * n, [0] * n
    for k in range(1, n + 1):
        counts = ngram_counts(hyp, k)
        maxes = max_ref_counts(ref_tokens, k)
        correct[k - 1] = sum(min(c, maxes[g]) for g, c in counts.items())
        guess[k - 1] = max(0, hlen - k + 1)
    reflen = closest_ref_len([len(r) for r in ref_tokens], hlen) if hlen else 0
    return correct, guess, hlen, reflen


def sentence_bleu(hyp, refs, n: int = 4,
                  smoothing: str = "add_one_counts") -> float:
    if not 1 <= n <= 4:
        raise ValueError("BLEU order must be in [1, 4]")
    correct, guess, testlen, reflen = pair_bleu_stats(hyp, refs, n)
    return bleu_score_from_stats(correct, guess, testlen, reflen, n,
                                 smoothing == "add_one_counts")


def corpus_bleu(pairs: Sequence[tuple], n: int = 4) -> float:
    """Counts pooled over all pairs before the geometric mean; brevity
    penalty from summed hypothesis/closest-reference lengths. Unsmoothed."""
    if not pairs:
        raise ValueError("pairs must be non-empty")
    tot_c, tot_g = [0] * n, [0] * n
    tot_test = tot_ref = 0
    for hyp, refs in pairs:
        correct, guess, testlen, reflen = pair_bleu_stats(hyp, refs, n)
        for k in range(n):
            tot_c[k] += correct[k]
            tot_g[k] += guess[k]
        tot_test += testlen
        tot_ref += reflen
    return bleu_score_from_stats(tot_c, tot_g, tot_test, tot_ref, n, False)


def _lcs(a: Sequence[str], b: Sequence[str]) -> int:
    vocab: dict[str, int] = {}
    ai = [vocab.setdefault(t, len(vocab)) for t in a]
    bi = [vocab.setdefault(t, len(vocab)) for t in b]
    return kernels.lcs_length(ai, bi)


def rouge_f(lcs: int, hyp_len: int, ref_len: int, beta: float) -> float:
    if lcs == 0 or hyp_len == 0 or ref_len == 0:
        return 0.0
    p = lcs / hyp_len
    r = lcs / ref_len
    return (1 + beta * beta) * p * r / (r + beta * beta * p)


def rouge_l(hyp, refs, beta: float = 1.2) -> float:
    hyp = _toks(hyp)
    ref_tokens = [_toks(r) for r in refs]
    if not ref_tokens:
        raise ValueError("refs must be non-empty")
    if not hyp:
        return 0.0
    return max(rouge_f(_lcs(hyp, r), len(hyp), len(r), beta)
               for r in ref_tokens)


def _all_order_counts(tokens: Sequence[str], max_n: int) -> Counter:
    counts: Counter = Counter()
    for k in range(1, max_n + 1):
        counts.update(tuple(tokens[i:i + k]) for i in range(len(tokens) - k + 1))
    return counts


def cider_document_frequency(ref_sets: Sequence[Sequence[Sequence[str]]],
                             max_n: int) -> Counter:
    df: Counter = Counter()
    for refs in ref_sets:
        seen: set = set()
        for ref in refs:
            seen.update(_all_order_counts(_toks(ref), max_n))
        df.update(seen)
    return df


def _tfidf_by_order(counts: Counter, df: Counter, log_n: float,
                    max_n: int) -> tuple[list[dict], list[float]]:
    vecs: list[dict] = [dict() for _ in range(max_n)]
    norms = [0.0] * max_n
    for gram, tf in counts.items():
        idf = log_n - log(max(1.0, df[gram]))
        w = tf * idf
        order = len(gram) - 1
        vecs[order][gram] = w
        norms[order] += w * w
    return vecs, [n ** 0.5 for n in norms]


def cider(pairs: Sequence[tuple], max_n: int = 4) -> list[float]:
    """Per-pair CIDEr scores; document frequency comes from the reference
    sets of exactly the pairs given."""
    if not pairs:
        raise ValueError("pairs must be non-empty")
    df = cider_document_frequency([refs for _, refs in pairs], max_n)
    log_n = log(len(pairs))
    scores: list[float] = []
    for hyp, refs in pairs:
        hvecs, hnorms = _tfidf_by_order(_all_order_counts(_toks(hyp), max_n),
                                        df, log_n, max_n)
        order_sums = [0.0] * max_n
        for ref in refs:
            rvecs, rnorms = _tfidf_by_order(
                _all_order_counts(_toks(ref), max_n), df, log_n, max_n)
            for k in range(max_n):
                if hnorms[k] == 0.0 or rnorms[k] == 0.0:
                    continue
                dot = 0.0
                hv, rv = hvecs[k], rvecs[k]
                if len(rv) < len(hv):
                    hv, rv = rv, hv
                for gram, w in hv.items():
                    rw = rv.get(gram)
                    if rw is not None:
                        dot += w * rw
                order_sums[k] += dot / (hnorms[k] * rnorms[k])
        nrefs = len(refs)
        scores.append(10.0 * sum(s / nrefs for s in order_sums) / max_n)
    return scores


def stem(token: str) -> str:
    """Suffix-strip stemmer used by meteor_lite (exact matches always stem
    to themselves or a shared base, so stem equality subsumes equality)."""
    for suffix in ("ing", "ed", "es", "s"):
        if token.endswith(suffix) and len(token) - len(suffix) >= 3:
            return token[:-len(suffix)]
    return token


def meteor_alignment(hyp: Sequence[str], ref: Sequence[str]) -> tuple[int, int]:
    """(matches, chunks) of an alignment maximizing matches, then
    minimizing chunks. Exact search: branch and bound over hypothesis
    positions with dominance memoization on (position, used-reference set,
    previous aligned reference)."""
    hstem = [stem(t) for t in hyp]
    rstem = [stem(t) for t in ref]
    cand = [tuple(j for j, rs in enumerate(rstem) if rs == hs) for hs in hstem]
    rcounts = Counter(rstem)
    max_matches = sum(min(c, rcounts[s]) for s, c in Counter(hstem).items())
    if max_matches == 0:
        return 0, 0

    nh = len(hyp)
    suffix_possible = [0] * (nh + 1)
    for i in range(nh - 1, -1, -1):
        suffix_possible[i] = suffix_possible[i + 1] + (1 if cand[i] else 0)

    best = max_matches + 1
    memo: dict[tuple[int, int, int], int] = {}

    def dfs(i: int, used: int, prev_ref: int, matches: int, chunks: int):
        nonlocal best
        if chunks >= best or matches + suffix_possible[i] < max_matches:
            return
        if i == nh:
            if matches == max_matches:
                best = chunks
            return
        key = (i, used, prev_ref)
        seen = memo.get(key)
        if seen is not None and seen <= chunks:
            return
        memo[key] = chunks
        options = cand[i]
        follow = prev_ref + 1 if prev_ref >= 0 else -1
        if follow in options:  # try chunk continuation first
            if not used & (1 << follow):
                dfs(i + 1, used | (1 << follow), follow, matches + 1, chunks)
        for j in options:
            if j == follow or used & (1 << j):
                continue
            dfs(i + 1, used | (1 << j), j, matches + 1, chunks + 1)
        dfs(i + 1, used, -1, matches, chunks)

    dfs(0, 0, -1, 0, 0)
    return max_matches, best


def meteor_pair(hyp: Sequence[str], ref: Sequence[str]) -> float:
    matches, chunks = meteor_alignment(hyp, ref)
    if matches == 0:
        return 0.0
    p = matches / len(hyp)
    r = matches / len(ref)
    f_mean = 10.0 * p * r / (r + 9.0 * p)
    penalty = 0.5 * (chunks / matches) ** 3
    return f_mean * (1.0 - penalty)


def meteor_lite(hyp, refs) -> float:
    hyp = _toks(hyp)
    ref_tokens = [_toks(r) for r in refs]
    if not ref_tokens:
        raise ValueError("refs must be non-empty")
    if not hyp:
        return 0.0
    return max(meteor_pair(hyp, r) for r in ref_tokens)


def sentence_score(hyp, refs, params: MetricParams) -> float:
    """Single-pair dispatcher for the sentence-scorable metrics."""
    if params.metric.startswith("bleu"):
        return sentence_bleu(hyp, refs, params.bleu_order, params.bleu_smoothing)
    if params.metric == "rouge_l":
        return rouge_l(hyp, refs, params.rouge_beta)
    if params.metric == "meteor_lite":
        return meteor_lite(hyp, refs)
    raise ValueError(f"{params.metric} is corpus-dependent; no single-pair form")
