"""Token, POS, and n-gram diversity statistics.

Uniqueness measures are occurrence-based: a sample's within-sample
uniqueness is the percentage of its token occurrences whose type occurs
exactly once inside the sample, and its between-sample uniqueness is the
percentage of occurrences whose type never occurs in any other sample;
dataset numbers average the per-sample percentages.

The n-gram model pads every reference with one begin and one end marker.
EVS@N is the fraction of observed (N-1)-token contexts with at least two
distinct successors; contexts are counted as types, with an
occurrence-weighted variant reported alongside. ED@N sums EVS over
generation positions with the order schedule 2, 3, 4, 4, ...
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .corpus import CaptionDataset
from .textproc import (NOUN_TAGS, VERB_TAGS, TokenSequence, head_types,
                       pos_tagged_sequences, tokenize)

BOS = "⟨bos⟩"
EOS = "⟨eos⟩"


@dataclass(frozen=True)
class VocabStats:
    unique: int
    ws_unique: float  # percent
    bs_unique: float  # percent
    head: int


@dataclass(frozen=True)
class PosStats:
    wsnu: float
    bsnu: float
    wsvu: float
    bsvu: float
    nc: int
    vc: int
    nh: int
    vh: int
    npc: float
    vpc: float
    tpc: float


@dataclass
class NGramModel:
    order: int
    table: dict[tuple[str, ...], Counter]

    def __len__(self) -> int:
        return len(self.table)


def _class_stats(per_sample: list[list[str]]) -> VocabStats:
    """Uniqueness/head statistics over per-sample occurrence lists."""
    corpus_counts: Counter = Counter()
    type_samples: Counter = Counter()  # type -> number of samples containing it
    for occurrences in per_sample:
        corpus_counts.update(occurrences)
        type_samples.update(set(occurrences))
    if not corpus_counts:
        return VocabStats(unique=0, ws_unique=0.0, bs_unique=0.0, head=0)

    ws_values: list[float] = []
    bs_values: list[float] = []
    for occurrences in per_sample:
        if not occurrences:
            continue
        local = Counter(occurrences)
        once = sum(1 for tok in occurrences if local[tok] == 1)
        ws_values.append(100.0 * once / len(occurrences))
        exclusive = sum(1 for tok in occurrences if type_samples[tok] == 1)
        bs_values.append(100.0 * exclusive / len(occurrences))

    head = head_types(dict(corpus_counts), 0.9)
    return VocabStats(
        unique=len(corpus_counts),
        ws_unique=sum(ws_values) / len(ws_values),
        bs_unique=sum(bs_values) / len(bs_values),
        head=len(head),
    )


def vocab_stats(dataset: CaptionDataset) -> VocabStats:
    if not dataset.samples:
        raise ValueError("empty dataset")
    per_sample = [
        [tok for ref in s.references for tok in tokenize(ref).tokens]
        for s in dataset.samples
    ]
    return _class_stats(per_sample)


def pos_stats(dataset: CaptionDataset, pos_sidecar: str | None = None) -> PosStats:
    if not dataset.samples:
        raise ValueError("empty dataset")
    tagged = pos_tagged_sequences(dataset, pos_sidecar)
    noun_per_sample: list[list[str]] = []
    verb_per_sample: list[list[str]] = []
    npc_total = vpc_total = tpc_total = 0
    caption_count = 0
    for s in dataset.samples:
        nouns: list[str] = []
        verbs: list[str] = []
        for k in range(len(s.references)):
            seq = tagged[(s.id, k)]
            caption_count += 1
            tpc_total += len(seq.tokens)
            for tok, tag in zip(seq.tokens, seq.pos):
                if tag in NOUN_TAGS:
                    nouns.append(tok)
                elif tag in VERB_TAGS:
                    verbs.append(tok)
        npc_total += len(nouns)
        vpc_total += len(verbs)
        noun_per_sample.append(nouns)
        verb_per_sample.append(verbs)
    nstats = _class_stats(noun_per_sample)
    vstats = _class_stats(verb_per_sample)
    return PosStats(
        wsnu=nstats.ws_unique, bsnu=nstats.bs_unique,
        wsvu=vstats.ws_unique, bsvu=vstats.bs_unique,
        nc=nstats.unique, vc=vstats.unique,
        nh=nstats.head, vh=vstats.head,
        npc=npc_total / caption_count,
        vpc=vpc_total / caption_count,
        tpc=tpc_total / caption_count,
    )


def build_ngram_model_from_tokens(token_lists, order: int) -> NGramModel:
    if order < 2:
        raise ValueError("n-gram model order must be >= 2")
    table: dict[tuple[str, ...], Counter] = {}
    for tokens in token_lists:
        padded = (BOS,) + tuple(tokens) + (EOS,)
        for i in range(len(padded) - order + 1):
            ctx = padded[i:i + order - 1]
            succ = padded[i + order - 1]
            bucket = table.get(ctx)
            if bucket is None:
                bucket = table[ctx] = Counter()
            bucket[succ] += 1
    return NGramModel(order=order, table=table)


def dataset_token_lists(dataset: CaptionDataset) -> list[tuple[str, ...]]:
    return [tokenize(ref).tokens
            for s in dataset.samples for ref in s.references]


def build_ngram_model(dataset: CaptionDataset, order: int) -> NGramModel:
    return build_ngram_model_from_tokens(dataset_token_lists(dataset), order)


def evs(model: NGramModel) -> float:
    """Fraction of distinct contexts with >= 2 distinct successors."""
    if not model.table:
        raise ValueError("empty n-gram model")
    dynamic = sum(1 for succ in model.table.values() if len(succ) >= 2)
    return dynamic / len(model.table)


def evs_weighted(model: NGramModel) -> float:
    """Occurrence-weighted variant: fraction of transitions whose context
    is dynamic. Reported for analysis; table comparisons use ``evs``."""
    if not model.table:
        raise ValueError("empty n-gram model")
    total = dynamic = 0
    for succ in model.table.values():
        mass = sum(succ.values())
        total += mass
        if len(succ) >= 2:
            dynamic += mass
    return dynamic / total


def _position_order(i: int) -> int:
    return 2 if i == 1 else 3 if i == 2 else 4


def ed_at_n_from_tokens(token_lists, n: int) -> float:
    if n < 1:
        raise ValueError("N must be >= 1")
    needed = sorted({_position_order(i) for i in range(1, n)})
    values: dict[int, float] = {}
    for order in needed:
        model = build_ngram_model_from_tokens(token_lists, order)
        values[order] = evs(model) if model.table else 0.0
    return 1.0 + sum(values[_position_order(i)] for i in range(1, n))


def ed_at_n(dataset: CaptionDataset, n: int) -> float:
    return ed_at_n_from_tokens(dataset_token_lists(dataset), n)


def sentences_from_text(text: str) -> list[tuple[str, ...]]:
    """Plain-text ingestion for baseline corpora: tokenize the whole text
    and split the token stream on period tokens."""
    tokens = tokenize(text).tokens
    sentences: list[tuple[str, ...]] = []
    current: list[str] = []
    for tok in tokens:
        if tok == ".":
            if current:
                sentences.append(tuple(current))
                current = []
        else:
            current.append(tok)
    if current:
        sentences.append(tuple(current))
    return sentences


def diversity_report(dataset: CaptionDataset,
                     pos_sidecar: str | None = None,
                     evs_orders=(2, 3, 4),
                     ed_positions=(10,)) -> dict:
    token_lists = dataset_token_lists(dataset)
    vocab = vocab_stats(dataset)
    pos = pos_stats(dataset, pos_sidecar)
    evs_map: dict[str, float] = {}
    evs_w_map: dict[str, float] = {}
    for order in evs_orders:
        model = build_ngram_model_from_tokens(token_lists, order)
        evs_map[str(order)] = evs(model) if model.table else 0.0
        evs_w_map[str(order)] = evs_weighted(model) if model.table else 0.0
    ed_map = {str(n): ed_at_n_from_tokens(token_lists, n) for n in ed_positions}
    return {
        "vocab": {"unique": vocab.unique, "ws_unique": vocab.ws_unique,
                  "bs_unique": vocab.bs_unique, "head": vocab.head},
        "pos": {"wsnu": pos.wsnu, "bsnu": pos.bsnu, "wsvu": pos.wsvu,
                "bsvu": pos.bsvu, "nc": pos.nc, "vc": pos.vc,
                "nh": pos.nh, "vh": pos.vh, "npc": pos.npc,
                "vpc": pos.vpc, "tpc": pos.tpc},
        "evs": evs_map,
        "evs_weighted": evs_w_map,
        "ed": ed_map,
    }
