"""Deterministic tokenizer, masking transforms, and built-in fallbacks.

The tokenizer emulates Treebank conventions with an explicit rule list
(adapted from Robert McIntyre's sed script) rather than reproducing any of
the Java tokenizers bit-exactly:

  1. Unicode NFC normalization, trimming, lowercasing.
  2. Double quotes become `` / '' tokens; most punctuation
     (``,;:@#$%&?!()[]{}<>``), ``--`` and ``...`` are split off.
  3. A period is split off when followed by whitespace or end of text
     (decimal points and in-word dots survive).
  4. Contractions are detached: n't 's 're 'll 've 'd 'm, plus the
     trailing possessive apostrophe.

Everything here is pure and reentrant. Mask counters are explicit inputs
so parallel callers can partition id ranges.
"""

from __future__ import annotations

import re
import unicodedata
import zlib
from dataclasses import dataclass, replace

import numpy as np

from ._poslex import LEXICON
from .corpus import CaptionDataset

NOUN_TAGS = frozenset({"NOUN", "PROPN"})
VERB_TAGS = frozenset({"VERB"})
MASKABLE_TAGS = NOUN_TAGS | VERB_TAGS

EMBED_DIM = 256


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    pos: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.pos is not None and len(self.pos) != len(self.tokens):
            raise ValueError(
                f"pos length {len(self.pos)} != token length {len(self.tokens)}")

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class MaskingPolicy:
    kind: str = "none"  # none | semantic | vocab_tail
    head_fraction: float = 0.9

    def __post_init__(self):
        if self.kind not in ("none", "semantic", "vocab_tail"):
            raise ValueError(f"unknown masking kind {self.kind!r}")
        if not (0.0 < self.head_fraction <= 1.0):
            raise ValueError("head_fraction must be in (0, 1]")


class MaskCounter:
    """Monotonic id source for mask/UNK tokens. ``step`` lets parallel
    callers own disjoint ranges."""

    def __init__(self, start: int = 1, step: int = 1):
        self._next = start
        self._step = step

    def take(self) -> int:
        value = self._next
        self._next += self._step
        return value


_RULES: list[tuple[re.Pattern, str]] = [
    (re.compile(r'^"'), r"`` "),
    (re.compile(r'([ (\[{<])"'), r"\1 `` "),
    (re.compile(r"\.\.\."), r" ... "),
    (re.compile(r"[,;:@#$%&?!]"), r" \g<0> "),
    (re.compile(r"[\]\[(){}<>]"), r" \g<0> "),
    (re.compile(r"--"), r" -- "),
    (re.compile(r"\.(?=[\s\"')\]}]|$)"), r" . "),
    (re.compile(r'"'), r" '' "),
]
_CONTRACTIONS: list[tuple[re.Pattern, str]] = [
    (re.compile(r"([^' ])('s|'re|'ll|'ve|'d|'m|n't)(?=\s|$)"), r"\1 \2"),
    (re.compile(r"([^' ])(')(?=\s|$)"), r"\1 \2"),
]


def tokenize(text: str) -> TokenSequence:
    s = unicodedata.normalize("NFC", text).strip().lower()
    for pattern, repl in _RULES:
        s = pattern.sub(repl, s)
    s = " " + s + " "
    for pattern, repl in _CONTRACTIONS:
        s = pattern.sub(repl, s)
    return TokenSequence(tokens=tuple(s.split()))


def mask_token(k: int) -> str:
    return f"⟨MASK_{k}⟩"


def unk_token(k: int) -> str:
    return f"⟨UNK_{k}⟩"


def semantic_mask(seq: TokenSequence, counter: MaskCounter) -> TokenSequence:
    """Replace every NOUN/PROPN/VERB token with a fresh mask token.

    Mask ids are never reused, so a masked token can never match any token
    in any other caption masked from the same counter family.
    """
    if seq.pos is None:
        raise ValueError("semantic_mask requires POS tags on the sequence")
    out = tuple(
        mask_token(counter.take()) if tag in MASKABLE_TAGS else tok
        for tok, tag in zip(seq.tokens, seq.pos)
    )
    return replace(seq, tokens=out)


def head_types(type_counts: dict[str, int], head_fraction: float) -> set[str]:
    """Minimal set of most-frequent types whose occurrences reach
    ``head_fraction`` of all occurrences. Frequency ties break
    lexicographically for determinism."""
    total = sum(type_counts.values())
    if total == 0:
        raise ValueError("empty corpus")
    ranked = sorted(type_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    head: set[str] = set()
    covered = 0
    target = head_fraction * total
    for token, count in ranked:
        if covered >= target:
            break
        head.add(token)
        covered += count
    return head


def vocab_tail_mask(
    dataset: CaptionDataset,
    head_fraction: float = 0.9,
    counter: MaskCounter | None = None,
) -> dict[tuple[str, int], TokenSequence]:
    """Tokenize the whole dataset and replace every occurrence of a
    tail-of-distribution type with a unique-per-occurrence UNK token.

    Returns a map (sample_id, ref_index) -> transformed TokenSequence;
    token counts are preserved exactly.
    """
    if not (0.0 < head_fraction <= 1.0):
        raise ValueError("head_fraction must be in (0, 1]")
    counter = counter or MaskCounter()
    tokenized: dict[tuple[str, int], TokenSequence] = {
        (s.id, k): tokenize(ref)
        for s in dataset.samples for k, ref in enumerate(s.references)
    }
    counts: dict[str, int] = {}
    for seq in tokenized.values():
        for tok in seq.tokens:
            counts[tok] = counts.get(tok, 0) + 1
    head = head_types(counts, head_fraction)
    if head_fraction >= 1.0:
        return tokenized
    out: dict[tuple[str, int], TokenSequence] = {}
    for key, seq in tokenized.items():
        out[key] = replace(seq, tokens=tuple(
            tok if tok in head else unk_token(counter.take())
            for tok in seq.tokens
        ))
    return out


def builtin_embed(seq: TokenSequence) -> np.ndarray:
    """Deterministic character 3-5 gram hashed bag-of-features embedding,
    L2-normalized. Empty input yields the (degenerate) zero vector."""
    vec = np.zeros(EMBED_DIM, dtype=np.float64)
    text = " ".join(seq.tokens)
    data = text.encode("utf-8")
    for n in (3, 4, 5):
        for i in range(len(data) - n + 1):
            slot = zlib.crc32(data[i:i + n]) % EMBED_DIM
            vec[slot] += 1.0
    norm = float(np.linalg.norm(vec))
    if norm > 0:
        vec /= norm
    return vec


_PUNCT_RE = re.compile(r"^[^\w\s]+$")
_NUM_RE = re.compile(r"^\d[\d.,]*$")


def _lookup_pos(token: str) -> str:
    tag = LEXICON.get(token)
    if tag is not None:
        return tag
    if _PUNCT_RE.match(token):
        return "PUNCT"
    if _NUM_RE.match(token):
        return "NUM"
    # inflection-aware retry before falling back to suffix heuristics
    for suffix in ("ing", "ed", "es", "s"):
        if token.endswith(suffix) and len(token) - len(suffix) >= 3:
            base = LEXICON.get(token[:-len(suffix)])
            if base is None and suffix in ("ing", "ed"):
                base = LEXICON.get(token[:-len(suffix)] + "e")
            if base in ("VERB", "AUX"):
                return "VERB"
            if base == "NOUN" and suffix in ("s", "es"):
                return "NOUN"
            if base == "ADJ" and suffix in ("ed", "ing"):
                return "VERB"
    if token.endswith("ing") or token.endswith("ed"):
        return "VERB"
    if token.endswith("ly"):
        return "ADV"
    return "NOUN"


def builtin_pos(seq: TokenSequence) -> TokenSequence:
    """Lexicon + suffix-heuristic tagger; deterministic, no models."""
    return replace(seq, pos=tuple(_lookup_pos(t) for t in seq.tokens))


def load_pos_sidecar(dataset: CaptionDataset, path: str) -> dict[tuple[str, int], tuple[str, ...]]:
    """Read a JSON-lines POS sidecar and check alignment: each record's
    tag count must equal the token count of `tokenize` on that reference."""
    import json

    tags: dict[tuple[str, int], tuple[str, ...]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            key = (str(rec["sample_id"]), int(rec["ref_index"]))
            if key in tags:
                raise ValueError(f"duplicate POS record for {key} at line {lineno}")
            tags[key] = tuple(rec["tags"])
    for s in dataset.samples:
        for k, ref in enumerate(s.references):
            key = (s.id, k)
            if key not in tags:
                raise ValueError(f"missing POS record for {key}")
            ntok = len(tokenize(ref))
            if len(tags[key]) != ntok:
                raise ValueError(
                    f"POS record for {key} has {len(tags[key])} tags "
                    f"but the reference tokenizes to {ntok} tokens")
    return tags


def pos_tagged_sequences(
    dataset: CaptionDataset, sidecar_path: str | None = None,
) -> dict[tuple[str, int], TokenSequence]:
    """Tokenize every reference and attach POS tags from the sidecar when
    given, otherwise from the built-in tagger."""
    sidecar = load_pos_sidecar(dataset, sidecar_path) if sidecar_path else None
    out: dict[tuple[str, int], TokenSequence] = {}
    for s in dataset.samples:
        for k, ref in enumerate(s.references):
            seq = tokenize(ref)
            if sidecar is not None:
                seq = replace(seq, pos=sidecar[(s.id, k)])
            else:
                seq = builtin_pos(seq)
            out[(s.id, k)] = seq
    return out
