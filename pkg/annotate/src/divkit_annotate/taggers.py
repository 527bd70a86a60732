"""POS tagger backends over pre-tokenized input.

Tagging always runs on the core tokenizer's tokens (obtained through the
``divkit tokenize`` subcommand), never on retokenized text, so tag counts
equal token counts by construction. The ``builtin-lexicon`` backend is
the offline default; ``spacy:<model>`` is available when spacy and its
model data are installed.
"""

from __future__ import annotations

import re

from ._lexicon import TAGS

LEXICON_MODEL = "builtin-lexicon"

_PUNCT = re.compile(r"^[^\w\s]+$")
_NUMERIC = re.compile(r"^\d[\d.,]*$")


class TaggerError(RuntimeError):
    pass


class LexiconTagger:
    name = LEXICON_MODEL

    def tag(self, tokens: list[str]) -> list[str]:
        return [self._one(t) for t in tokens]

    @staticmethod
    def _one(token: str) -> str:
        tag = TAGS.get(token)
        if tag is not None:
            return tag
        if _PUNCT.match(token):
            return "PUNCT"
        if _NUMERIC.match(token):
            return "NUM"
        for suffix in ("ing", "ed", "es", "s"):
            if token.endswith(suffix) and len(token) - len(suffix) >= 3:
                base = TAGS.get(token[:-len(suffix)]) \
                    or TAGS.get(token[:-len(suffix)] + "e")
                if base in ("VERB", "AUX"):
                    return "VERB"
                if base == "NOUN" and suffix in ("s", "es"):
                    return "NOUN"
        if token.endswith(("ing", "ed")):
            return "VERB"
        if token.endswith("ly"):
            return "ADV"
        return "NOUN"


class SpacyTagger:
    def __init__(self, model_id: str):
        try:
            import spacy
        except ImportError as exc:
            raise TaggerError(
                "spacy is not installed; install the [models] extra or "
                "use --model builtin-lexicon") from exc
        try:
            self._nlp = spacy.load(model_id, disable=["parser", "ner"])
        except Exception as exc:
            raise TaggerError(
                f"could not load spacy model {model_id!r} ({exc})") from exc
        self._spacy = spacy
        self.name = f"spacy:{model_id}"

    def tag(self, tokens: list[str]) -> list[str]:
        if not tokens:
            return []
        doc = self._spacy.tokens.Doc(self._nlp.vocab, words=list(tokens))
        for _, proc in self._nlp.pipeline:
            doc = proc(doc)
        return [t.pos_ for t in doc]


def make_tagger(model_id: str):
    if model_id == LEXICON_MODEL:
        return LexiconTagger()
    if model_id.startswith("spacy:"):
        return SpacyTagger(model_id.split(":", 1)[1])
    raise TaggerError(f"unknown tagger backend {model_id!r}")
