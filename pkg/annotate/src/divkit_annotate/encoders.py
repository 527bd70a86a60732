"""Sentence-embedding backends.

The default is a pretrained sentence-similarity encoder loaded through
sentence-transformers (CPU inference, deterministic eval mode). The
``builtin-hash`` backend is a mandatory offline fallback: a hashed
character 3-5-gram bag, dim 384, needing no model files at all. Exported
rows are always L2-normalized downstream, whichever backend produced them.
"""

from __future__ import annotations

import zlib

import numpy as np

DEFAULT_MODEL = "sentence-transformers/all-MiniLM-L6-v2"
HASH_MODEL = "builtin-hash"
HASH_DIM = 384


class EncoderError(RuntimeError):
    pass


class HashEncoder:
    """Deterministic, model-free encoder. Identical strings map to
    identical rows by construction; an empty string maps to a fixed
    basis vector so every row keeps unit norm."""

    name = HASH_MODEL
    dim = HASH_DIM

    def encode(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            data = text.strip().lower().encode("utf-8")
            if not data:
                out[i, 0] = 1.0
                continue
            for n in (3, 4, 5):
                if len(data) < n:
                    continue
                for j in range(len(data) - n + 1):
                    out[i, zlib.crc32(data[j:j + n]) % self.dim] += 1.0
            if not out[i].any():
                out[i, zlib.crc32(data) % self.dim] = 1.0
        return out


class SentenceTransformerEncoder:
    def __init__(self, model_id: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise EncoderError(
                "sentence-transformers is not installed; install the "
                "[models] extra or use --model builtin-hash") from exc
        try:
            self._model = SentenceTransformer(model_id, device="cpu")
        except Exception as exc:
            raise EncoderError(
                f"could not load embedding model {model_id!r} "
                f"({exc}); use --model builtin-hash for offline runs") from exc
        self.name = model_id
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: list[str]) -> np.ndarray:
        vectors = self._model.encode(texts, batch_size=len(texts),
                                     convert_to_numpy=True,
                                     show_progress_bar=False,
                                     normalize_embeddings=False)
        return np.asarray(vectors, dtype=np.float64)


def make_encoder(model_id: str):
    if model_id == HASH_MODEL:
        return HashEncoder()
    return SentenceTransformerEncoder(model_id)
