"""Sentence encoders behind the service.

The model is configuration, not contract: anything that maps text to a
fixed-dimension unit vector qualifies. Two backends ship here:

* ``hash`` — a dependency-free feature-hashing encoder. Word unigrams and
  character trigrams are hashed into signed buckets with SHA-256, so vectors
  are deterministic across processes and platforms. Texts sharing words get
  correlated vectors, which is all the clustering pipeline needs for smoke
  and integration use.
* ``st:<name>`` — a sentence-transformers checkpoint, for deployments where
  a pretrained neural encoder is available.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


class HashingEncoder:
    """Deterministic signed feature hashing over words and character trigrams."""

    def __init__(self, dim: int = 256):
        if dim < 8:
            raise ValueError("dim must be at least 8")
        self.dim = dim
        self.name = f"hashing-sign-{dim}"

    def _features(self, text: str):
        lowered = " ".join(text.lower().split())
        for word in _WORD_RE.findall(lowered):
            yield "w:" + word
        padded = f"^{lowered}$"
        for i in range(len(padded) - 2):
            yield "c:" + padded[i : i + 3]

    def encode(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for row, text in enumerate(texts):
            for feature in self._features(text):
                digest = hashlib.sha256(feature.encode("utf-8")).digest()
                idx = int.from_bytes(digest[:8], "big") % self.dim
                sign = 1.0 if digest[8] & 1 else -1.0
                out[row, idx] += sign
            norm = np.linalg.norm(out[row])
            if norm == 0.0:
                out[row, 0] = 1.0
            else:
                out[row] /= norm
        return out


class SentenceTransformerEncoder:
    """Wrapper around a sentence-transformers checkpoint, normalized output."""

    def __init__(self, model_name: str):
        from sentence_transformers import SentenceTransformer

        self._model = SentenceTransformer(model_name)
        self.dim = int(self._model.get_sentence_embedding_dimension())
        self.name = model_name

    def encode(self, texts: list[str]) -> np.ndarray:
        vectors = self._model.encode(
            texts, convert_to_numpy=True, normalize_embeddings=True
        )
        return np.asarray(vectors, dtype=np.float64)


def load_encoder(spec: str):
    """Build an encoder from a config string: 'hash', 'hash:<dim>', or 'st:<model>'."""
    if spec == "hash":
        return HashingEncoder()
    if spec.startswith("hash:"):
        return HashingEncoder(int(spec.split(":", 1)[1]))
    if spec.startswith("st:"):
        return SentenceTransformerEncoder(spec.split(":", 1)[1])
    raise ValueError(f"unknown encoder spec {spec!r}")
