"""Embedding providers and cosine similarity.

Two providers implement the same contract: a deterministic in-process TF-IDF
backend, and a client for a remote sentence-encoder service speaking the
POST /embed JSON protocol. Both return unit-norm (or all-zero) float64 vectors
and cache results by exact text.
"""

from __future__ import annotations

import math
import threading
from collections import Counter, OrderedDict
from dataclasses import dataclass

import numpy as np
import requests

from .documents import tokenize
from .errors import ContractViolation, DimensionMismatch, RemoteUnavailable

CONNECT_TIMEOUT = 5.0
REQUEST_TIMEOUT = 60.0


@dataclass(frozen=True)
class TfidfModel:
    """Per-document vocabulary with smoothed document frequencies."""

    vocabulary: dict[str, int]
    doc_freq: dict[str, int]
    n_docs: int


def tfidf_fit(token_lists: list[list[str]] | list[tuple[str, ...]]) -> TfidfModel:
    """Vocabulary indexed in order of first appearance; df counts list-level presence."""
    if not token_lists:
        raise ValueError("tfidf_fit needs at least one token list")
    vocabulary: dict[str, int] = {}
    doc_freq: dict[str, int] = {}
    for tokens in token_lists:
        for word in dict.fromkeys(tokens):
            if word not in vocabulary:
                vocabulary[word] = len(vocabulary)
            doc_freq[word] = doc_freq.get(word, 0) + 1
    return TfidfModel(vocabulary, doc_freq, len(token_lists))


def tfidf_embed(model: TfidfModel, tokens: list[str] | tuple[str, ...]) -> np.ndarray:
    """tf * idf with idf = ln((1+n)/(1+df)) + 1, L2-normalized; zero vector if OOV."""
    vec = np.zeros(len(model.vocabulary), dtype=np.float64)
    for word, count in Counter(tokens).items():
        idx = model.vocabulary.get(word)
        if idx is None:
            continue
        idf = math.log((1 + model.n_docs) / (1 + model.doc_freq[word])) + 1.0
        vec[idx] = count * idf
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """dot(u,v) / (|u| |v|); 0.0 when either vector is all-zero."""
    if u.shape != v.shape:
        raise DimensionMismatch(f"vector dims differ: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "tfidf"
    endpoint: str | None = None
    cache_capacity: int = 2048

    def __post_init__(self):
        if self.kind not in ("tfidf", "remote"):
            raise ValueError(f"unknown provider kind {self.kind!r}")
        if (self.kind == "remote") != (self.endpoint is not None):
            raise ValueError("endpoint must be set exactly when kind is 'remote'")
        if self.cache_capacity < 0:
            raise ValueError("cache_capacity must be non-negative")


class _TextCache:
    """LRU text->vector cache with atomic get-or-insert semantics."""

    def __init__(self, capacity: int):
        self._capacity = capacity
        self._entries: OrderedDict[str, np.ndarray] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, text: str) -> np.ndarray | None:
        if self._capacity == 0:
            return None
        with self._lock:
            vec = self._entries.get(text)
            if vec is not None:
                self._entries.move_to_end(text)
            return vec

    def put(self, text: str, vec: np.ndarray) -> None:
        if self._capacity == 0:
            return
        with self._lock:
            self._entries[text] = vec
            self._entries.move_to_end(text)
            while len(self._entries) > self._capacity:
                self._entries.popitem(last=False)

    def __len__(self) -> int:
        return len(self._entries)


class _CachingProvider:
    """Shared batching logic: dedupe within the batch, then consult the cache."""

    def __init__(self, cache_capacity: int):
        self._cache = _TextCache(cache_capacity)

    def _embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        raise NotImplementedError

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        """One vector per text, in order; identical texts get identical vectors."""
        unique = list(dict.fromkeys(texts))
        found: dict[str, np.ndarray] = {}
        missing: list[str] = []
        for text in unique:
            vec = self._cache.get(text)
            if vec is None:
                missing.append(text)
            else:
                found[text] = vec
        if missing:
            for text, vec in zip(missing, self._embed_texts(missing)):
                vec.setflags(write=False)
                found[text] = vec
                self._cache.put(text, vec)
        return [found[text] for text in texts]


class TfidfProvider(_CachingProvider):
    """Deterministic offline provider backed by a fitted per-document TF-IDF model."""

    def __init__(self, model: TfidfModel, cache_capacity: int = 0):
        super().__init__(cache_capacity)
        self.model = model

    @classmethod
    def fit(
        cls,
        token_lists: list[list[str]] | list[tuple[str, ...]],
        cache_capacity: int = 0,
    ) -> "TfidfProvider":
        return cls(tfidf_fit(token_lists), cache_capacity)

    def _embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        return [tfidf_embed(self.model, tokenize(text)) for text in texts]


class RemoteProvider(_CachingProvider):
    """Client for the POST /embed wire contract; re-normalizes vectors client-side."""

    def __init__(
        self,
        endpoint: str,
        cache_capacity: int = 2048,
        session: requests.Session | None = None,
    ):
        super().__init__(cache_capacity)
        self.endpoint = endpoint.rstrip("/")
        self._session = session or requests.Session()

    def health(self) -> dict:
        try:
            resp = self._session.get(
                f"{self.endpoint}/health", timeout=(CONNECT_TIMEOUT, REQUEST_TIMEOUT)
            )
        except requests.RequestException as exc:
            raise RemoteUnavailable(f"health check failed: {exc}") from exc
        if resp.status_code != 200:
            raise RemoteUnavailable(f"health returned HTTP {resp.status_code}")
        return resp.json()

    def _embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        try:
            resp = self._session.post(
                f"{self.endpoint}/embed",
                json={"texts": texts},
                timeout=(CONNECT_TIMEOUT, REQUEST_TIMEOUT),
            )
        except requests.RequestException as exc:
            raise RemoteUnavailable(f"embed request failed: {exc}") from exc
        if resp.status_code != 200:
            raise RemoteUnavailable(f"embed returned HTTP {resp.status_code}")
        try:
            payload = resp.json()
            vectors = payload["vectors"]
            dim = payload["dim"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ContractViolation(f"malformed embed response: {exc}") from exc
        if len(vectors) != len(texts):
            raise ContractViolation(
                f"expected {len(texts)} vectors, got {len(vectors)}"
            )
        out = []
        for vec in vectors:
            arr = np.asarray(vec, dtype=np.float64)
            if arr.ndim != 1 or arr.shape[0] != dim:
                raise ContractViolation(
                    f"vector of dim {arr.shape} does not match advertised dim {dim}"
                )
            if not np.all(np.isfinite(arr)):
                raise ContractViolation("vector contains non-finite values")
            norm = float(np.linalg.norm(arr))
            out.append(arr / norm if norm > 0.0 else arr)
        return out


def make_provider(
    config: ProviderConfig,
    fit_token_lists: list[list[str]] | list[tuple[str, ...]] | None = None,
) -> TfidfProvider | RemoteProvider:
    """Build a provider from its config; TF-IDF needs the document's token lists."""
    if config.kind == "tfidf":
        if fit_token_lists is None:
            raise ValueError("tfidf provider needs token lists to fit on")
        return TfidfProvider.fit(fit_token_lists, config.cache_capacity)
    assert config.endpoint is not None
    return RemoteProvider(config.endpoint, config.cache_capacity)
