"""Keyword extraction: a word co-occurrence graph ranked by weighted PageRank."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .errors import NoCandidates, NotConvergedWarning


@dataclass(frozen=True)
class RankParams:
    damping: float = 0.85
    tolerance: float = 1e-6
    max_iterations: int = 100
    window: int = 2

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must be in (0,1), got {self.damping}")
        if self.tolerance <= 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be positive, got {self.max_iterations}")
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")


@dataclass(frozen=True)
class Keyword:
    text: str
    score: float
    first_pos: int


@dataclass
class CooccurrenceGraph:
    """Undirected weighted graph; nodes in first-occurrence order, no self-loops."""

    nodes: list[str] = field(default_factory=list)
    adjacency: dict[str, dict[str, int]] = field(default_factory=dict)

    def weight(self, a: str, b: str) -> int:
        return self.adjacency.get(a, {}).get(b, 0)


def is_candidate(token: str, stopwords: frozenset[str] | set[str]) -> bool:
    return token not in stopwords and not token.isdigit()


def build_cooccurrence_graph(
    tokens: list[str],
    stopwords: frozenset[str] | set[str],
    window: int,
) -> CooccurrenceGraph:
    """Count co-occurrences of candidate words within `window` token positions.

    Stopwords and digit runs are not nodes but still occupy positions, so they
    widen the lexical distance between surviving candidates.
    """
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    graph = CooccurrenceGraph()
    seen: set[str] = set()
    for token in tokens:
        if is_candidate(token, stopwords) and token not in seen:
            seen.add(token)
            graph.nodes.append(token)
            graph.adjacency[token] = {}
    n = len(tokens)
    for i, a in enumerate(tokens):
        if not is_candidate(a, stopwords):
            continue
        for j in range(i + 1, min(i + window, n)):
            b = tokens[j]
            if b == a or not is_candidate(b, stopwords):
                continue
            graph.adjacency[a][b] = graph.adjacency[a].get(b, 0) + 1
            graph.adjacency[b][a] = graph.adjacency[b].get(a, 0) + 1
    return graph


def pagerank(graph: CooccurrenceGraph, params: RankParams = RankParams()) -> dict[str, float]:
    """Weighted PageRank with synchronous updates from all-ones initialization.

    Iterates WS(v) = (1-d) + d * sum_u w(u,v)/outw(u) * WS(u) until the max
    per-node change drops below tolerance. Emits NotConvergedWarning (and still
    returns the scores) when the iteration cap is hit first.
    """
    if not graph.nodes:
        raise ValueError("pagerank needs at least one node")
    d = params.damping
    out_weight = {u: sum(nbrs.values()) for u, nbrs in graph.adjacency.items()}
    scores = {v: 1.0 for v in graph.nodes}
    delta = math.inf
    for _ in range(params.max_iterations):
        new = {}
        for v in graph.nodes:
            acc = 0.0
            for u, w in graph.adjacency[v].items():
                acc += w / out_weight[u] * scores[u]
            new[v] = (1.0 - d) + d * acc
        delta = max(abs(new[v] - scores[v]) for v in graph.nodes)
        scores = new
        if delta < params.tolerance:
            return scores
    warnings.warn(NotConvergedWarning(params.max_iterations, delta), stacklevel=2)
    return scores


def extract_keywords(
    doc_tokens: list[str],
    k: int,
    params: RankParams,
    stopwords: frozenset[str] | set[str],
) -> list[Keyword]:
    """Top min(k, #candidates) words by converged rank.

    Ties break toward the earlier first occurrence, then lexicographically.
    Raises NoCandidates when every token is a stopword or digit run.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    first_pos: dict[str, int] = {}
    for i, token in enumerate(doc_tokens):
        if is_candidate(token, stopwords) and token not in first_pos:
            first_pos[token] = i
    if not first_pos:
        raise NoCandidates("no keyword candidates: all tokens are stopwords or digits")
    graph = build_cooccurrence_graph(doc_tokens, stopwords, params.window)
    scores = pagerank(graph, params)
    ranked = sorted(first_pos, key=lambda w: (-scores[w], first_pos[w], w))
    return [Keyword(w, scores[w], first_pos[w]) for w in ranked[:k]]


def auto_keyword_count(doc_tokens: list[str], stopwords: frozenset[str] | set[str]) -> int:
    """Default cluster count: max(2, ceil(#unique candidates / 3))."""
    unique = {t for t in doc_tokens if is_candidate(t, stopwords)}
    return max(2, math.ceil(len(unique) / 3))
