"""Keyword-seeded clustering of an unordered sentence sequence.

One cluster per keyword: each keyword first claims its most similar sentence
as a seed, then the remaining sentences are visited once in document order and
appended to the cluster maximizing t*S1 + (1-t)*S2, where S1 is the similarity
to the keyword and S2 the best similarity to the sentences already in the
cluster. Clusters grow during the pass, so assignment order matters and is
fixed to the input order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .documents import FlatDocument, Sentence, tokenize
from .embeddings import (
    ProviderConfig,
    cosine_similarity,
    make_provider,
)
from .errors import TooFewSentences
from .stopwords import STOPWORDS
from .textrank import Keyword, RankParams, auto_keyword_count, extract_keywords


@dataclass(frozen=True)
class StructureParams:
    t: float = 0.25
    keyword_count: int | None = None
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    rank: RankParams = field(default_factory=RankParams)

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"t must be in [0,1], got {self.t}")
        if self.keyword_count is not None and self.keyword_count < 1:
            raise ValueError("keyword_count must be positive")


@dataclass
class Cluster:
    """A keyword plus its member sentence ids: seed first, then assignment order."""

    keyword: Keyword
    seed_id: int
    member_ids: list[int]


@dataclass(frozen=True)
class StructuredDocument:
    """Clusters in descending keyword-score order, partitioning the input ids."""

    doc_id: str
    clusters: tuple[Cluster, ...]


def combined_similarity(s1: float, s2: float, t: float) -> float:
    """t*s1 + (1-t)*s2. With t=1 this degenerates to the keyword-only baseline."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must be in [0,1], got {t}")
    return t * s1 + (1.0 - t) * s2


def _priority_key(kw: Keyword) -> tuple[float, int, str]:
    return (-kw.score, kw.first_pos, kw.text)


def seed_clusters(
    keywords: Sequence[Keyword],
    sentences: Sequence[Sentence],
    keyword_vectors: Sequence[np.ndarray],
    sentence_vectors: Mapping[int, np.ndarray],
) -> list[Cluster]:
    """Each keyword, by descending score, claims its most similar free sentence.

    Ties go to the lowest sentence id; a sentence seeds at most one cluster.
    """
    if not keywords:
        raise ValueError("seed_clusters needs at least one keyword")
    if len(sentences) < len(keywords):
        raise TooFewSentences(
            f"{len(sentences)} sentences cannot seed {len(keywords)} clusters"
        )
    ordered = sorted(zip(keywords, keyword_vectors), key=lambda p: _priority_key(p[0]))
    by_id = sorted(sentences, key=lambda s: s.id)
    taken: set[int] = set()
    clusters: list[Cluster] = []
    for keyword, kvec in ordered:
        best_id, best_cos = None, -1.0
        for sentence in by_id:
            if sentence.id in taken:
                continue
            cos = cosine_similarity(kvec, sentence_vectors[sentence.id])
            if cos > best_cos:
                best_id, best_cos = sentence.id, cos
        assert best_id is not None
        taken.add(best_id)
        clusters.append(Cluster(keyword, best_id, [best_id]))
    return clusters


def s2_similarity(
    x_vec: np.ndarray,
    cluster: Cluster,
    member_vectors: Mapping[int, np.ndarray],
) -> float:
    """Best cosine between the sentence and the cluster's current members."""
    if not cluster.member_ids:
        raise ValueError("cluster has no members")
    return max(
        cosine_similarity(x_vec, member_vectors[mid]) for mid in cluster.member_ids
    )


def assign_remaining(
    clusters: list[Cluster],
    flat: FlatDocument,
    t: float,
    keyword_vectors: Sequence[np.ndarray],
    sentence_vectors: Mapping[int, np.ndarray],
) -> StructuredDocument:
    """Single pass over the unassigned sentences in flat order, growing clusters.

    `keyword_vectors` aligns with `clusters`, which must already be in priority
    order: on ties the earlier (higher keyword score) cluster wins. Clusters
    are mutated in place.
    """
    seeded = {c.seed_id for c in clusters}
    for sid in flat.order:
        if sid in seeded:
            continue
        x_vec = sentence_vectors[sid]
        best_idx, best_score = None, 0.0
        for idx, cluster in enumerate(clusters):
            s1 = cosine_similarity(x_vec, keyword_vectors[idx])
            s2 = s2_similarity(x_vec, cluster, sentence_vectors)
            score = combined_similarity(s1, s2, t)
            if best_idx is None or score > best_score:
                best_idx, best_score = idx, score
        clusters[best_idx].member_ids.append(sid)
    return StructuredDocument(flat.doc_id, tuple(clusters))


def force_keywords(words: Sequence[str], n_sentences: int) -> list[Keyword]:
    """Turn user-supplied keyword strings into ranked keywords (list order = priority)."""
    cleaned = [w.strip().lower() for w in words if w.strip()]
    if not cleaned:
        raise ValueError("no keywords given")
    if len(set(cleaned)) != len(cleaned):
        raise ValueError("forced keywords must be unique")
    for word in cleaned:
        if len(tokenize(word)) != 1:
            raise ValueError(f"keyword {word!r} is not a single token")
    if len(cleaned) > n_sentences:
        raise TooFewSentences(
            f"{n_sentences} sentences cannot seed {len(cleaned)} keywords"
        )
    n = len(cleaned)
    return [Keyword(w, float(n - i), i) for i, w in enumerate(cleaned)]


def _prepare(
    flat: FlatDocument,
    params: StructureParams,
    keywords: Sequence[str] | Sequence[Keyword] | None,
    provider,
):
    """Shared pipeline prefix: keywords, embeddings, seeding."""
    if not flat.sentences:
        raise ValueError("cannot structure an empty document")
    in_order = flat.sentences_in_order()
    if keywords is None:
        doc_tokens = [tok for s in in_order for tok in s.tokens]
        k = params.keyword_count or auto_keyword_count(doc_tokens, STOPWORDS)
        k = max(1, min(k, len(flat.sentences)))
        kws = extract_keywords(doc_tokens, k, params.rank, STOPWORDS)
    elif keywords and isinstance(keywords[0], Keyword):
        kws = list(keywords)  # type: ignore[arg-type]
        if len(kws) > len(flat.sentences):
            raise TooFewSentences(
                f"{len(flat.sentences)} sentences cannot seed {len(kws)} keywords"
            )
    else:
        kws = force_keywords(keywords, len(flat.sentences))  # type: ignore[arg-type]

    if provider is None:
        fit_lists = [list(s.tokens) for s in in_order] + [[kw.text] for kw in kws]
        provider = make_provider(params.provider, fit_lists)

    texts = [kw.text for kw in kws] + [s.text for s in in_order]
    vectors = provider.embed_batch(texts)
    kvec_by_text = {kw.text: vectors[i] for i, kw in enumerate(kws)}
    svecs = {s.id: vectors[len(kws) + i] for i, s in enumerate(in_order)}

    seeds = seed_clusters(
        kws, in_order, [kvec_by_text[kw.text] for kw in kws], svecs
    )
    cluster_kvecs = [kvec_by_text[c.keyword.text] for c in seeds]
    return seeds, cluster_kvecs, svecs


def _fresh(seeds: list[Cluster]) -> list[Cluster]:
    return [Cluster(c.keyword, c.seed_id, [c.seed_id]) for c in seeds]


def structure_document(
    flat: FlatDocument,
    params: StructureParams = StructureParams(),
    *,
    keywords: Sequence[str] | Sequence[Keyword] | None = None,
    provider=None,
) -> StructuredDocument:
    """Full pipeline: keywords (extracted or forced), embed, seed, assign.

    The keyword count is clamped to the sentence count so seeding cannot starve.
    Passing `keywords` bypasses extraction for controlled runs; passing
    `provider` reuses a remote session and its cache across documents.
    """
    seeds, cluster_kvecs, svecs = _prepare(flat, params, keywords, provider)
    return assign_remaining(_fresh(seeds), flat, params.t, cluster_kvecs, svecs)


def structure_with_baseline(
    flat: FlatDocument,
    params: StructureParams = StructureParams(),
    *,
    keywords: Sequence[str] | Sequence[Keyword] | None = None,
    provider=None,
) -> tuple[StructuredDocument, StructuredDocument]:
    """One run at params.t and one at t=1, sharing keywords, embeddings and seeds.

    The pair isolates the contribution of the member-similarity term: only the
    assignment pass differs between the two outputs.
    """
    seeds, cluster_kvecs, svecs = _prepare(flat, params, keywords, provider)
    main = assign_remaining(_fresh(seeds), flat, params.t, cluster_kvecs, svecs)
    baseline = assign_remaining(_fresh(seeds), flat, 1.0, cluster_kvecs, svecs)
    return main, baseline


def validate_partition(structured: StructuredDocument, flat: FlatDocument) -> None:
    """Raise ValueError unless the clusters partition the flat document's ids."""
    seen: list[int] = []
    for cluster in structured.clusters:
        seen.extend(cluster.member_ids)
    if len(seen) != len(set(seen)) or set(seen) != set(flat.order):
        raise ValueError("clusters do not partition the sentence id set")


def to_json_dict(
    structured: StructuredDocument, sentences: Sequence[Sentence]
) -> dict:
    """Wire format: {"doc_id", "clusters": [{"keyword", "score", "sentences"}]}."""
    by_id = {s.id: s.text for s in sentences}
    return {
        "doc_id": structured.doc_id,
        "clusters": [
            {
                "keyword": c.keyword.text,
                "score": c.keyword.score,
                "sentences": [by_id[mid] for mid in c.member_ids],
            }
            for c in structured.clusters
        ],
    }


def to_json(structured: StructuredDocument, sentences: Sequence[Sentence]) -> str:
    return json.dumps(to_json_dict(structured, sentences), indent=2)


def to_text(structured: StructuredDocument, sentences: Sequence[Sentence]) -> str:
    """Plain-text rendering with '== keyword ==' headings, one section per cluster."""
    by_id = {s.id: s.text for s in sentences}
    lines = []
    for cluster in structured.clusters:
        lines.append(f"== {cluster.keyword.text} ==")
        lines.append(" ".join(by_id[mid] for mid in cluster.member_ids))
    return "\n".join(lines) + "\n"
