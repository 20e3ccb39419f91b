"""destructure: rebuild the sectional structure of unordered text documents.

Pipeline: extract keywords from the jumbled document, seed one cluster per
keyword with its most similar sentence, then assign every remaining sentence
to the cluster maximizing a weighted blend of keyword similarity and best
member similarity. Includes Sim1/Sim2 reconstruction metrics and a
shuffle-reconstruct experiment harness.
"""

from .documents import (
    Document,
    FlatDocument,
    Section,
    Sentence,
    SplitMix64,
    build_document,
    flatten_document,
    load_corpus,
    parse_jsonl_document,
    parse_sectioned_document,
    segment_sentences,
    shuffle_document,
    tokenize,
)
from .embeddings import (
    ProviderConfig,
    RemoteProvider,
    TfidfModel,
    TfidfProvider,
    cosine_similarity,
    make_provider,
    tfidf_embed,
    tfidf_fit,
)
from .errors import (
    AllDocumentsFailed,
    ContractViolation,
    CorpusFormatError,
    DestructureError,
    DimensionMismatch,
    EmptySection,
    IdSetMismatch,
    NoCandidates,
    NoSections,
    NotConvergedWarning,
    RemoteUnavailable,
    TooFewSentences,
)
from .evaluation import (
    DocumentRow,
    EvaluationReport,
    ExperimentResult,
    ExperimentSummary,
    SectionScore,
    emit_report,
    evaluate,
    run_experiment,
    sim1,
    sim2,
)
from .stopwords import STOPWORDS
from .structurer import (
    Cluster,
    StructureParams,
    StructuredDocument,
    assign_remaining,
    combined_similarity,
    force_keywords,
    s2_similarity,
    seed_clusters,
    structure_document,
    structure_with_baseline,
    to_json_dict,
    to_text,
    validate_partition,
)
from .textrank import (
    CooccurrenceGraph,
    Keyword,
    RankParams,
    auto_keyword_count,
    build_cooccurrence_graph,
    extract_keywords,
    pagerank,
)

__version__ = "0.1.0"

__all__ = [
    "AllDocumentsFailed",
    "Cluster",
    "ContractViolation",
    "CooccurrenceGraph",
    "CorpusFormatError",
    "DestructureError",
    "DimensionMismatch",
    "Document",
    "DocumentRow",
    "EmptySection",
    "EvaluationReport",
    "ExperimentResult",
    "ExperimentSummary",
    "FlatDocument",
    "IdSetMismatch",
    "Keyword",
    "NoCandidates",
    "NoSections",
    "NotConvergedWarning",
    "ProviderConfig",
    "RankParams",
    "RemoteProvider",
    "RemoteUnavailable",
    "Section",
    "SectionScore",
    "Sentence",
    "SplitMix64",
    "STOPWORDS",
    "StructureParams",
    "StructuredDocument",
    "TfidfModel",
    "TfidfProvider",
    "TooFewSentences",
    "assign_remaining",
    "auto_keyword_count",
    "build_cooccurrence_graph",
    "build_document",
    "combined_similarity",
    "cosine_similarity",
    "emit_report",
    "evaluate",
    "extract_keywords",
    "flatten_document",
    "force_keywords",
    "load_corpus",
    "make_provider",
    "pagerank",
    "parse_jsonl_document",
    "parse_sectioned_document",
    "run_experiment",
    "s2_similarity",
    "seed_clusters",
    "segment_sentences",
    "shuffle_document",
    "sim1",
    "sim2",
    "structure_document",
    "structure_with_baseline",
    "tfidf_embed",
    "tfidf_fit",
    "to_json_dict",
    "to_text",
    "tokenize",
    "validate_partition",
]
