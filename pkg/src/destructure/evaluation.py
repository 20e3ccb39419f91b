"""Reconstruction metrics, the shuffle-reconstruct experiment, and report emission.

Sim1 of an (input section, output cluster) pair is overlap / input size; Sim2
is overlap / (input size + output size), so a perfect match scores 0.5. Each
input section keeps the best-matching cluster per metric (clusters may be
reused), and the document value is the input-size-weighted mean.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .documents import Document, shuffle_document
from .errors import AllDocumentsFailed, DestructureError, IdSetMismatch
from .structurer import (
    StructureParams,
    StructuredDocument,
    structure_with_baseline,
)

log = logging.getLogger(__name__)

CSV_HEADER = ["set", "doc_id", "seed", "sim1", "sim2", "base_sim1", "base_sim2"]
SUMMARY_HEADER = ["set", "n_docs", "sim1", "sim2", "base_sim1", "base_sim2"]


def sim1(input_ids: set[int], output_ids: set[int]) -> float:
    """|input ∩ output| / |input|."""
    if not input_ids:
        raise ValueError("input section is empty")
    return len(input_ids & output_ids) / len(input_ids)


def sim2(input_ids: set[int], output_ids: set[int]) -> float:
    """|input ∩ output| / (|input| + |output|); 0.5 at a perfect match."""
    if not input_ids:
        raise ValueError("input section is empty")
    if not output_ids:
        raise ValueError("output section is empty")
    return len(input_ids & output_ids) / (len(input_ids) + len(output_ids))


@dataclass(frozen=True)
class SectionScore:
    """Per-input-section result; the matched cluster is the Sim1 argmax."""

    input_title: str
    matched_cluster_keyword: str
    overlap: int
    input_size: int
    output_size: int
    sim1: float
    sim2: float


@dataclass(frozen=True)
class EvaluationReport:
    doc_id: str
    seed: int
    t: float
    per_section: tuple[SectionScore, ...]
    sim1: float
    sim2: float


def evaluate(
    original: Document,
    structured: StructuredDocument,
    *,
    seed: int = 0,
    t: float = 0.25,
) -> EvaluationReport:
    """Score every input section against every cluster, keeping the per-metric max.

    Ties go to the cluster with the higher keyword score (clusters are already
    in that order). Both metrics are computed in one pass; each takes its own
    max-matching cluster, so Sim2's match may differ from the recorded Sim1 one.
    """
    original_ids = {s.id for s in original.sentences}
    structured_ids = {mid for c in structured.clusters for mid in c.member_ids}
    if original_ids != structured_ids:
        raise IdSetMismatch(
            f"{original.doc_id}: original has {len(original_ids)} ids, "
            f"output covers {len(structured_ids)}"
        )

    cluster_sets = [(c, set(c.member_ids)) for c in structured.clusters]
    scores: list[SectionScore] = []
    for section in original.sections:
        in_set = set(section.sentence_ids)
        best1 = best2 = -1.0
        match = None
        match_overlap = match_size = 0
        for cluster, out_set in cluster_sets:
            overlap = len(in_set & out_set)
            v1 = overlap / len(in_set)
            v2 = overlap / (len(in_set) + len(out_set))
            if v1 > best1:
                best1 = v1
                match, match_overlap, match_size = cluster, overlap, len(out_set)
            if v2 > best2:
                best2 = v2
        assert match is not None
        scores.append(
            SectionScore(
                input_title=section.title,
                matched_cluster_keyword=match.keyword.text,
                overlap=match_overlap,
                input_size=len(in_set),
                output_size=match_size,
                sim1=best1,
                sim2=best2,
            )
        )

    total = sum(s.input_size for s in scores)
    mean1 = sum(s.input_size * s.sim1 for s in scores) / total
    mean2 = sum(s.input_size * s.sim2 for s in scores) / total
    return EvaluationReport(
        original.doc_id, seed, t, tuple(scores), mean1, mean2
    )


@dataclass(frozen=True)
class DocumentRow:
    set_id: str
    doc_id: str
    seed: int
    sim1: float
    sim2: float
    base_sim1: float
    base_sim2: float


@dataclass(frozen=True)
class ExperimentSummary:
    set_id: str
    n_docs: int
    mean_sim1: float
    mean_sim2: float
    mean_base_sim1: float
    mean_base_sim2: float


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[DocumentRow, ...]
    summary: ExperimentSummary
    failures: tuple[tuple[str, str], ...]


def summarize(set_id: str, rows: Sequence[DocumentRow]) -> ExperimentSummary:
    """Unweighted arithmetic means over the documents of a set."""
    n = len(rows)
    return ExperimentSummary(
        set_id=set_id,
        n_docs=n,
        mean_sim1=sum(r.sim1 for r in rows) / n,
        mean_sim2=sum(r.sim2 for r in rows) / n,
        mean_base_sim1=sum(r.base_sim1 for r in rows) / n,
        mean_base_sim2=sum(r.base_sim2 for r in rows) / n,
    )


def run_experiment(
    corpus: Sequence[Document],
    base_seed: int,
    params: StructureParams,
    set_id: str = "1",
    provider=None,
) -> ExperimentResult:
    """Shuffle each document with seed base_seed + i, structure at params.t and
    at t=1 (sharing keywords, embeddings and seeds), and evaluate both.

    Per-document failures are recorded and skipped; raises AllDocumentsFailed
    only when nothing succeeded.
    """
    if not corpus:
        raise ValueError("experiment corpus is empty")
    rows: list[DocumentRow] = []
    failures: list[tuple[str, str]] = []
    for i, doc in enumerate(corpus):
        seed = base_seed + i
        try:
            flat = shuffle_document(doc, seed)
            main, baseline = structure_with_baseline(flat, params, provider=provider)
            rep = evaluate(doc, main, seed=seed, t=params.t)
            base_rep = evaluate(doc, baseline, seed=seed, t=1.0)
        except (DestructureError, ValueError) as exc:
            log.warning("document %s failed: %s", doc.doc_id, exc)
            failures.append((doc.doc_id, str(exc)))
            continue
        rows.append(
            DocumentRow(
                set_id, doc.doc_id, seed, rep.sim1, rep.sim2, base_rep.sim1, base_rep.sim2
            )
        )
    if not rows:
        raise AllDocumentsFailed(
            f"set {set_id}: all {len(corpus)} documents failed; "
            f"first error: {failures[0][1]}"
        )
    return ExperimentResult(tuple(rows), summarize(set_id, rows), tuple(failures))


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return f"{value:.8f}"


def _config_lines(config: dict | None) -> list[str]:
    if not config:
        return []
    return ["# config: " + json.dumps(config, sort_keys=True)]


def write_rows_csv(
    rows: Iterable[DocumentRow], path: str | Path, config: dict | None = None
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in _config_lines(config):
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow(
                [r.set_id, r.doc_id, r.seed, _fmt(r.sim1), _fmt(r.sim2),
                 _fmt(r.base_sim1), _fmt(r.base_sim2)]
            )


def write_summary_csv(
    summaries: Sequence[ExperimentSummary],
    path: str | Path,
    config: dict | None = None,
    average_row: bool = True,
) -> None:
    """Per-set rows plus an Average row, floats at 8 decimal places."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in _config_lines(config):
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for s in summaries:
            writer.writerow(
                [s.set_id, s.n_docs, _fmt(s.mean_sim1), _fmt(s.mean_sim2),
                 _fmt(s.mean_base_sim1), _fmt(s.mean_base_sim2)]
            )
        if average_row and summaries:
            writer.writerow(_average_row(summaries))


def _average_row(summaries: Sequence[ExperimentSummary]) -> list[str]:
    n = len(summaries)
    return [
        "Average",
        str(sum(s.n_docs for s in summaries)),
        _fmt(sum(s.mean_sim1 for s in summaries) / n),
        _fmt(sum(s.mean_sim2 for s in summaries) / n),
        _fmt(sum(s.mean_base_sim1 for s in summaries) / n),
        _fmt(sum(s.mean_base_sim2 for s in summaries) / n),
    ]


def write_rows_json(
    rows: Iterable[DocumentRow], path: str | Path, config: dict | None = None
) -> None:
    payload = {"rows": [asdict(r) for r in rows]}
    if config:
        payload = {"config": config, **payload}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")


def write_summary_json(
    summaries: Sequence[ExperimentSummary],
    path: str | Path,
    config: dict | None = None,
) -> None:
    payload = {"summaries": [asdict(s) for s in summaries]}
    if config:
        payload = {"config": config, **payload}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")


def emit_report(
    rows: Sequence[DocumentRow],
    summaries: Sequence[ExperimentSummary],
    fmt: str,
    out_dir: str | Path,
    config: dict | None = None,
) -> tuple[Path, Path]:
    """Write rows and summary files; returns their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        rows_path = out_dir / "rows.csv"
        summary_path = out_dir / "summary.csv"
        write_rows_csv(rows, rows_path, config)
        write_summary_csv(summaries, summary_path, config)
    elif fmt == "json":
        rows_path = out_dir / "rows.json"
        summary_path = out_dir / "summary.json"
        write_rows_json(rows, rows_path, config)
        write_summary_json(summaries, summary_path, config)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return rows_path, summary_path


def render_summary_table(summaries: Sequence[ExperimentSummary]) -> str:
    """Fixed-width table mirroring the report layout, with an Average row."""
    lines = ["%-10s %-8s %-12s %-12s %-12s %-12s" % tuple(SUMMARY_HEADER)]
    for s in summaries:
        lines.append(
            "%-10s %-8d %-12s %-12s %-12s %-12s"
            % (s.set_id, s.n_docs, _fmt(s.mean_sim1), _fmt(s.mean_sim2),
               _fmt(s.mean_base_sim1), _fmt(s.mean_base_sim2))
        )
    if summaries:
        avg = _average_row(summaries)
        lines.append("%-10s %-8s %-12s %-12s %-12s %-12s" % tuple(avg))
    return "\n".join(lines)
