"""Command-line front end: keywords, structure, evaluate, experiment.

Exit codes: 0 ok, 2 input/parse problem, 3 no keyword candidates, 4 remote
embedding failure, 5 experiment with no surviving document, 1 other I/O error.
All randomness flows from --seed; reports embed the effective configuration so
any run is reproducible from its header.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .documents import (
    Document,
    FlatDocument,
    Section,
    load_corpus,
    parse_sectioned_document,
    segment_sentences,
    shuffle_document,
)
from .embeddings import ProviderConfig, RemoteProvider
from .errors import (
    AllDocumentsFailed,
    ContractViolation,
    CorpusFormatError,
    DestructureError,
    EmptySection,
    NoCandidates,
    NoSections,
    RemoteUnavailable,
    TooFewSentences,
)
from .evaluation import (
    DocumentRow,
    emit_report,
    evaluate,
    render_summary_table,
    run_experiment,
)
from .stopwords import STOPWORDS
from .structurer import (
    StructureParams,
    structure_document,
    to_json_dict,
    to_text,
)
from .textrank import RankParams, extract_keywords

log = logging.getLogger("destructure")

ENDPOINT_ENV = "DESTRUCTURE_EMBED_ENDPOINT"


def _add_rank_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", type=int, default=2, help="co-occurrence window (default 2)")
    parser.add_argument("--damping", type=float, default=0.85, help="rank damping (default 0.85)")
    parser.add_argument("--tolerance", type=float, default=1e-6, help="rank tolerance (default 1e-6)")
    parser.add_argument("--max-iterations", type=int, default=100, help="rank iteration cap (default 100)")


def _add_provider_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--provider", choices=["tfidf", "remote"], default="tfidf")
    parser.add_argument(
        "--endpoint",
        default=None,
        help=f"embedding endpoint URL (falls back to ${ENDPOINT_ENV})",
    )
    parser.add_argument("--cache-capacity", type=int, default=2048)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="destructure",
        description="Rebuild the sectional structure of unordered text documents.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("keywords", help="extract ranked keywords from a document")
    p.add_argument("input", help="text file, wiki-style file, or single-document JSONL")
    p.add_argument("--k", default="auto", help="keyword count or 'auto'")
    _add_rank_flags(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--output", default=None, help="write to file instead of stdout")

    p = sub.add_parser("structure", help="cluster a flat or sectioned document")
    p.add_argument("input")
    p.add_argument("--t", type=float, default=0.25, help="keyword weight in [0,1] (default 0.25)")
    p.add_argument("--k", default="auto", help="keyword count or 'auto'")
    p.add_argument("--keywords", default=None, help="comma-separated keywords, bypasses extraction")
    p.add_argument("--shuffle-seed", type=int, default=None, help="shuffle input before structuring")
    _add_rank_flags(p)
    _add_provider_flags(p)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--output", default=None)

    p = sub.add_parser("evaluate", help="shuffle, restructure, and score one sectioned document")
    p.add_argument("input")
    p.add_argument("--t", type=float, default=0.25)
    p.add_argument("--k", default="auto")
    p.add_argument("--keywords", default=None)
    p.add_argument("--seed", type=int, default=42, help="shuffle seed (default 42)")
    _add_rank_flags(p)
    _add_provider_flags(p)
    p.add_argument("--format", choices=["json", "text", "csv"], default="json")
    p.add_argument("--output", default=None)

    p = sub.add_parser("experiment", help="shuffle-reconstruct a corpus and report Sim1/Sim2")
    p.add_argument("input", help="corpus directory of .txt files or a .jsonl file")
    p.add_argument("--sets", type=int, default=1, help="number of contiguous corpus sets (default 1)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--t", type=float, default=0.25)
    p.add_argument("--k", default="auto")
    _add_rank_flags(p)
    _add_provider_flags(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output-dir", default=".", help="where rows and summary files go")
    return parser


def _parse_k(value: str) -> int | None:
    if value == "auto":
        return None
    k = int(value)
    if k < 1:
        raise ValueError("--k must be positive")
    return k


def _rank_params(args) -> RankParams:
    return RankParams(
        damping=args.damping,
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        window=args.window,
    )


def _provider_config(args) -> ProviderConfig:
    endpoint = None
    if args.provider == "remote":
        endpoint = args.endpoint or os.environ.get(ENDPOINT_ENV)
        if not endpoint:
            raise CorpusFormatError(
                f"remote provider needs --endpoint or ${ENDPOINT_ENV}"
            )
    return ProviderConfig(args.provider, endpoint, args.cache_capacity)


def _structure_params(args) -> StructureParams:
    return StructureParams(
        t=args.t,
        keyword_count=_parse_k(args.k),
        provider=_provider_config(args),
        rank=_rank_params(args),
    )


def _config_dict(args, extra_keys: list[str]) -> dict:
    config = {"subcommand": args.subcommand, "input": args.input}
    for key in extra_keys:
        config[key] = getattr(args, key.replace("-", "_"))
    return config


def _load_single_document(path_str: str) -> Document:
    docs = load_corpus(path_str)
    if len(docs) != 1:
        raise CorpusFormatError(
            f"{path_str}: expected a single document, found {len(docs)} "
            "(use the experiment command for corpora)"
        )
    return docs[0]


def _load_flat_input(path_str: str, shuffle_seed: int | None) -> FlatDocument:
    """Sectioned inputs are flattened in reading order unless a shuffle seed is given.

    A text file without heading lines is taken as an already-flat document.
    """
    path = Path(path_str)
    if not path.is_file():
        raise CorpusFormatError(f"{path_str}: not a file")
    if path.suffix == ".jsonl":
        doc = _load_single_document(path_str)
    else:
        text = path.read_text(encoding="utf-8")
        try:
            doc = parse_sectioned_document(text, path.stem)
        except NoSections:
            sentences = segment_sentences(text)
            if not sentences:
                raise CorpusFormatError(f"{path_str}: no sentences found") from None
            doc = Document(
                path.stem,
                (Section("Document", tuple(s.id for s in sentences)),),
                tuple(sentences),
            )
    if shuffle_seed is not None:
        return shuffle_document(doc, shuffle_seed)
    return FlatDocument(doc.doc_id, tuple(range(len(doc.sentences))), doc.sentences)


def _write_output(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(output).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _split_keywords(raw: str) -> list[str]:
    words = [w for w in (part.strip() for part in raw.split(",")) if w]
    if not words:
        raise CorpusFormatError("--keywords is empty")
    return words


def cmd_keywords(args) -> int:
    flat = _load_flat_input(args.input, None)
    tokens = [tok for s in flat.sentences_in_order() for tok in s.tokens]
    k = _parse_k(args.k)
    if k is None:
        from .textrank import auto_keyword_count

        k = auto_keyword_count(tokens, STOPWORDS)
    k = max(1, min(k, max(len(tokens), 1)))
    keywords = extract_keywords(tokens, k, _rank_params(args), STOPWORDS)
    config = _config_dict(args, ["k", "window", "damping", "tolerance", "max_iterations", "format"])
    log.info("config: %s", json.dumps(config, sort_keys=True))
    if args.format == "json":
        payload = {
            "config": config,
            "keywords": [
                {"keyword": kw.text, "score": kw.score, "first_pos": kw.first_pos}
                for kw in keywords
            ],
        }
        _write_output(json.dumps(payload, indent=2), args.output)
    else:
        lines = [f"{kw.text}\t{kw.score:.8f}" for kw in keywords]
        _write_output("\n".join(lines), args.output)
    return 0


def cmd_structure(args) -> int:
    params = _structure_params(args)
    flat = _load_flat_input(args.input, args.shuffle_seed)
    forced = _split_keywords(args.keywords) if args.keywords else None
    provider = None
    if params.provider.kind == "remote":
        provider = RemoteProvider(params.provider.endpoint, params.provider.cache_capacity)
    structured = structure_document(flat, params, keywords=forced, provider=provider)
    config = _config_dict(
        args,
        ["t", "k", "keywords", "shuffle_seed", "provider", "endpoint",
         "cache_capacity", "window", "damping", "tolerance", "max_iterations", "format"],
    )
    log.info("config: %s", json.dumps(config, sort_keys=True))
    if args.format == "json":
        _write_output(json.dumps(to_json_dict(structured, flat.sentences), indent=2), args.output)
    else:
        _write_output(to_text(structured, flat.sentences), args.output)
    return 0


def cmd_evaluate(args) -> int:
    params = _structure_params(args)
    doc = _load_single_document(args.input)
    flat = shuffle_document(doc, args.seed)
    forced = _split_keywords(args.keywords) if args.keywords else None
    provider = None
    if params.provider.kind == "remote":
        provider = RemoteProvider(params.provider.endpoint, params.provider.cache_capacity)
    structured = structure_document(flat, params, keywords=forced, provider=provider)
    report = evaluate(doc, structured, seed=args.seed, t=args.t)
    config = _config_dict(
        args,
        ["t", "k", "keywords", "seed", "provider", "endpoint", "cache_capacity",
         "window", "damping", "tolerance", "max_iterations", "format"],
    )
    log.info("config: %s", json.dumps(config, sort_keys=True))
    if args.format == "json":
        payload = {
            "config": config,
            "doc_id": report.doc_id,
            "seed": report.seed,
            "t": report.t,
            "sim1": report.sim1,
            "sim2": report.sim2,
            "per_section": [
                {
                    "input_title": s.input_title,
                    "matched_cluster_keyword": s.matched_cluster_keyword,
                    "overlap": s.overlap,
                    "input_size": s.input_size,
                    "output_size": s.output_size,
                    "sim1": s.sim1,
                    "sim2": s.sim2,
                }
                for s in report.per_section
            ],
        }
        _write_output(json.dumps(payload, indent=2), args.output)
    elif args.format == "csv":
        lines = ["# config: " + json.dumps(config, sort_keys=True)]
        lines.append("input_title,matched_cluster_keyword,overlap,input_size,output_size,sim1,sim2")
        for s in report.per_section:
            lines.append(
                f"{s.input_title},{s.matched_cluster_keyword},{s.overlap},"
                f"{s.input_size},{s.output_size},{s.sim1:.8f},{s.sim2:.8f}"
            )
        lines.append(f"# weighted means: sim1={report.sim1:.8f} sim2={report.sim2:.8f}")
        _write_output("\n".join(lines), args.output)
    else:
        lines = [f"doc {report.doc_id} seed {report.seed} t {report.t}"]
        for s in report.per_section:
            lines.append(
                f"  {s.input_title!r} -> {s.matched_cluster_keyword!r} "
                f"sim1={s.sim1:.8f} sim2={s.sim2:.8f}"
            )
        lines.append(f"weighted sim1={report.sim1:.8f} sim2={report.sim2:.8f}")
        _write_output("\n".join(lines), args.output)
    return 0


def _split_sets(n_docs: int, n_sets: int) -> list[tuple[int, int]]:
    """Contiguous (start, stop) chunks, sizes differing by at most one."""
    n_sets = max(1, min(n_sets, n_docs))
    base, extra = divmod(n_docs, n_sets)
    spans = []
    start = 0
    for i in range(n_sets):
        size = base + (1 if i < extra else 0)
        spans.append((start, start + size))
        start += size
    return spans


def cmd_experiment(args) -> int:
    params = _structure_params(args)
    corpus = load_corpus(args.input)
    config = _config_dict(
        args,
        ["sets", "seed", "t", "k", "provider", "endpoint", "cache_capacity",
         "window", "damping", "tolerance", "max_iterations", "format"],
    )
    log.info("config: %s", json.dumps(config, sort_keys=True))

    provider = None
    if params.provider.kind == "remote":
        provider = RemoteProvider(params.provider.endpoint, params.provider.cache_capacity)

    all_rows: list[DocumentRow] = []
    summaries = []
    failed_sets = 0
    for set_idx, (start, stop) in enumerate(_split_sets(len(corpus), args.sets), 1):
        try:
            result = run_experiment(
                corpus[start:stop],
                base_seed=args.seed + start,
                params=params,
                set_id=str(set_idx),
                provider=provider,
            )
        except AllDocumentsFailed as exc:
            log.error("set %d: %s", set_idx, exc)
            failed_sets += 1
            continue
        all_rows.extend(result.rows)
        summaries.append(result.summary)
        for doc_id, message in result.failures:
            log.warning("skipped %s: %s", doc_id, message)
    if not summaries:
        raise AllDocumentsFailed("every set failed")

    rows_path, summary_path = emit_report(
        all_rows, summaries, args.format, args.output_dir, config
    )
    print(render_summary_table(summaries))
    print(f"rows: {rows_path}\nsummary: {summary_path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s"
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    commands = {
        "keywords": cmd_keywords,
        "structure": cmd_structure,
        "evaluate": cmd_evaluate,
        "experiment": cmd_experiment,
    }
    try:
        return commands[args.subcommand](args)
    except (NoSections, EmptySection, CorpusFormatError, TooFewSentences, ValueError) as exc:
        log.error("%s", exc)
        return 2
    except NoCandidates as exc:
        log.error("%s", exc)
        return 3
    except (RemoteUnavailable, ContractViolation) as exc:
        log.error("%s", exc)
        return 4
    except AllDocumentsFailed as exc:
        log.error("%s", exc)
        return 5
    except DestructureError as exc:
        log.error("%s", exc)
        return 1
    except OSError as exc:
        log.error("%s", exc)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
