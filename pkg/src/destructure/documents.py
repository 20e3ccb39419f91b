"""Document model, tokenization, sentence segmentation, ingestion, and seeded shuffling.

All types are immutable after construction and every operation here is a pure
function, so everything is safe to share across threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusFormatError, EmptySection, NoSections

# Maximal runs of Unicode letters/digits; underscore and everything else separates.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_HEADING_RE = re.compile(r"^\s*==\s*(.+?)\s*==\s*$")
_TERMINATORS = frozenset(".!?")


def tokenize(text: str) -> list[str]:
    """Lowercase tokens of `text`. Digit runs are kept; punctuation separates."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Sentence:
    """One sentence with a stable id (its 0-based position in the original document)."""

    id: int
    text: str
    tokens: tuple[str, ...]

    @classmethod
    def make(cls, sentence_id: int, text: str) -> "Sentence":
        return cls(sentence_id, text, tuple(tokenize(text)))


@dataclass(frozen=True)
class Section:
    title: str
    sentence_ids: tuple[int, ...]


@dataclass(frozen=True)
class Document:
    """A sectioned source document; sections partition the sentence id set."""

    doc_id: str
    sections: tuple[Section, ...]
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class FlatDocument:
    """An unlabeled sentence sequence; `order` is a permutation of sentence ids."""

    doc_id: str
    order: tuple[int, ...]
    sentences: tuple[Sentence, ...]

    def sentences_in_order(self) -> list[Sentence]:
        by_id = {s.id: s for s in self.sentences}
        return [by_id[i] for i in self.order]


def segment_sentences(text: str) -> list[Sentence]:
    """Split after '.', '!' or '?' followed by whitespace or end-of-text.

    Fragments are trimmed, empties dropped, ids assigned 0..n-1 in order. A
    trailing fragment without a terminator is kept.
    """
    fragments: list[str] = []
    start = 0
    for i, ch in enumerate(text):
        if ch in _TERMINATORS and (i + 1 == len(text) or text[i + 1].isspace()):
            fragments.append(text[start : i + 1])
            start = i + 1
    fragments.append(text[start:])

    sentences: list[Sentence] = []
    for fragment in fragments:
        fragment = fragment.strip()
        if fragment:
            sentences.append(Sentence.make(len(sentences), fragment))
    return sentences


def parse_sectioned_document(text: str, doc_id: str) -> Document:
    """Parse wiki-style text: '== Title ==' heading lines open sections.

    Body lines between headings are joined with spaces and sentence-segmented;
    sentence ids are global across sections in reading order. Text before the
    first heading is ignored.
    """
    raw_sections: list[tuple[str, list[str]]] = []
    for line in text.splitlines():
        match = _HEADING_RE.match(line)
        if match:
            raw_sections.append((match.group(1), []))
        elif raw_sections and line.strip():
            raw_sections[-1][1].append(line.strip())

    if not raw_sections:
        raise NoSections(f"{doc_id}: no '== Title ==' heading line found")

    sentences: list[Sentence] = []
    sections: list[Section] = []
    for title, lines in raw_sections:
        body = segment_sentences(" ".join(lines))
        if not body:
            raise EmptySection(f"{doc_id}: section {title!r} has no sentences")
        ids = []
        for seg in body:
            sid = len(sentences)
            sentences.append(Sentence(sid, seg.text, seg.tokens))
            ids.append(sid)
        sections.append(Section(title, tuple(ids)))
    return Document(doc_id, tuple(sections), tuple(sentences))


def build_document(doc_id: str, sections: list[tuple[str, list[str]]]) -> Document:
    """Assemble a Document from (title, [sentence text, ...]) pairs."""
    if not sections:
        raise NoSections(f"{doc_id}: document has no sections")
    sentences: list[Sentence] = []
    out_sections: list[Section] = []
    for title, texts in sections:
        if not texts:
            raise EmptySection(f"{doc_id}: section {title!r} has no sentences")
        ids = []
        for text in texts:
            sid = len(sentences)
            sentences.append(Sentence.make(sid, text))
            ids.append(sid)
        out_sections.append(Section(title, tuple(ids)))
    return Document(doc_id, tuple(out_sections), tuple(sentences))


def parse_jsonl_document(line: str) -> Document:
    """One JSONL record: {"doc_id": str, "sections": [{"title": str, "sentences": [str]}]}."""
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"invalid JSON record: {exc}") from exc
    try:
        doc_id = record["doc_id"]
        sections = [(s["title"], list(s["sentences"])) for s in record["sections"]]
    except (KeyError, TypeError) as exc:
        raise CorpusFormatError(f"record missing field: {exc}") from exc
    if not isinstance(doc_id, str):
        raise CorpusFormatError("doc_id must be a string")
    return build_document(doc_id, sections)


def load_corpus(path: str | Path) -> list[Document]:
    """Load documents from a directory of .txt files or a .jsonl file.

    Directory entries are read in sorted filename order; the filename stem
    becomes the doc_id.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.txt"))
        if not files:
            raise CorpusFormatError(f"{path}: no .txt files in corpus directory")
        return [
            parse_sectioned_document(f.read_text(encoding="utf-8"), f.stem)
            for f in files
        ]
    if not path.is_file():
        raise CorpusFormatError(f"{path}: not a file or directory")
    if path.suffix == ".jsonl":
        docs = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                docs.append(parse_jsonl_document(line))
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
        if not docs:
            raise CorpusFormatError(f"{path}: empty corpus")
        return docs
    return [parse_sectioned_document(path.read_text(encoding="utf-8"), path.stem)]


# ---------------------------------------------------------------------------
# Deterministic shuffling
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 PRNG; the next_u64 sequence is fully determined by the seed."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def shuffle_document(doc: Document, seed: int) -> FlatDocument:
    """Fisher-Yates over the id list, SplitMix64-driven; same seed, same permutation."""
    n = len(doc.sentences)
    if n == 0:
        raise ValueError("cannot shuffle an empty document")
    rng = SplitMix64(seed)
    ids = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.next_u64() % (i + 1)
        ids[i], ids[j] = ids[j], ids[i]
    return FlatDocument(doc.doc_id, tuple(ids), doc.sentences)


def flatten_document(doc: Document) -> FlatDocument:
    """Drop section boundaries, keeping reading order."""
    if not doc.sentences:
        raise ValueError("cannot flatten an empty document")
    return FlatDocument(doc.doc_id, tuple(range(len(doc.sentences))), doc.sentences)
