"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from destructure import Document, build_document

REPO_ROOT = Path(__file__).resolve().parent.parent
SAMPLE_DIR = REPO_ROOT / "data" / "sample"
FIXTURE_DOC = SAMPLE_DIR / "solar_system.txt"
GOLDEN_STRUCTURE = Path(__file__).resolve().parent / "data" / "golden_structure.json"


def doc_from_dict(record: dict) -> Document:
    """Build a package Document from a corpora.py dict (token lists to text)."""
    sections = [
        (s["title"], [" ".join(tokens) + "." for tokens in s["sentences"]])
        for s in record["sections"]
    ]
    return build_document(record["doc_id"], sections)


@pytest.fixture
def sample_dir() -> Path:
    return SAMPLE_DIR


@pytest.fixture
def fixture_doc_path() -> Path:
    return FIXTURE_DOC
