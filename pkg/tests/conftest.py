from __future__ import annotations

from pathlib import Path

import pytest

from summary_workbench.highlights import Highlight, HighlightSet
from summary_workbench.spans import Span
from summary_workbench.textpipe import Document, analyze

DATA_DIR = Path(__file__).parent / "data"

WORKED_SOURCE = (
    "John ate today, and Mr. Smith told his mother. "
    "Mr. Smith left the office. "
    "He called me yesterday."
)
# The generated summary reorders the first source sentence, which is what
# forces the second, shorter match to surface on a later iteration.
WORKED_SUMMARY = "Mr. Smith said early that John will eat today. He called me."
WORKED_HIGHLIGHT_TEXTS = ("John ate today", "Mr. Smith told his mother", "He called me")


def span_of(text: str, fragment: str) -> Span:
    start = text.index(fragment)
    return Span(start, start + len(fragment))


def highlight_set_for(doc: Document, fragments: tuple[str, ...]) -> HighlightSet:
    return HighlightSet(
        document_id=doc.id,
        active=tuple(Highlight(span_of(doc.text, f), "user") for f in fragments),
    )


@pytest.fixture(scope="session")
def worked_source() -> Document:
    return analyze(WORKED_SOURCE, "worked-source")


@pytest.fixture(scope="session")
def worked_summary() -> Document:
    return analyze(WORKED_SUMMARY, "worked-summary")


@pytest.fixture(scope="session")
def worked_highlights(worked_source: Document) -> HighlightSet:
    return highlight_set_for(worked_source, WORKED_HIGHLIGHT_TEXTS)


@pytest.fixture(scope="session")
def article_text() -> str:
    return (DATA_DIR / "long_article.txt").read_text("utf-8")


@pytest.fixture(scope="session")
def article(article_text: str) -> Document:
    return analyze(article_text, "article")
