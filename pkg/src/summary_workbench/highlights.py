"""Highlight state over a document and its wire markup.

A HighlightSet is an immutable value: active highlights (user drags or
accepted suggestions) kept disjoint and sorted, plus machine suggestions
pending review. Every mutation returns a new, normalized set.

Serialization brackets each active span with the marker strings
``<extra_id_1>`` / ``<extra_id_2>``, bit-exact, no added whitespace.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .spans import Span, SpanError, check_within
from .textpipe import Document

BEGIN_MARKER = "<extra_id_1>"
END_MARKER = "<extra_id_2>"


class UnknownSuggestionError(KeyError):
    """Suggestion id not present in the pending list."""


class MarkupError(ValueError):
    """Unbalanced or nested highlight markers."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Highlight:
    span: Span
    origin: str = "user"  # "user" | "accepted_suggestion"


@dataclass(frozen=True)
class PendingSuggestion:
    id: str
    span: Span
    score: float


@dataclass(frozen=True)
class HighlightSet:
    document_id: str
    active: tuple[Highlight, ...] = ()
    pending: tuple[PendingSuggestion, ...] = ()

    def active_spans(self) -> list[Span]:
        return [h.span for h in self.active]

    def covers(self, span: Span) -> bool:
        return any(h.span.overlaps(span) for h in self.active)


def _normalize(active: list[Highlight], pending: tuple[PendingSuggestion, ...]) -> tuple[tuple[Highlight, ...], tuple[PendingSuggestion, ...]]:
    """Merge touching/overlapping active spans; drop pending that overlap active.

    A merged highlight is user-origin if any constituent was.
    """
    ordered = sorted(active, key=lambda h: h.span)
    merged: list[Highlight] = []
    for h in ordered:
        if merged and h.span.start <= merged[-1].span.end:
            last = merged[-1]
            origin = "user" if "user" in (last.origin, h.origin) else last.origin
            merged[-1] = Highlight(
                Span(last.span.start, max(last.span.end, h.span.end)), origin
            )
        else:
            merged.append(h)
    kept = tuple(
        s for s in pending if not any(h.span.overlaps(s.span) for h in merged)
    )
    return tuple(merged), kept


def normalize(set_: HighlightSet) -> HighlightSet:
    active, pending = _normalize(list(set_.active), set_.pending)
    return replace(set_, active=active, pending=pending)


def add_user_span(set_: HighlightSet, span: Span, doc: Document) -> HighlightSet:
    """Cover `span` with a user highlight and renormalize."""
    check_within(span, len(doc.text))
    active, pending = _normalize([*set_.active, Highlight(span, "user")], set_.pending)
    return replace(set_, active=active, pending=pending)


def erase_span(set_: HighlightSet, span: Span) -> HighlightSet:
    """Remove `span` from active coverage, truncating or splitting highlights."""
    out: list[Highlight] = []
    for h in set_.active:
        if not h.span.overlaps(span):
            out.append(h)
            continue
        if h.span.start < span.start:
            out.append(Highlight(Span(h.span.start, span.start), h.origin))
        if span.end < h.span.end:
            out.append(Highlight(Span(span.end, h.span.end), h.origin))
    return replace(set_, active=tuple(out))


def with_pending(set_: HighlightSet, suggestions: list[PendingSuggestion]) -> HighlightSet:
    """Install machine suggestions, skipping any that overlap active coverage."""
    kept = tuple(s for s in suggestions if not set_.covers(s.span))
    return replace(set_, pending=kept)


def _pop_pending(set_: HighlightSet, suggestion_id: str) -> tuple[PendingSuggestion, tuple[PendingSuggestion, ...]]:
    rest = tuple(s for s in set_.pending if s.id != suggestion_id)
    if len(rest) == len(set_.pending):
        raise UnknownSuggestionError(suggestion_id)
    picked = next(s for s in set_.pending if s.id == suggestion_id)
    return picked, rest


def accept_suggestion(set_: HighlightSet, suggestion_id: str) -> HighlightSet:
    picked, rest = _pop_pending(set_, suggestion_id)
    active, pending = _normalize(
        [*set_.active, Highlight(picked.span, "accepted_suggestion")], rest
    )
    return replace(set_, active=active, pending=pending)


def reject_suggestion(set_: HighlightSet, suggestion_id: str) -> HighlightSet:
    _, rest = _pop_pending(set_, suggestion_id)
    return replace(set_, pending=rest)


def render_markup(text: str, spans: list[Span]) -> str:
    """`text` with begin/end markers around each span (assumed disjoint, sorted)."""
    parts: list[str] = []
    cursor = 0
    for span in spans:
        parts.append(text[cursor : span.start])
        parts.append(BEGIN_MARKER)
        parts.append(text[span.start : span.end])
        parts.append(END_MARKER)
        cursor = span.end
    parts.append(text[cursor:])
    return "".join(parts)


def to_markup(doc: Document, set_: HighlightSet) -> str:
    """Serialize active highlights into marker syntax; pending are not emitted."""
    return render_markup(doc.text, set_.active_spans())


def from_markup(marked: str) -> tuple[str, list[Span]]:
    """Inverse of :func:`to_markup`: recover (clean text, active spans).

    Raises MarkupError (with the offset in `marked`) on nested, unopened,
    or unclosed markers.
    """
    parts: list[str] = []
    spans: list[Span] = []
    clean_len = 0
    open_at: int | None = None
    pos = 0
    while True:
        b = marked.find(BEGIN_MARKER, pos)
        e = marked.find(END_MARKER, pos)
        if b == -1 and e == -1:
            break
        if e == -1 or (b != -1 and b < e):
            if open_at is not None:
                raise MarkupError("nested begin marker", b)
            parts.append(marked[pos:b])
            clean_len += b - pos
            open_at = clean_len
            pos = b + len(BEGIN_MARKER)
        else:
            if open_at is None:
                raise MarkupError("end marker without begin", e)
            parts.append(marked[pos:e])
            clean_len += e - pos
            if clean_len > open_at:
                spans.append(Span(open_at, clean_len))
            open_at = None
            pos = e + len(END_MARKER)
    if open_at is not None:
        raise MarkupError("unclosed begin marker", len(marked))
    parts.append(marked[pos:])
    return "".join(parts), spans


__all__ = [
    "BEGIN_MARKER",
    "END_MARKER",
    "Highlight",
    "HighlightSet",
    "MarkupError",
    "PendingSuggestion",
    "SpanError",
    "UnknownSuggestionError",
    "accept_suggestion",
    "add_user_span",
    "erase_span",
    "from_markup",
    "normalize",
    "reject_suggestion",
    "render_markup",
    "to_markup",
    "with_pending",
]
