"""Character spans and the interval algebra used by highlight state.

Offsets are Unicode scalar values (Python string indices), half-open
[start, end).
"""
from __future__ import annotations

from dataclasses import dataclass


class SpanError(ValueError):
    """A span is malformed or out of bounds for its text."""


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise SpanError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end

    def touches(self, other: "Span") -> bool:
        """Overlapping or sharing a boundary."""
        return self.start <= other.end and other.start <= self.end

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def intersect(self, other: "Span") -> "Span | None":
        start = max(self.start, other.start)
        end = min(self.end, other.end)
        return Span(start, end) if start < end else None

    def clamp(self, limit: int) -> "Span | None":
        """Clip to [0, limit); None if nothing remains."""
        start = max(self.start, 0)
        end = min(self.end, limit)
        return Span(start, end) if start < end else None


def check_within(span: Span, text_length: int) -> None:
    if span.end > text_length:
        raise SpanError(
            f"span [{span.start}, {span.end}) exceeds text length {text_length}"
        )


def merge_touching(spans: list[Span]) -> list[Span]:
    """Union of spans: sorted, with overlapping or touching spans merged."""
    if not spans:
        return []
    ordered = sorted(spans)
    merged = [ordered[0]]
    for span in ordered[1:]:
        last = merged[-1]
        if span.start <= last.end:
            if span.end > last.end:
                merged[-1] = Span(last.start, span.end)
        else:
            merged.append(span)
    return merged


def subtract(spans: list[Span], hole: Span) -> list[Span]:
    """Remove `hole` from each span, truncating or splitting as needed."""
    out: list[Span] = []
    for span in spans:
        if not span.overlaps(hole):
            out.append(span)
            continue
        if span.start < hole.start:
            out.append(Span(span.start, hole.start))
        if hole.end < span.end:
            out.append(Span(hole.end, span.end))
    return out
