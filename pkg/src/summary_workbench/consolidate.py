"""Turn a document plus highlights into a summary draft.

Two consolidators behind one contract: a deterministic extractive-fusion
baseline (bundled, exact highlight adherence), and a client for an
external highlight-conditioned generation model that receives the marked-up
document over HTTP.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import httpx

from .highlights import HighlightSet, render_markup
from .spans import Span
from .textpipe import Document, Lemmatizer, analyze, default_lemmatize

BASELINE = "baseline"
EXTERNAL_MODEL = "external_model"
USER_EDITED = "user_edited"

_TERMINAL_PUNCT = (".", "!", "?")


class EmptyHighlightsError(ValueError):
    """Consolidation requires at least one highlight covering a token."""


class GenerationTransportError(RuntimeError):
    """The model endpoint could not be reached; the baseline is a safe fallback."""

    fallback = BASELINE


class GenerationProtocolError(RuntimeError):
    """The model endpoint answered with an unusable payload."""


@dataclass(frozen=True)
class GenerationConfig:
    endpoint: str = ""
    max_input_tokens: int = 4096
    max_target_tokens: int = 400
    decoding: str = "greedy"
    timeout: float = 30.0

    def __post_init__(self) -> None:
        if self.max_input_tokens <= 0 or self.max_target_tokens <= 0:
            raise ValueError("token limits must be positive")


@dataclass(frozen=True)
class SummaryDraft:
    text: str
    analysis: Document
    provenance: str  # BASELINE | EXTERNAL_MODEL | USER_EDITED


class Consolidator(Protocol):
    def consolidate(self, doc: Document, highlights: HighlightSet) -> SummaryDraft:
        ...


def make_draft(text: str, provenance: str, lemmatize: Lemmatizer = default_lemmatize) -> SummaryDraft:
    return SummaryDraft(text=text, analysis=analyze(text, "summary", lemmatize), provenance=provenance)


def _token_aligned_fragments(doc: Document, highlights: HighlightSet) -> list[list[str]]:
    """Per-sentence highlight fragments, widened to whole-token boundaries.

    Widening matters: a highlight edge may fall inside a token, and the
    summary must contain every highlighted token in full or the lemma-type
    coverage contract breaks.
    """
    per_sentence: list[list[str]] = []
    for sentence in doc.sentences:
        ranges: list[Span] = []
        for h in highlights.active:
            clipped = h.span.intersect(sentence.span)
            if clipped is None:
                continue
            touched = [t.span for t in sentence.tokens if t.span.overlaps(clipped)]
            if not touched:
                continue
            ranges.append(Span(touched[0].start, touched[-1].end))
        merged: list[Span] = []
        for r in sorted(ranges):
            if merged and r.start <= merged[-1].end:
                if r.end > merged[-1].end:
                    merged[-1] = Span(merged[-1].start, r.end)
            else:
                merged.append(r)
        per_sentence.append([doc.text[r.start : r.end] for r in merged])
    return per_sentence


def consolidate_baseline(doc: Document, highlights: HighlightSet) -> SummaryDraft:
    """Deterministic extractive fusion of the highlighted fragments.

    Fragments are grouped by source sentence in document order, each group
    becoming one summary sentence: fragments joined by single spaces, first
    character uppercased, a period appended when no terminal punctuation is
    present. Fragments whose text (case-insensitive) already appeared are
    dropped.
    """
    if not highlights.active:
        raise EmptyHighlightsError("no active highlights to consolidate")
    seen: set[str] = set()
    sentences: list[str] = []
    for fragments in _token_aligned_fragments(doc, highlights):
        kept: list[str] = []
        for fragment in fragments:
            key = fragment.lower()
            if key in seen:
                continue
            seen.add(key)
            kept.append(fragment)
        if not kept:
            continue
        text = " ".join(kept)
        text = text[0].upper() + text[1:]
        if not text.endswith(_TERMINAL_PUNCT):
            text += "."
        sentences.append(text)
    if not sentences:
        raise EmptyHighlightsError("highlights cover no tokens")
    return make_draft(" ".join(sentences), BASELINE)


def truncated_markup(doc: Document, highlights: HighlightSet, max_tokens: int) -> str:
    """Markup for the leading whole sentences that fit the token budget.

    Highlights are clipped to the kept prefix, so marker pairs stay
    balanced; a highlight entirely beyond the cut is dropped.
    """
    budget = 0
    end = 0
    kept = 0
    for sentence in doc.sentences:
        if budget + len(sentence.tokens) > max_tokens and kept > 0:
            break
        budget += len(sentence.tokens)
        end = sentence.span.end
        kept += 1
        if budget >= max_tokens:
            break
    text = doc.text if kept == len(doc.sentences) else doc.text[:end]
    spans = []
    for s in highlights.active_spans():
        clamped = s.clamp(len(text))
        if clamped is not None:
            spans.append(clamped)
    return render_markup(text, spans)


def consolidate_external(
    doc: Document,
    highlights: HighlightSet,
    cfg: GenerationConfig,
    client: httpx.Client | None = None,
) -> SummaryDraft:
    """Request a summary from the external model endpoint.

    Sends the marked-up document (truncated to whole sentences within the
    input-token budget) and returns the model text verbatim as a draft.
    Transport failures raise GenerationTransportError and leave no partial
    draft; a malformed response raises GenerationProtocolError.
    """
    if not highlights.active:
        raise EmptyHighlightsError("no active highlights to consolidate")
    if not cfg.endpoint:
        raise ValueError("external consolidation requires an endpoint")
    payload = {
        "input": truncated_markup(doc, highlights, cfg.max_input_tokens),
        "max_target_tokens": cfg.max_target_tokens,
        "decoding": cfg.decoding,
    }
    try:
        own = client is None
        http = client or httpx.Client(timeout=cfg.timeout)
        try:
            response = http.post(cfg.endpoint, json=payload)
        finally:
            if own:
                http.close()
    except httpx.HTTPError as exc:
        raise GenerationTransportError(
            f"model endpoint unreachable ({exc}); fall back to the {BASELINE} engine"
        ) from exc
    if response.status_code != 200:
        raise GenerationProtocolError(f"model endpoint returned HTTP {response.status_code}")
    try:
        summary = response.json()["summary"]
    except (ValueError, KeyError) as exc:
        raise GenerationProtocolError(f"malformed model response: {exc}") from exc
    if not isinstance(summary, str):
        raise GenerationProtocolError("model response 'summary' is not a string")
    return make_draft(summary, EXTERNAL_MODEL)


@dataclass
class BaselineConsolidator:
    def consolidate(self, doc: Document, highlights: HighlightSet) -> SummaryDraft:
        return consolidate_baseline(doc, highlights)


@dataclass
class ExternalConsolidator:
    cfg: GenerationConfig
    client: httpx.Client | None = field(default=None, repr=False)

    def consolidate(self, doc: Document, highlights: HighlightSet) -> SummaryDraft:
        return consolidate_external(doc, highlights, self.cfg, self.client)
