"""Highlight-driven summarization workbench.

Two-phase workflow: machine-assisted content selection over a source
document (salience suggestions plus free-form highlighting), then
consolidation of the highlighted content into an editable summary with
automatic summary-to-source alignment for review.
"""
from .align import (
    AlignmentConfig,
    AlignmentLink,
    AlignmentMap,
    LcsMatch,
    align,
    align_pair,
    alignment_to_wire,
    filter_decision,
    highlight_coverage_metric,
    lcs,
)
from .consolidate import (
    BaselineConsolidator,
    EmptyHighlightsError,
    ExternalConsolidator,
    GenerationConfig,
    GenerationProtocolError,
    GenerationTransportError,
    SummaryDraft,
    consolidate_baseline,
    consolidate_external,
)
from .highlights import (
    Highlight,
    HighlightSet,
    MarkupError,
    PendingSuggestion,
    UnknownSuggestionError,
    accept_suggestion,
    add_user_span,
    erase_span,
    from_markup,
    normalize,
    reject_suggestion,
    to_markup,
)
from .salience import CentroidScorer, HttpScorer, SalienceScorer, SuggestionSet, suggest
from .service import ServiceConfig, create_app
from .spans import Span, SpanError
from .textpipe import Document, Sentence, Token, TokenKind, analyze, lemma_sequence

__version__ = "0.1.0"

__all__ = [
    "AlignmentConfig",
    "AlignmentLink",
    "AlignmentMap",
    "BaselineConsolidator",
    "CentroidScorer",
    "Document",
    "EmptyHighlightsError",
    "ExternalConsolidator",
    "GenerationConfig",
    "GenerationProtocolError",
    "GenerationTransportError",
    "Highlight",
    "HighlightSet",
    "HttpScorer",
    "LcsMatch",
    "MarkupError",
    "PendingSuggestion",
    "SalienceScorer",
    "Sentence",
    "ServiceConfig",
    "Span",
    "SpanError",
    "SuggestionSet",
    "SummaryDraft",
    "Token",
    "TokenKind",
    "UnknownSuggestionError",
    "accept_suggestion",
    "add_user_span",
    "align",
    "align_pair",
    "alignment_to_wire",
    "analyze",
    "consolidate_baseline",
    "consolidate_external",
    "create_app",
    "erase_span",
    "filter_decision",
    "from_markup",
    "highlight_coverage_metric",
    "lcs",
    "lemma_sequence",
    "normalize",
    "reject_suggestion",
    "suggest",
    "to_markup",
]
