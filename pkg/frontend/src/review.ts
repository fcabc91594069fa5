/**
 * Review window: generated summary and highlighted source side by side.
 *
 * Hovering a summary sentence emboldens that sentence and the union of its
 * aligned source tokens; clicking a summary sentence gives its aligned
 * text a persistent background that later hovers do not disturb. A
 * non-contiguous match is emphasized per matched token, never as one
 * covering span. An alignment whose revision lags the session is rendered
 * with a stale flag.
 */
import { Segment, StyledSpan, segmentText, segmentsToHtml } from "./segments.js";
import type { WireAlignment, WireHighlights, WireSpan } from "./types.js";

export interface ReviewViewState {
  sourceText: string;
  sourceHighlights: WireHighlights;
  summaryText: string;
  alignment: WireAlignment | null;
  /** Revision the alignment snapshot was computed at. */
  alignmentRevision: number;
  /** Latest session revision known to the client. */
  sessionRevision: number;
  hoveredSentence: number | null;
  persistedSentences: number[];
}

export const SOURCE_HIGHLIGHT_CLASS = "hl-active";
export const EMBOLDEN_CLASS = "aligned-bold";
export const PERSIST_CLASS = "aligned-persist";
export const SUMMARY_SENTENCE_CLASS = "summary-sentence";

export function initialReviewState(
  sourceText: string,
  sourceHighlights: WireHighlights,
  summaryText: string,
  alignment: WireAlignment | null,
  revision: number,
): ReviewViewState {
  return {
    sourceText,
    sourceHighlights,
    summaryText,
    alignment,
    alignmentRevision: revision,
    sessionRevision: revision,
    hoveredSentence: null,
    persistedSentences: [],
  };
}

export function hoverSentence(state: ReviewViewState, index: number | null): ReviewViewState {
  return { ...state, hoveredSentence: index };
}

/** Click toggles the persistent emphasis for one summary sentence. */
export function togglePersist(state: ReviewViewState, index: number): ReviewViewState {
  const persisted = state.persistedSentences.includes(index)
    ? state.persistedSentences.filter((i) => i !== index)
    : [...state.persistedSentences, index].sort((a, b) => a - b);
  return { ...state, persistedSentences: persisted };
}

export function applyRealignment(
  state: ReviewViewState,
  summaryText: string,
  alignment: WireAlignment,
  revision: number,
): ReviewViewState {
  return {
    ...state,
    summaryText,
    alignment,
    alignmentRevision: revision,
    sessionRevision: revision,
  };
}

export function noteEdit(state: ReviewViewState, summaryText: string): ReviewViewState {
  return { ...state, summaryText };
}

export function isAlignmentStale(state: ReviewViewState): boolean {
  return state.alignment === null || state.alignmentRevision !== state.sessionRevision;
}

/** Union of aligned source token spans for one summary sentence. */
export function alignedSourceSpans(alignment: WireAlignment | null, sentence: number): WireSpan[] {
  if (alignment === null) return [];
  const record = alignment.summary_sentences.find((s) => s.index === sentence);
  if (record === undefined) return [];
  const seen = new Set<string>();
  const spans: WireSpan[] = [];
  for (const link of record.links) {
    for (const span of link.source_token_spans) {
      const key = `${span[0]}:${span[1]}`;
      if (!seen.has(key)) {
        seen.add(key);
        spans.push(span);
      }
    }
  }
  return spans.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
}

export interface ReviewRender {
  summarySegments: Segment[];
  sourceSegments: Segment[];
  stale: boolean;
}

export function renderReview(state: ReviewViewState): ReviewRender {
  const summaryLayers: StyledSpan[] = [];
  const sourceLayers: StyledSpan[] = [];

  for (const highlight of state.sourceHighlights.active) {
    sourceLayers.push({ span: highlight.span, className: SOURCE_HIGHLIGHT_CLASS });
  }

  if (state.alignment !== null) {
    for (const sentence of state.alignment.summary_sentences) {
      summaryLayers.push({ span: sentence.span, className: SUMMARY_SENTENCE_CLASS });
    }
  }

  // persistent (clicked) emphasis first: it survives any hover
  for (const index of state.persistedSentences) {
    const record = state.alignment?.summary_sentences.find((s) => s.index === index);
    if (record !== undefined) {
      summaryLayers.push({ span: record.span, className: PERSIST_CLASS });
    }
    for (const span of alignedSourceSpans(state.alignment, index)) {
      sourceLayers.push({ span, className: PERSIST_CLASS });
    }
  }

  if (state.hoveredSentence !== null) {
    const record = state.alignment?.summary_sentences.find(
      (s) => s.index === state.hoveredSentence,
    );
    if (record !== undefined) {
      summaryLayers.push({ span: record.span, className: EMBOLDEN_CLASS });
    }
    for (const span of alignedSourceSpans(state.alignment, state.hoveredSentence)) {
      sourceLayers.push({ span, className: EMBOLDEN_CLASS });
    }
  }

  return {
    summarySegments: segmentText(state.summaryText, summaryLayers),
    sourceSegments: segmentText(state.sourceText, sourceLayers),
    stale: isAlignmentStale(state),
  };
}

export function reviewHtml(state: ReviewViewState): string {
  const render = renderReview(state);
  const staleBadge = render.stale ? `<div class="stale-flag">alignment out of date</div>` : "";
  return (
    `<div class="review-view">` +
    staleBadge +
    `<div class="summary-pane">${segmentsToHtml(render.summarySegments)}</div>` +
    `<div class="source-pane">${segmentsToHtml(render.sourceSegments)}</div>` +
    `</div>`
  );
}
