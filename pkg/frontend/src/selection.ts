/**
 * Content-selection window: the document with active highlights, pale
 * pending suggestions, the highlight/erase tool switch, and accept/reject
 * controls on the hovered suggestion.
 *
 * Rendering is a pure function of server state plus local hover/tool
 * state; every interaction is expressed as a server mutation the caller
 * performs through the SessionClient.
 */
import { Segment, StyledSpan, segmentText, segmentsToHtml } from "./segments.js";
import type { WireHighlights, WireSpan, WireSuggestion } from "./types.js";

export type SelectionTool = "highlight" | "erase";

export interface SelectionViewState {
  documentText: string;
  highlights: WireHighlights;
  tool: SelectionTool;
  hoveredSuggestionId: string | null;
}

export interface SuggestionControls {
  suggestionId: string;
  span: WireSpan;
}

export interface SelectionRender {
  segments: Segment[];
  /** ✓ / ✗ controls for the hovered suggestion, if any. */
  controls: SuggestionControls | null;
  tool: SelectionTool;
}

export const ACTIVE_CLASS = "hl-active";
export const PENDING_CLASS = "hl-pending";
export const PENDING_HOVER_CLASS = "hl-pending-hover";

export function initialSelectionState(documentText: string, highlights: WireHighlights): SelectionViewState {
  return { documentText, highlights, tool: "highlight", hoveredSuggestionId: null };
}

export function withTool(state: SelectionViewState, tool: SelectionTool): SelectionViewState {
  return { ...state, tool };
}

export function withHoveredSuggestion(
  state: SelectionViewState,
  suggestionId: string | null,
): SelectionViewState {
  return { ...state, hoveredSuggestionId: suggestionId };
}

export function withHighlights(state: SelectionViewState, highlights: WireHighlights): SelectionViewState {
  const stillPending =
    state.hoveredSuggestionId !== null &&
    highlights.pending.some((p) => p.id === state.hoveredSuggestionId);
  return {
    ...state,
    highlights,
    hoveredSuggestionId: stillPending ? state.hoveredSuggestionId : null,
  };
}

function hoveredSuggestion(state: SelectionViewState): WireSuggestion | null {
  if (state.hoveredSuggestionId === null) return null;
  return state.highlights.pending.find((p) => p.id === state.hoveredSuggestionId) ?? null;
}

export function renderSelection(state: SelectionViewState): SelectionRender {
  const layers: StyledSpan[] = [];
  for (const highlight of state.highlights.active) {
    layers.push({ span: highlight.span, className: ACTIVE_CLASS });
  }
  for (const suggestion of state.highlights.pending) {
    layers.push({ span: suggestion.span, className: PENDING_CLASS });
  }
  const hovered = hoveredSuggestion(state);
  if (hovered !== null) {
    layers.push({ span: hovered.span, className: PENDING_HOVER_CLASS });
  }
  return {
    segments: segmentText(state.documentText, layers),
    controls: hovered === null ? null : { suggestionId: hovered.id, span: hovered.span },
    tool: state.tool,
  };
}

export function selectionHtml(state: SelectionViewState): string {
  const render = renderSelection(state);
  const body = segmentsToHtml(render.segments);
  const controls =
    render.controls === null
      ? ""
      : `<span class="suggestion-controls" data-suggestion="${render.controls.suggestionId}">` +
        `<button class="accept" aria-label="accept suggestion">✓</button>` +
        `<button class="reject" aria-label="reject suggestion">✗</button></span>`;
  return `<div class="selection-view" data-tool="${render.tool}">${body}${controls}</div>`;
}

/** The server mutation a drag maps to under the current tool. */
export function dragMutation(
  state: SelectionViewState,
  span: WireSpan,
  revision: number,
): { op: "add" | "erase"; span: WireSpan; revision: number } {
  return { op: state.tool === "erase" ? "erase" : "add", span, revision };
}
