/**
 * Wire types for the session service.
 *
 * All offsets are Unicode scalar values (code points), NOT UTF-16 code
 * units; convert before indexing into JavaScript strings.
 */

/** [start, end), half-open, in code points. */
export type WireSpan = [number, number];

export type TokenKind = "content" | "stopword" | "punctuation";

export interface WireToken {
  surface: string;
  lemma: string;
  span: WireSpan;
  kind: TokenKind;
}

export interface WireSentence {
  index: number;
  span: WireSpan;
  tokens: WireToken[];
}

export interface WireDocument {
  id: string;
  text: string;
  sentences: WireSentence[];
}

export type HighlightOrigin = "user" | "accepted_suggestion";

export interface WireHighlight {
  span: WireSpan;
  origin: HighlightOrigin;
}

export interface WireSuggestion {
  id: string;
  span: WireSpan;
  score: number;
}

export interface WireHighlights {
  active: WireHighlight[];
  pending: WireSuggestion[];
}

export interface WireLink {
  source_sentence: number;
  summary_token_spans: WireSpan[];
  source_token_spans: WireSpan[];
  retained_by: "content_count" | "highlight_coverage";
  iteration: number;
}

export interface WireAlignmentSentence {
  index: number;
  span: WireSpan;
  links: WireLink[];
}

export interface WireAlignment {
  summary_sentences: WireAlignmentSentence[];
}

export interface WireSummary {
  text: string;
  provenance: "baseline" | "external_model" | "user_edited";
}

export interface SessionState {
  id: string;
  revision: number;
  created_at: string;
  updated_at: string;
  stale: boolean;
  document: WireDocument;
  highlights: WireHighlights;
  summary: WireSummary | null;
  alignment: WireAlignment | null;
}

export type HighlightOp =
  | { op: "add"; span: WireSpan; revision?: number }
  | { op: "erase"; span: WireSpan; revision?: number }
  | { op: "accept"; suggestion_id: string; revision?: number }
  | { op: "reject"; suggestion_id: string; revision?: number };
