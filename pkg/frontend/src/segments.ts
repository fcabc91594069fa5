/**
 * Span-to-segment computation for rendering.
 *
 * Server offsets count Unicode code points, so all slicing here goes
 * through a code-point array; indexing the JS string directly would drift
 * on any astral character.
 */
import type { WireSpan } from "./types.js";

export interface StyledSpan {
  span: WireSpan;
  className: string;
}

export interface Segment {
  /** Code-point offsets into the original text. */
  start: number;
  end: number;
  text: string;
  classes: string[];
}

export function codePoints(text: string): string[] {
  return Array.from(text);
}

/** Convert a UTF-16 offset (e.g. from a DOM selection) to code points. */
export function utf16ToCodePointOffset(text: string, utf16Offset: number): number {
  let points = 0;
  let units = 0;
  for (const ch of text) {
    if (units >= utf16Offset) break;
    units += ch.length;
    points += 1;
  }
  return points;
}

/**
 * Split `text` into contiguous segments, each carrying the class names of
 * every styled span covering it. Pure; order of `layers` decides class
 * order on ties.
 */
export function segmentText(text: string, layers: StyledSpan[]): Segment[] {
  const points = codePoints(text);
  const cuts = new Set<number>([0, points.length]);
  for (const layer of layers) {
    cuts.add(Math.max(0, Math.min(points.length, layer.span[0])));
    cuts.add(Math.max(0, Math.min(points.length, layer.span[1])));
  }
  const ordered = [...cuts].sort((a, b) => a - b);
  const segments: Segment[] = [];
  for (let i = 0; i + 1 < ordered.length; i++) {
    const start = ordered[i]!;
    const end = ordered[i + 1]!;
    if (start === end) continue;
    const classes: string[] = [];
    for (const layer of layers) {
      if (layer.span[0] <= start && end <= layer.span[1] && !classes.includes(layer.className)) {
        classes.push(layer.className);
      }
    }
    segments.push({ start, end, text: points.slice(start, end).join(""), classes });
  }
  return segments;
}

const HTML_ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"]/g, (ch) => HTML_ESCAPES[ch] ?? ch);
}

/** Deterministic HTML for a segment list; unstyled segments stay bare. */
export function segmentsToHtml(segments: Segment[]): string {
  return segments
    .map((segment) => {
      const escaped = escapeHtml(segment.text);
      if (segment.classes.length === 0) return escaped;
      return `<span class="${segment.classes.join(" ")}" data-start="${segment.start}" data-end="${segment.end}">${escaped}</span>`;
    })
    .join("");
}
