/**
 * Browser wiring: upload box, content-selection window, review window.
 * All domain state lives on the server; this file only routes DOM events
 * into SessionClient calls and repaints from the responses.
 */
import { SessionClient } from "./client.js";
import { DebouncedRealigner } from "./realign.js";
import {
  applyRealignment,
  hoverSentence,
  initialReviewState,
  noteEdit,
  reviewHtml,
  ReviewViewState,
  togglePersist,
} from "./review.js";
import { utf16ToCodePointOffset } from "./segments.js";
import {
  dragMutation,
  initialSelectionState,
  selectionHtml,
  SelectionViewState,
  withHighlights,
  withHoveredSuggestion,
  withTool,
} from "./selection.js";
import type { WireSpan } from "./types.js";

interface AppState {
  sessionId: string | null;
  revision: number;
  phase: "upload" | "selection" | "review";
  selection: SelectionViewState | null;
  review: ReviewViewState | null;
}

export function mountApp(root: HTMLElement, baseUrl: string): void {
  const client = new SessionClient(baseUrl);
  const state: AppState = {
    sessionId: null,
    revision: 0,
    phase: "upload",
    selection: null,
    review: null,
  };
  let documentText = "";

  const realigner = new DebouncedRealigner({
    send: (text) => client.updateSummary(state.sessionId!, text),
    apply: (response, text) => {
      if (state.review !== null) {
        state.revision = response.revision;
        state.review = applyRealignment(state.review, text, response.alignment, response.revision);
        paintReview();
      }
    },
  });

  function paint(): void {
    if (state.phase === "upload") paintUpload();
    else if (state.phase === "selection") paintSelection();
    else paintReview();
  }

  function paintUpload(): void {
    root.innerHTML =
      `<div class="upload-view"><textarea id="doc-input" rows="12" ` +
      `placeholder="Paste a document to summarize"></textarea>` +
      `<button id="start">Start</button></div>`;
    root.querySelector<HTMLButtonElement>("#start")!.addEventListener("click", async () => {
      const text = root.querySelector<HTMLTextAreaElement>("#doc-input")!.value;
      if (!text.trim()) return;
      const created = await client.createSession(text);
      state.sessionId = created.id;
      state.revision = created.revision;
      documentText = created.document.text;
      state.selection = initialSelectionState(documentText, { active: [], pending: [] });
      state.phase = "selection";
      paint();
    });
  }

  function paintSelection(): void {
    const selection = state.selection!;
    root.innerHTML =
      `<div class="toolbar">` +
      `<button id="wand" title="suggest content">✨</button>` +
      `<button id="tool-toggle">${selection.tool === "erase" ? "switch to highlight" : "switch to erase"}</button>` +
      `<button id="generate">Generate summary</button>` +
      `</div>` +
      selectionHtml(selection);
    const view = root.querySelector<HTMLElement>(".selection-view")!;

    root.querySelector<HTMLButtonElement>("#wand")!.addEventListener("click", async () => {
      const got = await client.requestSuggestions(state.sessionId!);
      state.revision = got.revision;
      const session = await client.getSession(state.sessionId!);
      state.selection = withHighlights(selection, session.highlights);
      paintSelection();
    });

    root.querySelector<HTMLButtonElement>("#tool-toggle")!.addEventListener("click", () => {
      state.selection = withTool(selection, selection.tool === "erase" ? "highlight" : "erase");
      paintSelection();
    });

    root.querySelector<HTMLButtonElement>("#generate")!.addEventListener("click", async () => {
      const got = await client.generateSummary(state.sessionId!, "baseline");
      state.revision = got.revision;
      const session = await client.getSession(state.sessionId!);
      state.review = initialReviewState(
        documentText,
        session.highlights,
        got.summary.text,
        got.alignment,
        got.revision,
      );
      state.phase = "review";
      paint();
    });

    view.addEventListener("mouseup", async () => {
      const picked = window.getSelection();
      if (picked === null || picked.isCollapsed) return;
      const range = picked.getRangeAt(0);
      const textOnly = view.textContent ?? "";
      const preRange = range.cloneRange();
      preRange.selectNodeContents(view);
      preRange.setEnd(range.startContainer, range.startOffset);
      const startUnits = preRange.toString().length;
      const lengthUnits = range.toString().length;
      if (lengthUnits === 0) return;
      const span: WireSpan = [
        utf16ToCodePointOffset(textOnly, startUnits),
        utf16ToCodePointOffset(textOnly, startUnits + lengthUnits),
      ];
      picked.removeAllRanges();
      const got = await client.mutateHighlights(
        state.sessionId!,
        dragMutation(selection, span, state.revision),
      );
      state.revision = got.revision;
      state.selection = withHighlights(selection, got.highlights);
      paintSelection();
    });

    view.addEventListener("mouseover", (event) => {
      const target = event.target as HTMLElement;
      const pendingSpan = target.closest<HTMLElement>(".hl-pending");
      if (pendingSpan === null) {
        if (selection.hoveredSuggestionId !== null) {
          state.selection = withHoveredSuggestion(selection, null);
          paintSelection();
        }
        return;
      }
      const start = Number(pendingSpan.dataset.start);
      const hovered = selection.highlights.pending.find(
        (p) => p.span[0] <= start && start < p.span[1],
      );
      if (hovered !== undefined && hovered.id !== selection.hoveredSuggestionId) {
        state.selection = withHoveredSuggestion(selection, hovered.id);
        paintSelection();
      }
    });

    root.querySelector(".suggestion-controls")?.addEventListener("click", async (event) => {
      const button = (event.target as HTMLElement).closest("button");
      const suggestionId = selection.hoveredSuggestionId;
      if (button === null || suggestionId === null) return;
      const got = await client.mutateHighlights(state.sessionId!, {
        op: button.classList.contains("accept") ? "accept" : "reject",
        suggestion_id: suggestionId,
        revision: state.revision,
      });
      state.revision = got.revision;
      state.selection = withHighlights(selection, got.highlights);
      paintSelection();
    });
  }

  function paintReview(): void {
    const review = state.review!;
    root.innerHTML =
      `<div class="toolbar"><button id="back">Back to selection</button></div>` +
      reviewHtml(review) +
      `<textarea id="summary-editor" rows="8"></textarea>`;
    const editor = root.querySelector<HTMLTextAreaElement>("#summary-editor")!;
    editor.value = review.summaryText;

    editor.addEventListener("input", () => {
      state.review = noteEdit(state.review!, editor.value);
      realigner.notifyKeystroke(editor.value);
    });

    root.querySelector<HTMLButtonElement>("#back")!.addEventListener("click", () => {
      realigner.cancel();
      state.phase = "selection";
      paint();
    });

    root.querySelector<HTMLElement>(".summary-pane")!.addEventListener("mouseover", (event) => {
      const index = sentenceIndexAt(event.target as HTMLElement);
      if (index !== state.review!.hoveredSentence) {
        state.review = hoverSentence(state.review!, index);
        paintReview();
      }
    });

    root.querySelector<HTMLElement>(".summary-pane")!.addEventListener("click", (event) => {
      const index = sentenceIndexAt(event.target as HTMLElement);
      if (index !== null) {
        state.review = togglePersist(state.review!, index);
        paintReview();
      }
    });
  }

  function sentenceIndexAt(target: HTMLElement): number | null {
    const span = target.closest<HTMLElement>(".summary-sentence");
    if (span === null || state.review?.alignment == null) return null;
    const start = Number(span.dataset.start);
    const record = state.review.alignment.summary_sentences.find(
      (s) => s.span[0] <= start && start < s.span[1],
    );
    return record?.index ?? null;
  }

  paint();
}
