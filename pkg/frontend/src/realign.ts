/**
 * Debounced re-alignment while the summary is being edited.
 *
 * Contract: no request leaves less than `pauseMs` (default 1000) after the
 * latest keystroke; continuous typing issues nothing; a pause issues
 * exactly one request carrying the latest text. At most one request is in
 * flight; a response is applied only if the editor text has not changed
 * since the request was sent.
 */
import type { WireAlignment } from "./types.js";

export interface RealignResponse {
  revision: number;
  alignment: WireAlignment;
}

export interface RealignerOptions {
  send: (text: string) => Promise<RealignResponse>;
  apply: (response: RealignResponse, text: string) => void;
  pauseMs?: number;
  setTimeoutImpl?: (fn: () => void, ms: number) => ReturnType<typeof setTimeout>;
  clearTimeoutImpl?: (handle: ReturnType<typeof setTimeout>) => void;
}

export class DebouncedRealigner {
  private latestText: string | null = null;
  private inFlightText: string | null = null;
  private queued = false;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private readonly pauseMs: number;
  private readonly setTimeoutImpl: (fn: () => void, ms: number) => ReturnType<typeof setTimeout>;
  private readonly clearTimeoutImpl: (handle: ReturnType<typeof setTimeout>) => void;

  constructor(private readonly options: RealignerOptions) {
    this.pauseMs = options.pauseMs ?? 1000;
    this.setTimeoutImpl = options.setTimeoutImpl ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimeoutImpl = options.clearTimeoutImpl ?? ((handle) => clearTimeout(handle));
  }

  /** Call on every editor change, with the full current text. */
  notifyKeystroke(text: string): void {
    this.latestText = text;
    this.queued = false; // newer keystrokes supersede a queued send
    if (this.timer !== null) {
      this.clearTimeoutImpl(this.timer);
    }
    this.timer = this.setTimeoutImpl(() => this.fire(), this.pauseMs);
  }

  /** Cancel any scheduled request (e.g. when leaving the review view). */
  cancel(): void {
    if (this.timer !== null) {
      this.clearTimeoutImpl(this.timer);
      this.timer = null;
    }
    this.queued = false;
  }

  get inFlight(): boolean {
    return this.inFlightText !== null;
  }

  private fire(): void {
    this.timer = null;
    if (this.latestText === null) return;
    if (this.inFlightText !== null) {
      // the pause elapsed mid-request; send again once it settles
      this.queued = true;
      return;
    }
    this.send(this.latestText);
  }

  private send(text: string): void {
    this.inFlightText = text;
    this.options
      .send(text)
      .then((response) => this.settle(text, response), () => this.settle(text, null));
  }

  private settle(requested: string, response: RealignResponse | null): void {
    this.inFlightText = null;
    if (response !== null && this.latestText === requested) {
      this.options.apply(response, requested);
    }
    if (this.queued && this.latestText !== null && this.latestText !== requested) {
      this.queued = false;
      this.send(this.latestText);
    } else {
      this.queued = false;
    }
  }
}
