/**
 * Thin typed client for the session REST API. `fetch` is injectable so
 * tests can stub the wire without a server.
 */
import type {
  HighlightOp,
  SessionState,
  WireAlignment,
  WireDocument,
  WireHighlights,
  WireSuggestion,
  WireSummary,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`API error ${status}: ${JSON.stringify(detail)}`);
  }
}

export interface CreateSessionResult {
  id: string;
  revision: number;
  document: WireDocument;
}

export interface SuggestionsResult {
  revision: number;
  suggestions: WireSuggestion[];
}

export interface MutateResult {
  revision: number;
  highlights: WireHighlights;
  stale: boolean;
}

export interface GenerateResult {
  revision: number;
  summary: WireSummary;
  alignment: WireAlignment;
  stale: boolean;
}

export interface RealignResult {
  revision: number;
  alignment: WireAlignment;
}

export interface AlignmentResult {
  revision: number;
  stale: boolean;
  alignment: WireAlignment | null;
}

export class SessionClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, payload);
    }
    return payload as T;
  }

  createSession(text: string): Promise<CreateSessionResult> {
    return this.request("POST", "/sessions", { text });
  }

  getSession(id: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${id}`);
  }

  requestSuggestions(id: string): Promise<SuggestionsResult> {
    return this.request("POST", `/sessions/${id}/suggestions`);
  }

  mutateHighlights(id: string, op: HighlightOp): Promise<MutateResult> {
    return this.request("POST", `/sessions/${id}/highlights`, op);
  }

  generateSummary(id: string, engine: "baseline" | "external"): Promise<GenerateResult> {
    return this.request("POST", `/sessions/${id}/summary`, { engine });
  }

  updateSummary(id: string, text: string): Promise<RealignResult> {
    return this.request("PUT", `/sessions/${id}/summary`, { text });
  }

  getAlignment(id: string): Promise<AlignmentResult> {
    return this.request("GET", `/sessions/${id}/alignment`);
  }
}
