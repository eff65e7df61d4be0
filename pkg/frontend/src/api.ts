// Typed client for the v1 API. fetch is injected so tests can replay
// recorded responses without a server.

import type { DatabaseDoc, HistoryDoc, QueryResponse, SessionInfo, TurnDoc } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  kind: string;
  status: number;

  constructor(kind: string, message: string, status: number) {
    super(message);
    this.name = "ApiError";
    this.kind = kind;
    this.status = status;
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  try {
    const body = await response.json();
    const err = body?.error;
    if (err && typeof err.kind === "string") {
      return new ApiError(err.kind, String(err.message ?? err.kind), response.status);
    }
  } catch {
    // fall through to the generic error
  }
  return new ApiError("http-error", `request failed with status ${response.status}`, response.status);
}

export class ApiClient {
  private fetchImpl: FetchLike;

  constructor(private baseUrl: string = "", fetchImpl?: FetchLike) {
    this.fetchImpl = fetchImpl ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(`${this.baseUrl}/v1${path}`, init);
    if (!response.ok) {
      throw await toApiError(response);
    }
    return (await response.json()) as T;
  }

  getTracklets(videoId: string): Promise<DatabaseDoc> {
    return this.request("GET", `/videos/${encodeURIComponent(videoId)}/tracklets`);
  }

  runQuery(videoId: string, query: string): Promise<QueryResponse> {
    return this.request("POST", `/videos/${encodeURIComponent(videoId)}/query`, { query });
  }

  createSession(videoId: string): Promise<SessionInfo> {
    return this.request("POST", "/sessions", { video_id: videoId });
  }

  sendMessage(sessionId: string, question: string): Promise<TurnDoc> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/messages`, { question });
  }

  getHistory(sessionId: string): Promise<HistoryDoc> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/history`);
  }
}
