/** Thin fetch wrappers over the dpkit server endpoints. */

import type { AnswerPayload, FrameReply, QuestionKind, SessionDoc, TraceDoc } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, (body as { error?: string }).error ?? response.statusText);
    }
    return body as T;
  }

  trace(): Promise<TraceDoc> {
    return this.request<TraceDoc>("/api/trace");
  }

  frame(t: number): Promise<FrameReply> {
    return this.request<FrameReply>(`/api/frames/${t}`);
  }

  startSession(enabled: QuestionKind[], startT: number): Promise<SessionDoc> {
    return this.request<SessionDoc>("/api/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ enabled, start_t: startT }),
    });
  }

  postAnswer(sessionId: string, payload: AnswerPayload): Promise<SessionDoc> {
    return this.request<SessionDoc>(`/api/sessions/${sessionId}/answers`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }
}
