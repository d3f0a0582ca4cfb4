// Thin typed client for the /api/v1 REST surface. Every dashboard action
// maps to exactly one of these calls; no business logic lives client-side.

import type {
  ApiMatch,
  ApiPage,
  ApiParseResult,
  ApiPost,
  ApiSuggestion,
  MatchStatus,
  PostKind,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export interface PostQuery {
  kind?: PostKind;
  status?: string;
  resource?: string;
  q?: string;
  limit?: number;
  offset?: number;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(0, err instanceof Error ? err.message : "network failure");
    }
    const body = await response.text();
    if (!response.ok) {
      let detail = body;
      try {
        detail = JSON.parse(body).detail ?? body;
      } catch {
        // plain-text error body
      }
      throw new ApiError(response.status, String(detail));
    }
    return JSON.parse(body) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  listPosts(query: PostQuery = {}): Promise<ApiPage<ApiPost>> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(query)) {
      if (value !== undefined && value !== "") params.set(key, String(value));
    }
    const qs = params.toString();
    return this.request(`/posts${qs ? `?${qs}` : ""}`);
  }

  getPost(id: string): Promise<ApiPost> {
    return this.request(`/posts/${encodeURIComponent(id)}`);
  }

  suggestions(id: string, k = 20): Promise<{ items: ApiSuggestion[] }> {
    return this.request(`/posts/${encodeURIComponent(id)}/suggestions?k=${k}`);
  }

  listMatches(status?: MatchStatus): Promise<ApiPage<ApiMatch>> {
    return this.request(`/matches${status ? `?status=${status}` : ""}`);
  }

  createMatch(needId: string, availId: string): Promise<ApiMatch> {
    return this.post("/matches", { need_id: needId, avail_id: availId });
  }

  completeMatch(matchId: string): Promise<ApiMatch> {
    return this.request(`/matches/${encodeURIComponent(matchId)}/complete`, { method: "POST" });
  }

  discardMatch(matchId: string): Promise<{ revision: number }> {
    return this.request(`/matches/${encodeURIComponent(matchId)}`, { method: "DELETE" });
  }

  parse(text: string): Promise<ApiParseResult> {
    return this.post("/parse", { text });
  }

  createPost(text: string, overrides: Record<string, unknown> = {}): Promise<ApiPost> {
    return this.post("/posts", { text, overrides });
  }
}
