/** Thin session-scoped client for the engine's HTTP API.

All state changes go through a single queue so at most one mutation is in
flight per session; reads bypass the queue. Every request is appended to
`log`, which the tests use to count round trips.
*/

import type {
  DocJson,
  EncodingJson,
  FiltersResponse,
  OverviewPayload,
  RecommendationJson,
  SessionSummary,
  ViewPayloadJson,
} from "./state.js";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface RequestLogEntry {
  method: string;
  path: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly log: RequestLogEntry[] = [];
  private queue: Promise<unknown> = Promise.resolve();
  private readonly fetchFn: FetchLike;

  constructor(
    readonly base: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    this.log.push({ method, path });
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    const text = await response.text();
    let data: unknown = null;
    if (text) {
      try {
        data = JSON.parse(text);
      } catch {
        data = null;
      }
    }
    if (!response.ok) {
      const body = data as { code?: unknown; message?: unknown } | null;
      const code = body && typeof body.code === "string" ? body.code : "HttpError";
      const message = body && typeof body.message === "string" ? body.message : text;
      throw new ApiError(code, message, response.status);
    }
    return data as T;
  }

  /** Serialize mutations; a failed one does not poison the queue. */
  private mutate<T>(method: string, path: string, body?: unknown): Promise<T> {
    const next = this.queue.then(() => this.request<T>(method, path, body));
    this.queue = next.catch(() => undefined);
    return next;
  }

  /** Resolves once every queued mutation has settled. */
  idle(): Promise<void> {
    return this.queue.then(() => undefined);
  }

  createSession(csv: string, sidecar?: unknown): Promise<SessionSummary> {
    const body: Record<string, unknown> = { csv };
    if (sidecar !== undefined) body.sidecar = sidecar;
    return this.mutate("POST", "/session", body);
  }

  overview(id: string): Promise<OverviewPayload> {
    return this.request("GET", `/session/${id}/overview`);
  }

  setEncoding(id: string, encoding: Partial<EncodingJson>): Promise<OverviewPayload> {
    return this.mutate("PUT", `/session/${id}/encoding`, encoding);
  }

  setTasks(id: string, tasks: string[]): Promise<RecommendationJson> {
    return this.mutate("PUT", `/session/${id}/tasks`, { tasks });
  }

  setFilters(
    id: string,
    delta: {
      ranges?: Record<string, [number, number] | null>;
      selected_run?: number | null;
      clear?: boolean;
    },
  ): Promise<FiltersResponse> {
    return this.mutate("PUT", `/session/${id}/filters`, delta);
  }

  setMode(id: string, mode: "edit" | "analyze"): Promise<{ mode: "edit" | "analyze" }> {
    return this.mutate("PUT", `/session/${id}/mode`, { mode });
  }

  addView(
    id: string,
    body: { cell?: unknown; external?: unknown; rect?: unknown },
  ): Promise<DocJson> {
    return this.mutate("POST", `/session/${id}/dashboard/views`, body);
  }

  patchView(id: string, viewId: number, patch: Record<string, unknown>): Promise<DocJson> {
    return this.mutate("PATCH", `/session/${id}/dashboard/views/${viewId}`, patch);
  }

  deleteView(id: string, viewId: number): Promise<DocJson> {
    return this.mutate("DELETE", `/session/${id}/dashboard/views/${viewId}`);
  }

  exportDashboard(id: string): Promise<DocJson> {
    return this.request("GET", `/session/${id}/dashboard/export`);
  }

  /** Count of logged requests matching a method and path fragment. */
  countRequests(method: string, pathPart: string): number {
    return this.log.filter((e) => e.method === method && e.path.includes(pathPart)).length;
  }
}

export function filterViewPayloads(response: FiltersResponse): Map<number, ViewPayloadJson> {
  const map = new Map<number, ViewPayloadJson>();
  for (const view of response.views) map.set(view.view_id, view);
  return map;
}
