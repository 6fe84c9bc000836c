/** Thin client for the session service HTTP/WS API.
 *
 * Every number shown anywhere in the UI comes out of these responses;
 * the client performs no transformation beyond JSON parsing. The fetch
 * implementation is injectable so tests can intercept every request.
 */

import { Selection, selectionToQuery } from "./state";
import {
  BackendDescriptor,
  PersonTrack,
  ProgressEvent,
  SessionMeta,
  TickRecord,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, { signal });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = (await response.json()).detail ?? detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  async createSession(file: File | Blob, language: string): Promise<string> {
    const form = new FormData();
    form.append("file", file);
    form.append("language", language);
    const response = await this.fetchImpl(`${this.baseUrl}/api/sessions`, {
      method: "POST",
      body: form,
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = (await response.json()).detail ?? detail;
      } catch {
        /* ignore */
      }
      throw new ApiError(response.status, detail);
    }
    return ((await response.json()) as { session_id: string }).session_id;
  }

  getSession(sessionId: string): Promise<SessionMeta> {
    return this.get(`/api/sessions/${sessionId}`);
  }

  getPersons(sessionId: string): Promise<PersonTrack[]> {
    return this.get(`/api/sessions/${sessionId}/persons`);
  }

  getBackends(): Promise<BackendDescriptor[]> {
    return this.get(`/api/backends`);
  }

  timelineUrl(sessionId: string, selection: Selection): string {
    const params = selectionToQuery(selection);
    return `/api/sessions/${sessionId}/timeline?${params.toString()}`;
  }

  getTimeline(
    sessionId: string,
    selection: Selection,
    signal?: AbortSignal,
  ): Promise<TickRecord[]> {
    return this.get(this.timelineUrl(sessionId, selection), signal);
  }

  /** Subscribe to the progress stream; returns an unsubscribe handle. */
  subscribeEvents(
    sessionId: string,
    onEvent: (event: ProgressEvent) => void,
    onClose?: () => void,
  ): () => void {
    const protocol = location.protocol === "https:" ? "wss:" : "ws:";
    const ws = new WebSocket(
      `${protocol}//${location.host}/api/sessions/${sessionId}/events`,
    );
    ws.onmessage = (message) => {
      onEvent(JSON.parse(message.data) as ProgressEvent);
    };
    ws.onclose = () => onClose?.();
    return () => ws.close();
  }
}

/**
 * Cancel-on-supersede timeline fetcher: firing a new query aborts the
 * one in flight, so rapid selection toggling can never interleave
 * stale chart renders.
 */
export class TimelineQuery {
  private inFlight: AbortController | null = null;

  constructor(private client: ApiClient) {}

  async fetch(sessionId: string, selection: Selection): Promise<TickRecord[]> {
    this.inFlight?.abort();
    const controller = new AbortController();
    this.inFlight = controller;
    try {
      return await this.client.getTimeline(sessionId, selection, controller.signal);
    } finally {
      if (this.inFlight === controller) {
        this.inFlight = null;
      }
    }
  }
}
