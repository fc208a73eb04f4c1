/**
 * Thin fetch wrapper over the graphtrail HTTP API.
 *
 * Unwraps the response envelope and throws ApiError with the server's error
 * code on any failure.
 */

import {
  BookmarkMeta,
  BookmarkPayload,
  CreateSessionRequest,
  DatasetInfo,
  ElementClass,
  ExpansionRequest,
  FetchResult,
  PauseEvent,
  RestoreResult,
  SessionStatus,
  SubgraphDelta,
  WireError,
  requestBody,
} from './protocol';

export class ApiError extends Error {
  readonly code: string;

  constructor(error: WireError, readonly status: number) {
    super(error.message);
    this.code = error.code;
  }
}

interface Envelope<T> {
  ok: boolean;
  data?: T;
  error?: WireError;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: body !== undefined ? { 'content-type': 'application/json' } : undefined,
      body: body !== undefined ? requestBody(body) : undefined,
    });
    const envelope = (await response.json()) as Envelope<T>;
    if (!envelope.ok || envelope.data === undefined) {
      throw new ApiError(envelope.error ?? { code: 'io_error', message: 'malformed envelope' }, response.status);
    }
    return envelope.data;
  }

  listDatasets(): Promise<DatasetInfo[]> {
    return this.call('GET', '/api/datasets');
  }

  createSession(request: CreateSessionRequest): Promise<{ session_id: string }> {
    return this.call('POST', '/api/sessions', request);
  }

  continueSession(sessionId: string): Promise<PauseEvent> {
    return this.call('POST', `/api/sessions/${sessionId}/continue`);
  }

  stopSession(sessionId: string): Promise<{ status: string }> {
    return this.call('POST', `/api/sessions/${sessionId}/stop`);
  }

  sessionStatus(sessionId: string): Promise<SessionStatus> {
    return this.call('GET', `/api/sessions/${sessionId}`);
  }

  expand(sessionId: string, request: ExpansionRequest): Promise<SubgraphDelta> {
    return this.call('POST', `/api/sessions/${sessionId}/expand`, request);
  }

  estimate(sessionId: string, request: ExpansionRequest): Promise<{ count: number }> {
    return this.call('POST', `/api/sessions/${sessionId}/estimate`, request);
  }

  fetchAttributes(
    sessionId: string,
    elements: { class: ElementClass; id: number }[],
    names: string[],
  ): Promise<FetchResult> {
    return this.call('POST', `/api/sessions/${sessionId}/attributes`, { elements, names });
  }

  edgeEndpoints(sessionId: string, edgeId: number): Promise<{
    source: { id: number; type: string };
    target: { id: number; type: string };
  }> {
    return this.call('POST', `/api/sessions/${sessionId}/edge/${edgeId}/endpoints`);
  }

  storeBookmark(sessionId: string, payload: BookmarkPayload, description: string | null): Promise<BookmarkMeta> {
    return this.call('POST', `/api/sessions/${sessionId}/bookmarks`, { payload, description });
  }

  listBookmarks(sessionId?: string): Promise<BookmarkMeta[]> {
    const query = sessionId ? `?session=${encodeURIComponent(sessionId)}` : '';
    return this.call('GET', `/api/bookmarks${query}`);
  }

  restoreBookmark(sessionId: string, bookmarkId: string): Promise<RestoreResult> {
    return this.call('POST', `/api/sessions/${sessionId}/bookmarks/${bookmarkId}/restore`);
  }
}
