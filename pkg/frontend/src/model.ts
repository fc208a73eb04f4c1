/**
 * Headless application state: one session, the displayed view, the bookmark
 * strip. The DOM layer renders this and nothing else, which keeps the whole
 * walkthrough scriptable in tests against a live service.
 */

import { ApiClient } from './client';
import { controlState, ControlState, Selection, Status } from './controls';
import { buildDriverRequest, DriverFormState } from './form';
import {
  BookmarkMeta,
  Direction,
  ElementClass,
  PauseEvent,
  Predicate,
  RestoreResult,
  SubgraphDelta,
} from './protocol';
import { ClientView } from './view';

export interface ExpandOptions {
  direction: Direction;
  edgeFilter?: Predicate;
  vertexFilter?: Predicate;
  limit?: number;
}

export class ExplorerApp {
  sessionId: string | null = null;
  status: Status = 'none';
  view = new ClientView();
  selection: Selection | null = null;
  /** Chronological bookmark strip, mirroring the server's listing order. */
  bookmarks: BookmarkMeta[] = [];
  lastEvent: PauseEvent | null = null;
  warnings: string[] = [];
  private pending = false;

  constructor(readonly api: ApiClient) {}

  controls(): ControlState {
    return controlState(this.status, this.selection, this.pending);
  }

  select(kind: ElementClass, id: number): void {
    this.selection = { kind, id };
  }

  /** Validate the form, submit the driver query, reset the canvas. */
  async startSession(form: DriverFormState): Promise<string[]> {
    const built = buildDriverRequest(form);
    if (!built.ok) {
      return built.errors;
    }
    await this.exclusive(async () => {
      const { session_id } = await this.api.createSession(built.request);
      this.sessionId = session_id;
      this.status = 'created';
      this.view = new ClientView();
      this.selection = null;
      this.lastEvent = null;
      await this.refreshBookmarks();
    });
    return [];
  }

  async continueQuery(): Promise<PauseEvent> {
    return this.exclusive(async () => {
      const event = await this.api.continueSession(this.requireSession());
      this.lastEvent = event;
      if (event.kind === 'match') {
        this.status = 'paused';
        this.view.applyMatch(event);
        if (event.class === 'vertex') {
          this.selection = { kind: 'vertex', id: event.id };
        }
      } else {
        this.status = 'done';
      }
      return event;
    });
  }

  async stopQuery(): Promise<void> {
    await this.exclusive(async () => {
      await this.api.stopSession(this.requireSession());
      this.status = 'stopped';
    });
  }

  /** Exact result-size preview shown in the expansion dialog. */
  async estimateExpansion(vertex: number, options: ExpandOptions): Promise<number> {
    const { count } = await this.api.estimate(this.requireSession(), {
      vertex,
      direction: options.direction,
      ...(options.edgeFilter ? { edge_filter: options.edgeFilter } : {}),
      ...(options.vertexFilter ? { vertex_filter: options.vertexFilter } : {}),
    });
    return count;
  }

  async expand(vertex: number, options: ExpandOptions): Promise<SubgraphDelta> {
    return this.exclusive(async () => {
      const delta = await this.api.expand(this.requireSession(), {
        vertex,
        direction: options.direction,
        ...(options.edgeFilter ? { edge_filter: options.edgeFilter } : {}),
        ...(options.vertexFilter ? { vertex_filter: options.vertexFilter } : {}),
        ...(options.limit !== undefined ? { limit: options.limit } : {}),
      });
      this.view.applyDelta(delta, vertex);
      return delta;
    });
  }

  async fetchAttributes(elements: { class: ElementClass; id: number }[], names: string[]): Promise<void> {
    await this.exclusive(async () => {
      const result = await this.api.fetchAttributes(this.requireSession(), elements, names);
      this.view.applyFetch(result);
      for (const warning of result.warnings) {
        this.warnings.push(`${warning.class} ${warning.id}: ${warning.reason}`);
      }
    });
  }

  /** Bookmark the current view; the strip refreshes from the server. */
  async bookmark(description: string | null): Promise<BookmarkMeta> {
    return this.exclusive(async () => {
      const meta = await this.api.storeBookmark(this.requireSession(), this.view.toPayload(), description);
      await this.refreshBookmarks();
      return meta;
    });
  }

  async restore(bookmarkId: string): Promise<RestoreResult> {
    return this.exclusive(async () => {
      const result = await this.api.restoreBookmark(this.requireSession(), bookmarkId);
      this.view.applyPayload(result.payload);
      for (const stale of result.staleness) {
        this.warnings.push(`${stale.class} ${stale.id}: ${stale.reason}`);
      }
      return result;
    });
  }

  async refreshBookmarks(): Promise<void> {
    if (this.sessionId) {
      this.bookmarks = await this.api.listBookmarks(this.sessionId);
    }
  }

  private requireSession(): string {
    if (!this.sessionId) {
      throw new Error('no session bound');
    }
    return this.sessionId;
  }

  private async exclusive<T>(work: () => Promise<T>): Promise<T> {
    if (this.pending) {
      throw new Error('a request is already in flight');
    }
    this.pending = true;
    try {
      return await work();
    } finally {
      this.pending = false;
    }
  }
}
