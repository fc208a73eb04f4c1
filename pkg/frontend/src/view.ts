/**
 * The displayed excerpt of the graph, grown by set-union merging.
 *
 * Everything the session has surfaced — breakpoint matches, expansion
 * deltas, restored bookmark payloads — lands here exactly once. Layout is
 * incremental and deterministic: a vertex gets a position the first time it
 * appears (spiralling out from the vertex it was expanded from, or from the
 * canvas center) and that position is never recomputed, so continuing a
 * driver query never rearranges what the user already arranged in their
 * head.
 */

import {
  AttrMap,
  BookmarkPayload,
  ElementClass,
  FetchResult,
  PauseEvent,
  SubgraphDelta,
} from './protocol';

export interface Position {
  x: number;
  y: number;
}

const GOLDEN_ANGLE = Math.PI * (3 - Math.sqrt(5));

export const CANVAS_CENTER: Position = { x: 480, y: 320 };

export class ClientView {
  readonly vertices = new Map<number, string>();
  readonly edges = new Map<number, { type: string; source: number; target: number }>();
  readonly attrs = new Map<string, AttrMap>();
  readonly positions = new Map<number, Position>();
  private placedAround = new Map<number | 'center', number>();

  static attrKey(elementClass: ElementClass, id: number): string {
    return `${elementClass}:${id}`;
  }

  /** A breakpoint match appears on the canvas as a lone new vertex. */
  applyMatch(event: PauseEvent): void {
    if (event.kind !== 'match' || event.class !== 'vertex') {
      return;
    }
    this.addVertex(event.id, event.type);
  }

  /** Merge an expansion delta; new vertices spiral around their origin. */
  applyDelta(delta: SubgraphDelta, origin?: number): void {
    for (const v of delta.vertices) {
      this.addVertex(v.id, v.type, origin);
    }
    for (const e of delta.edges) {
      if (!this.edges.has(e.id)) {
        this.edges.set(e.id, { type: e.type, source: e.source, target: e.target });
      }
    }
  }

  /** Merge a restored bookmark payload, attributes included. */
  applyPayload(payload: BookmarkPayload): void {
    for (const v of payload.vertices) {
      this.addVertex(v.id, v.type);
      this.mergeAttrs('vertex', v.id, v.attrs);
    }
    for (const e of payload.edges) {
      if (!this.edges.has(e.id)) {
        this.edges.set(e.id, { type: e.type, source: e.source, target: e.target });
      }
      this.mergeAttrs('edge', e.id, e.attrs);
    }
  }

  applyFetch(result: FetchResult): void {
    for (const entry of result.values) {
      this.mergeAttrs(entry.class, entry.id, entry.attrs);
    }
  }

  attrsOf(elementClass: ElementClass, id: number): AttrMap {
    return this.attrs.get(ClientView.attrKey(elementClass, id)) ?? {};
  }

  /** Materialize the whole view, the shape the bookmark endpoint expects. */
  toPayload(): BookmarkPayload {
    const vertexIds = [...this.vertices.keys()].sort((a, b) => a - b);
    const edgeIds = [...this.edges.keys()].sort((a, b) => a - b);
    return {
      vertices: vertexIds.map((id) => ({
        id,
        type: this.vertices.get(id)!,
        attrs: this.attrsOf('vertex', id),
      })),
      edges: edgeIds.map((id) => {
        const e = this.edges.get(id)!;
        return { id, type: e.type, source: e.source, target: e.target, attrs: this.attrsOf('edge', id) };
      }),
    };
  }

  /** Snapshot for equality checks in tests; positions included. */
  snapshot(): string {
    return JSON.stringify({
      vertices: [...this.vertices.entries()].sort((a, b) => a[0] - b[0]),
      edges: [...this.edges.entries()].sort((a, b) => a[0] - b[0]),
      attrs: [...this.attrs.entries()].sort(),
      positions: [...this.positions.entries()].sort((a, b) => a[0] - b[0]),
    });
  }

  private mergeAttrs(elementClass: ElementClass, id: number, attrs: AttrMap): void {
    if (Object.keys(attrs).length === 0) {
      return;
    }
    const key = ClientView.attrKey(elementClass, id);
    const existing = this.attrs.get(key) ?? {};
    this.attrs.set(key, { ...existing, ...attrs });
  }

  private addVertex(id: number, type: string, origin?: number): void {
    if (!this.vertices.has(id)) {
      this.vertices.set(id, type);
    }
    this.place(id, origin);
  }

  private place(id: number, origin?: number): void {
    if (this.positions.has(id)) {
      return; // existing positions are frozen
    }
    const anchorKey = origin !== undefined && this.positions.has(origin) ? origin : 'center';
    const anchor = anchorKey === 'center' ? CANVAS_CENTER : this.positions.get(anchorKey as number)!;
    const index = this.placedAround.get(anchorKey) ?? 0;
    this.placedAround.set(anchorKey, index + 1);
    const angle = index * GOLDEN_ANGLE;
    const radius = (anchorKey === 'center' ? 90 : 55) + 16 * Math.sqrt(index);
    this.positions.set(id, {
      x: anchor.x + radius * Math.cos(angle),
      y: anchor.y + radius * Math.sin(angle),
    });
  }
}
