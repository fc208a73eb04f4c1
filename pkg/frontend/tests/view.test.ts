import { readFileSync } from 'node:fs';
import { join } from 'node:path';

import { describe, expect, test } from 'vitest';

import { BookmarkPayload, FetchResult, PauseMatch, SubgraphDelta } from '../src/protocol';
import { ClientView } from '../src/view';

type ViewEvent =
  | { apply: 'match'; event: PauseMatch }
  | { apply: 'delta'; delta: SubgraphDelta; origin: number }
  | { apply: 'fetch'; result: FetchResult }
  | { apply: 'payload'; payload: BookmarkPayload };

const EVENTS: ViewEvent[] = JSON.parse(
  readFileSync(join(__dirname, '..', '..', 'fixtures', 'demo', 'view_events.json'), 'utf-8'),
);

function applyAll(view: ClientView, events: ViewEvent[]): void {
  for (const ev of events) {
    switch (ev.apply) {
      case 'match':
        view.applyMatch(ev.event);
        break;
      case 'delta':
        view.applyDelta(ev.delta, ev.origin);
        break;
      case 'fetch':
        view.applyFetch(ev.result);
        break;
      case 'payload':
        view.applyPayload(ev.payload);
        break;
    }
  }
}

describe('ClientView merging', () => {
  test('recorded walkthrough builds the expected excerpt', () => {
    const view = new ClientView();
    applyAll(view, EVENTS);
    expect([...view.vertices.keys()].sort((a, b) => a - b)).toEqual([22, 35, 79, 198, 228]);
    expect(view.edges.size).toBe(2);
    expect(view.attrsOf('vertex', 22).firstname).toEqual({ t: 'str', v: 'Elena' });
    for (const id of view.vertices.keys()) {
      expect(view.positions.get(id)).toBeDefined();
    }
  });

  test('applying the recorded sequence twice equals applying it once', () => {
    const once = new ClientView();
    applyAll(once, EVENTS);
    const twice = new ClientView();
    applyAll(twice, EVENTS);
    applyAll(twice, EVENTS);
    expect(twice.snapshot()).toBe(once.snapshot());
  });

  test('single delta applied twice leaves nodes, links and positions alone', () => {
    const deltaEvent = EVENTS.find((e) => e.apply === 'delta') as Extract<ViewEvent, { apply: 'delta' }>;
    const view = new ClientView();
    view.applyDelta(deltaEvent.delta, deltaEvent.origin);
    const before = view.snapshot();
    view.applyDelta(deltaEvent.delta, deltaEvent.origin);
    expect(view.snapshot()).toBe(before);
  });

  test('commuting merges yield the same node and link sets', () => {
    const forward = new ClientView();
    applyAll(forward, EVENTS);
    const backward = new ClientView();
    applyAll(backward, [...EVENTS].reverse());
    expect(new Set(backward.vertices.keys())).toEqual(new Set(forward.vertices.keys()));
    expect(new Set(backward.edges.keys())).toEqual(new Set(forward.edges.keys()));
    expect(backward.attrs).toEqual(forward.attrs);
  });

  test('existing positions never move when a match re-arrives', () => {
    const view = new ClientView();
    const match: PauseMatch = { kind: 'match', class: 'vertex', id: 5, type: 'person', depth: null };
    view.applyMatch(match);
    const first = { ...view.positions.get(5)! };
    view.applyDelta(
      { vertices: [{ id: 5, type: 'person' }, { id: 6, type: 'person' }], edges: [], truncated: false },
      5,
    );
    view.applyMatch(match);
    expect(view.positions.get(5)).toEqual(first);
    expect(view.positions.get(6)).toBeDefined();
  });

  test('toPayload materializes a self-contained sorted payload', () => {
    const view = new ClientView();
    applyAll(view, EVENTS);
    const payload = view.toPayload();
    const ids = payload.vertices.map((v) => v.id);
    expect(ids).toEqual([...ids].sort((a, b) => a - b));
    for (const e of payload.edges) {
      expect(ids).toContain(e.source);
      expect(ids).toContain(e.target);
    }
  });

  test('edge matches stay off the canvas until endpoints are known', () => {
    const view = new ClientView();
    view.applyMatch({ kind: 'match', class: 'edge', id: 3, type: 'knows', depth: null });
    expect(view.vertices.size).toBe(0);
    expect(view.edges.size).toBe(0);
  });
});
