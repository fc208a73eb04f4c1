/**
 * DOM bootstrap: renders the two panels around an ExplorerApp instance.
 *
 * Left panel composes the driver query (dataset, kind, type, conditions,
 * breakpoints); right panel holds the execution controls, the node-link
 * canvas, the attribute table for the selected element, and the bookmark
 * strip. All state lives in the model; this file only draws it.
 */

import { ApiClient } from './client';
import { ConditionRow, DriverFormState, emptyForm } from './form';
import { ExplorerApp } from './model';
import { Op, ValueTag } from './protocol';

const SVG_NS = 'http://www.w3.org/2000/svg';

const OPS: Op[] = ['eq', 'ne', 'lt', 'le', 'gt', 'ge'];
const TAGS: ValueTag[] = ['str', 'int', 'float', 'bool', 'ts'];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, v);
  }
  node.append(...children);
  return node;
}

export function mount(root: HTMLElement, baseUrl: string): ExplorerApp {
  const app = new ExplorerApp(new ApiClient(baseUrl));
  const form: DriverFormState = emptyForm();

  const messages = el('div', { class: 'messages' });
  const canvas = document.createElementNS(SVG_NS, 'svg');
  canvas.setAttribute('viewBox', '0 0 960 640');
  canvas.setAttribute('class', 'canvas');
  const attrTable = el('table', { class: 'attrs' });
  const strip = el('div', { class: 'bookmark-strip' });
  const controlsBar = el('div', { class: 'controls' });

  const datasetSelect = el('select');
  const kindSelect = el('select');
  for (const kind of ['vertex-scan', 'edge-scan', 'bfs', 'dfs']) {
    kindSelect.append(el('option', { value: kind }, kind));
  }
  const typeInput = el('input', { placeholder: 'element type (optional)' });
  const startInput = el('input', { placeholder: 'start vertex id' });
  const conditionsBox = el('div');

  function conditionEditor(row: ConditionRow): HTMLElement {
    const attr = el('input', { placeholder: 'attribute', value: row.attr });
    attr.oninput = () => (row.attr = attr.value);
    const op = el('select');
    for (const o of OPS) {
      op.append(el('option', { value: o, ...(o === row.op ? { selected: '' } : {}) }, o));
    }
    op.onchange = () => (row.op = op.value as Op);
    const tag = el('select');
    for (const t of TAGS) {
      tag.append(el('option', { value: t, ...(t === row.tag ? { selected: '' } : {}) }, t));
    }
    tag.onchange = () => (row.tag = tag.value as ValueTag);
    const value = el('input', { placeholder: 'value', value: row.value });
    value.oninput = () => (row.value = value.value);
    return el('div', { class: 'condition' }, attr, op, tag, value);
  }

  const addCondition = el('button', {}, '+ condition');
  addCondition.onclick = () => {
    const row: ConditionRow = { attr: '', op: 'eq', tag: 'str', value: '' };
    form.conditions.push(row);
    conditionsBox.append(conditionEditor(row));
  };

  function say(text: string): void {
    messages.textContent = text;
  }

  function renderControls(): void {
    const c = app.controls();
    controlsBar.replaceChildren(
      button('start', true, startQuery),
      button('continue', c.continueEnabled, () => run(() => app.continueQuery())),
      button('stop', c.stopEnabled, () => run(() => app.stopQuery())),
      button('expand', c.expandEnabled, expandSelected),
      button('endpoints', c.endpointsEnabled, endpointsSelected),
      button('fetch attrs', c.fetchEnabled, fetchSelected),
      button('bookmark', c.bookmarkEnabled, () =>
        run(() => app.bookmark(prompt('description (optional)') || null)),
      ),
    );
  }

  function button(label: string, enabled: boolean, onClick: () => void): HTMLButtonElement {
    const b = el('button', enabled ? {} : { disabled: '' }, label);
    b.onclick = onClick;
    return b;
  }

  function renderCanvas(): void {
    canvas.replaceChildren();
    for (const [id, edge] of app.view.edges) {
      const a = app.view.positions.get(edge.source);
      const b = app.view.positions.get(edge.target);
      if (!a || !b) continue;
      const line = document.createElementNS(SVG_NS, 'line');
      line.setAttribute('x1', String(a.x));
      line.setAttribute('y1', String(a.y));
      line.setAttribute('x2', String(b.x));
      line.setAttribute('y2', String(b.y));
      line.setAttribute('class', 'edge');
      line.addEventListener('click', () => {
        app.select('edge', id);
        render();
      });
      canvas.append(line);
    }
    for (const [id, type] of app.view.vertices) {
      const p = app.view.positions.get(id);
      if (!p) continue;
      const g = document.createElementNS(SVG_NS, 'g');
      const circle = document.createElementNS(SVG_NS, 'circle');
      circle.setAttribute('cx', String(p.x));
      circle.setAttribute('cy', String(p.y));
      circle.setAttribute('r', '14');
      const selected = app.selection?.kind === 'vertex' && app.selection.id === id;
      circle.setAttribute('class', selected ? 'vertex selected' : 'vertex');
      circle.addEventListener('click', () => {
        app.select('vertex', id);
        render();
      });
      const label = document.createElementNS(SVG_NS, 'text');
      label.setAttribute('x', String(p.x));
      label.setAttribute('y', String(p.y - 18));
      label.textContent = `${type} ${id}`;
      g.append(circle, label);
      canvas.append(g);
    }
  }

  function renderAttrs(): void {
    attrTable.replaceChildren(el('tr', {}, el('th', {}, 'attribute'), el('th', {}, 'value')));
    if (!app.selection) return;
    const attrs = app.view.attrsOf(app.selection.kind, app.selection.id);
    for (const [name, value] of Object.entries(attrs)) {
      attrTable.append(el('tr', {}, el('td', {}, name), el('td', {}, value === null ? '—' : String(value.v))));
    }
  }

  function renderStrip(): void {
    strip.replaceChildren();
    for (const meta of app.bookmarks) {
      const when = new Date(meta.created_at * 1000).toISOString();
      const thumb = el(
        'button',
        { class: 'thumb', title: when },
        `${meta.description ?? meta.id} (${meta.vertex_count}v/${meta.edge_count}e)`,
      );
      thumb.onclick = () => run(() => app.restore(meta.id));
      strip.append(thumb);
    }
  }

  function render(): void {
    renderControls();
    renderCanvas();
    renderAttrs();
    renderStrip();
    if (app.warnings.length > 0) {
      say(app.warnings[app.warnings.length - 1]);
    }
  }

  async function run(work: () => Promise<unknown>): Promise<void> {
    try {
      say('');
      await work();
    } catch (error) {
      say(String(error));
    }
    render();
  }

  function startQuery(): void {
    form.dataset = datasetSelect.value;
    form.kind = kindSelect.value as DriverFormState['kind'];
    form.elementType = typeInput.value.trim();
    form.start = startInput.value;
    void run(async () => {
      const errors = await app.startSession(form);
      if (errors.length > 0) {
        say(errors.join('; '));
      }
    });
  }

  async function expandSelected(): Promise<void> {
    if (app.selection?.kind !== 'vertex') return;
    const vertex = app.selection.id;
    const count = await app.estimateExpansion(vertex, { direction: 'both' });
    if (!confirm(`expansion would add ${count} edge(s); fetch?`)) return;
    await run(() => app.expand(vertex, { direction: 'both' }));
  }

  async function endpointsSelected(): Promise<void> {
    if (app.selection?.kind !== 'edge') return;
    const edge = app.selection.id;
    await run(async () => {
      const { source, target } = await app.api.edgeEndpoints(app.sessionId!, edge);
      app.view.applyDelta(
        { vertices: [source, target], edges: [], truncated: false },
        undefined,
      );
    });
  }

  async function fetchSelected(): Promise<void> {
    if (!app.selection) return;
    const names = prompt('attribute names (comma-separated)');
    if (!names) return;
    await run(() =>
      app.fetchAttributes(
        [{ class: app.selection!.kind, id: app.selection!.id }],
        names.split(',').map((n) => n.trim()).filter(Boolean),
      ),
    );
  }

  root.append(
    el(
      'div',
      { class: 'driver-panel' },
      el('h2', {}, 'Driver query'),
      el('label', {}, 'dataset ', datasetSelect),
      el('label', {}, 'kind ', kindSelect),
      typeInput,
      startInput,
      conditionsBox,
      addCondition,
      messages,
    ),
    el('div', { class: 'interactive-panel' }, el('h2', {}, 'Exploration'), controlsBar, canvas, attrTable, strip),
  );

  void app.api.listDatasets().then((datasets) => {
    for (const d of datasets) {
      datasetSelect.append(el('option', { value: d.name }, `${d.name} (${d.vertex_count}v/${d.edge_count}e)`));
    }
  });
  render();
  return app;
}
