/**
 * Driver query panel: turns form state into a session-creation request.
 *
 * The form is deliberately schema-light — the user picks a dataset, a query
 * kind and optionally a vertex/edge type, then adds attribute conditions and
 * breakpoint groups without needing to know the full schema.
 */

import {
  Conjunct,
  CreateSessionRequest,
  Direction,
  DriverSpec,
  Op,
  Predicate,
  QueryKind,
  ValueTag,
  conjunct,
} from './protocol';

export interface ConditionRow {
  attr: string;
  op: Op;
  tag: ValueTag;
  /** Raw input text; parsed according to tag. */
  value: string;
}

export interface DriverFormState {
  dataset: string;
  kind: QueryKind;
  /** Restrict to one element type; empty string means all. */
  elementType: string;
  conditions: ConditionRow[];
  /** Each breakpoint is its own conjunction of rows. */
  breakpoints: ConditionRow[][];
  /** Traversal fields (ignored for scans). */
  start: string;
  direction: Direction;
  maxDepth: string;
}

export function emptyForm(dataset = ''): DriverFormState {
  return {
    dataset,
    kind: 'vertex-scan',
    elementType: '',
    conditions: [],
    breakpoints: [],
    start: '',
    direction: 'out',
    maxDepth: '',
  };
}

export type FormResult =
  | { ok: true; request: CreateSessionRequest }
  | { ok: false; errors: string[] };

function parseValue(row: ConditionRow, where: string, errors: string[]): number | string | boolean | undefined {
  const text = row.value.trim();
  switch (row.tag) {
    case 'int':
    case 'ts': {
      if (!/^-?\d+$/.test(text)) {
        errors.push(`${where}: "${text}" is not an integer`);
        return undefined;
      }
      return Number(text);
    }
    case 'float': {
      const parsed = Number(text);
      if (text === '' || Number.isNaN(parsed)) {
        errors.push(`${where}: "${text}" is not a number`);
        return undefined;
      }
      return parsed;
    }
    case 'bool': {
      if (text !== 'true' && text !== 'false') {
        errors.push(`${where}: expected true or false`);
        return undefined;
      }
      return text === 'true';
    }
    case 'str':
      return row.value;
  }
}

function rowsToConjuncts(rows: ConditionRow[], where: string, errors: string[]): Conjunct[] {
  const out: Conjunct[] = [];
  rows.forEach((row, i) => {
    if (!row.attr) {
      errors.push(`${where} ${i + 1}: attribute name is empty`);
      return;
    }
    const v = parseValue(row, `${where} ${i + 1}`, errors);
    if (v !== undefined) {
      out.push(conjunct(row.attr, row.op, row.tag, v));
    }
  });
  return out;
}

const TRAVERSAL_KINDS: QueryKind[] = ['bfs', 'dfs'];

/**
 * Validate the form and emit the request the wire expects. No request is
 * produced while any field is invalid; callers show the messages inline.
 */
export function buildDriverRequest(form: DriverFormState): FormResult {
  const errors: string[] = [];
  if (!form.dataset) {
    errors.push('select a dataset');
  }
  const conjuncts: Conjunct[] = [];
  if (form.elementType) {
    conjuncts.push(conjunct('type', 'eq', 'str', form.elementType));
  }
  conjuncts.push(...rowsToConjuncts(form.conditions, 'condition', errors));

  const breakpoints: Predicate[] = form.breakpoints.map((rows, i) => ({
    conjuncts: rowsToConjuncts(rows, `breakpoint ${i + 1} row`, errors),
  }));

  const spec: DriverSpec = { kind: form.kind, filter: { conjuncts } };
  if (TRAVERSAL_KINDS.includes(form.kind)) {
    if (!/^\d+$/.test(form.start.trim())) {
      errors.push('traversals need a start vertex id');
    } else {
      spec.start = Number(form.start.trim());
    }
    spec.direction = form.direction;
    if (form.maxDepth.trim() !== '') {
      if (!/^\d+$/.test(form.maxDepth.trim())) {
        errors.push('max depth must be a non-negative integer');
      } else {
        spec.max_depth = Number(form.maxDepth.trim());
      }
    }
  }

  if (errors.length > 0) {
    return { ok: false, errors };
  }
  return { ok: true, request: { dataset: form.dataset, spec, breakpoints } };
}
