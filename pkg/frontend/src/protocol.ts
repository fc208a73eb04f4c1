/**
 * Wire types and helpers for the graphtrail HTTP protocol.
 *
 * Shapes mirror the server exactly (snake_case field names, tagged values).
 * Object literals are built in the server's canonical key order, so
 * JSON.stringify of a request body reproduces the golden fixtures byte for
 * byte.
 */

export type ValueTag = 'int' | 'float' | 'str' | 'bool' | 'ts';
export type Op = 'eq' | 'ne' | 'lt' | 'le' | 'gt' | 'ge';
export type Direction = 'out' | 'in' | 'both';
export type QueryKind = 'vertex-scan' | 'edge-scan' | 'bfs' | 'dfs';
export type ElementClass = 'vertex' | 'edge';

export interface TypedValue {
  t: ValueTag;
  v: number | string | boolean;
}

export interface Conjunct {
  attr: string;
  op: Op;
  value: TypedValue;
}

export interface Predicate {
  conjuncts: Conjunct[];
}

export interface DriverSpec {
  kind: QueryKind;
  filter: Predicate;
  start?: number;
  direction?: Direction;
  max_depth?: number;
}

export interface CreateSessionRequest {
  dataset: string;
  spec: DriverSpec;
  breakpoints: Predicate[];
}

export interface PauseMatch {
  kind: 'match';
  class: ElementClass;
  id: number;
  type: string;
  depth: number | null;
}

export interface PauseDone {
  kind: 'done';
  reason: string;
}

export type PauseEvent = PauseMatch | PauseDone;

export interface SessionStatus {
  status: 'created' | 'paused' | 'running' | 'done' | 'stopped';
  records_processed: number;
  last_event: PauseEvent | null;
}

export interface ExpansionRequest {
  vertex: number;
  direction: Direction;
  edge_filter?: Predicate;
  vertex_filter?: Predicate;
  limit?: number;
}

export interface DeltaVertex {
  id: number;
  type: string;
}

export interface DeltaEdge {
  id: number;
  type: string;
  source: number;
  target: number;
}

export interface SubgraphDelta {
  vertices: DeltaVertex[];
  edges: DeltaEdge[];
  truncated: boolean;
}

export type AttrMap = Record<string, TypedValue | null>;

export interface FetchedValues {
  class: ElementClass;
  id: number;
  attrs: AttrMap;
}

export interface FetchWarning {
  class: ElementClass;
  id: number;
  reason: string;
}

export interface FetchResult {
  values: FetchedValues[];
  warnings: FetchWarning[];
}

export interface PayloadVertex {
  id: number;
  type: string;
  attrs: AttrMap;
}

export interface PayloadEdge {
  id: number;
  type: string;
  source: number;
  target: number;
  attrs: AttrMap;
}

export interface BookmarkPayload {
  vertices: PayloadVertex[];
  edges: PayloadEdge[];
}

export interface BookmarkMeta {
  id: string;
  created_at: number;
  description: string | null;
  dataset: string;
  session: string | null;
  vertex_count: number;
  edge_count: number;
}

export interface RestoreResult {
  payload: BookmarkPayload;
  staleness: FetchWarning[];
}

export interface DatasetInfo {
  name: string;
  vertex_count: number;
  edge_count: number;
  version: number;
}

export interface WireError {
  code: string;
  message: string;
}

export function conjunct(attr: string, op: Op, tag: ValueTag, v: number | string | boolean): Conjunct {
  return { attr, op, value: { t: tag, v } };
}

export function predicate(conjuncts: Conjunct[]): Predicate {
  return { conjuncts };
}

/** Canonical body serialization; identical to the server's compact JSON. */
export function requestBody(request: unknown): string {
  return JSON.stringify(request);
}
