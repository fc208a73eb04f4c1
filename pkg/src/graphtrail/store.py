"""In-memory columnar property-graph storage.

A dataset keeps one column group per element class: a plain Python list per
declared attribute, aligned on the dense row index that doubles as the
element id. Topology is held twice: as two endpoint columns (source, target)
and as per-vertex adjacency lists of ``(edge id, neighbor id)`` pairs sorted
ascending by edge id. Deletion is tombstoning only; ids stay stable for the
lifetime of the dataset and every mutation bumps a version counter so
downstream consumers (bookmarks, sessions) can detect staleness.

Missing attribute values are stored as ``None`` ("absent"); predicates treat
absent as non-matching under every operator.

Locking discipline: ``delete_element`` takes the dataset writer lock itself.
Compound read paths (query execution, exploration) take ``dataset.lock``'s
reader side around each whole operation; the single-value readers in this
module do not lock on their own.
"""

from __future__ import annotations

import operator
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .errors import DanglingEdgeError, DeadElementError, InvalidPredicateError, InvalidSpecError

VERTEX = "vertex"
EDGE = "edge"

TYPE_ATTR = "type"

# Value tags of the attribute value union. Timestamps are integer seconds
# since the epoch and compare as integers.
TAG_INT = "int"
TAG_FLOAT = "float"
TAG_STR = "str"
TAG_BOOL = "bool"
TAG_TS = "ts"
VALUE_TAGS = (TAG_INT, TAG_FLOAT, TAG_STR, TAG_BOOL, TAG_TS)

OPERATORS = {
    "eq": operator.eq,
    "ne": operator.ne,
    "lt": operator.lt,
    "le": operator.le,
    "gt": operator.gt,
    "ge": operator.ge,
}


def check_tagged_value(tag: str, value: object) -> object:
    """Validate a raw value against a tag, returning the normalized value.

    Raises ValueError on tag/value mismatch. Floats accept ints (widened);
    bools never pass as ints.
    """
    if tag == TAG_INT or tag == TAG_TS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"expected {tag}, got {value!r}")
        return value
    if tag == TAG_FLOAT:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"expected float, got {value!r}")
        return float(value)
    if tag == TAG_STR:
        if not isinstance(value, str):
            raise ValueError(f"expected str, got {value!r}")
        return value
    if tag == TAG_BOOL:
        if not isinstance(value, bool):
            raise ValueError(f"expected bool, got {value!r}")
        return value
    raise ValueError(f"unknown value tag {tag!r}")


class RWLock:
    """Writer-preferring reader-writer lock for dataset-granularity exclusion."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False
        self._writers_waiting = 0

    @contextmanager
    def read_lock(self) -> Iterator[None]:
        with self._cond:
            while self._writer or self._writers_waiting:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if self._readers == 0:
                    self._cond.notify_all()

    @contextmanager
    def write_lock(self) -> Iterator[None]:
        with self._cond:
            self._writers_waiting += 1
            while self._writer or self._readers:
                self._cond.wait()
            self._writers_waiting -= 1
            self._writer = True
        try:
            yield
        finally:
            with self._cond:
                self._writer = False
                self._cond.notify_all()


@dataclass
class Schema:
    """Declared vertex/edge type names and attribute tags.

    The reserved text attribute ``type`` is always declared for both element
    classes and must be present on every loaded element.
    """

    vertex_types: list[str] = field(default_factory=list)
    edge_types: list[str] = field(default_factory=list)
    vertex_attrs: dict[str, str] = field(default_factory=dict)
    edge_attrs: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for attrs, what in ((self.vertex_attrs, "vertex"), (self.edge_attrs, "edge")):
            declared = attrs.setdefault(TYPE_ATTR, TAG_STR)
            if declared != TAG_STR:
                raise InvalidSpecError(f"reserved attribute 'type' must be text in {what} attrs")
            for name, tag in attrs.items():
                if tag not in VALUE_TAGS:
                    raise InvalidSpecError(f"unknown value tag {tag!r} for {what} attribute {name!r}")

    def attrs_for(self, element_class: str) -> dict[str, str]:
        return self.vertex_attrs if element_class == VERTEX else self.edge_attrs

    def types_for(self, element_class: str) -> list[str]:
        return self.vertex_types if element_class == VERTEX else self.edge_types


@dataclass(frozen=True)
class Conjunct:
    attr: str
    op: str  # one of OPERATORS
    tag: str
    value: object


@dataclass(frozen=True)
class Predicate:
    """Conjunction of typed attribute comparisons; empty means always-true."""

    conjuncts: tuple[Conjunct, ...] = ()

    def validate(self, schema: Schema, element_class: str) -> None:
        attrs = schema.attrs_for(element_class)
        for i, c in enumerate(self.conjuncts):
            if c.op not in OPERATORS:
                raise InvalidPredicateError(f"conjunct {i}: unknown operator {c.op!r}")
            declared = attrs.get(c.attr)
            if declared is None:
                raise InvalidPredicateError(
                    f"conjunct {i}: attribute {c.attr!r} not declared for {element_class} class"
                )
            if declared != c.tag:
                raise InvalidPredicateError(
                    f"conjunct {i}: attribute {c.attr!r} has tag {declared!r}, operand has tag {c.tag!r}"
                )


ALWAYS_TRUE = Predicate()


class Dataset:
    """One loaded graph: schema, column groups, topology, tombstones, version."""

    def __init__(self, name: str, schema: Schema):
        self.name = name
        self.schema = schema
        self.vertex_columns: dict[str, list] = {a: [] for a in schema.vertex_attrs}
        self.edge_columns: dict[str, list] = {a: [] for a in schema.edge_attrs}
        self.edge_source: list[int] = []
        self.edge_target: list[int] = []
        self.out_edges: list[list[tuple[int, int]]] = []
        self.in_edges: list[list[tuple[int, int]]] = []
        self.vertex_deleted: list[bool] = []
        self.edge_deleted: list[bool] = []
        self.live_vertices = 0
        self.live_edges = 0
        self.version = 0
        self.lock = RWLock()

    # -- row accounting -------------------------------------------------

    @property
    def vertex_rows(self) -> int:
        return len(self.vertex_deleted)

    @property
    def edge_rows(self) -> int:
        return len(self.edge_deleted)

    def columns_for(self, element_class: str) -> dict[str, list]:
        return self.vertex_columns if element_class == VERTEX else self.edge_columns

    def deleted_for(self, element_class: str) -> list[bool]:
        return self.vertex_deleted if element_class == VERTEX else self.edge_deleted

    def check_allocated(self, element_class: str, row: int) -> None:
        limit = self.vertex_rows if element_class == VERTEX else self.edge_rows
        if not isinstance(row, int) or isinstance(row, bool) or row < 0 or row >= limit:
            raise DeadElementError(f"{element_class} {row} was never allocated in dataset {self.name!r}")

    def check_live(self, element_class: str, row: int) -> None:
        self.check_allocated(element_class, row)
        if self.deleted_for(element_class)[row]:
            raise DeadElementError(f"{element_class} {row} is deleted")

    def type_of(self, element_class: str, row: int) -> str:
        return self.columns_for(element_class)[TYPE_ATTR][row]


@dataclass(frozen=True)
class DeletedWarning:
    """Returned (not raised) when an attribute is read off a tombstone."""

    element_class: str
    row: int
    reason: str = "deleted"


def load_dataset(
    name: str,
    schema: Schema,
    vertices: Iterable[dict],
    edges: Iterable[dict],
) -> Dataset:
    """Materialize a dataset from row streams.

    Each vertex row is a dict of attribute values including ``type``; edge
    rows additionally carry integer ``source`` and ``target`` vertex rows.
    Row position in the stream becomes the element id. The adjacency index
    is built eagerly and is sorted by construction (edges arrive in id
    order).
    """
    d = Dataset(name, schema)
    for row_idx, row in enumerate(vertices):
        _append_row(d, VERTEX, row_idx, row)
        d.out_edges.append([])
        d.in_edges.append([])
        d.vertex_deleted.append(False)
    n_vertices = d.vertex_rows
    for row_idx, row in enumerate(edges):
        src = row.get("source")
        tgt = row.get("target")
        for endpoint in (src, tgt):
            if not isinstance(endpoint, int) or isinstance(endpoint, bool) or endpoint < 0 or endpoint >= n_vertices:
                raise DanglingEdgeError(f"edge row {row_idx} references missing vertex row {endpoint!r}")
        _append_row(d, EDGE, row_idx, {k: v for k, v in row.items() if k not in ("source", "target")})
        d.edge_source.append(src)
        d.edge_target.append(tgt)
        d.out_edges[src].append((row_idx, tgt))
        d.in_edges[tgt].append((row_idx, src))
        d.edge_deleted.append(False)
    d.live_vertices = d.vertex_rows
    d.live_edges = d.edge_rows
    return d


def _append_row(d: Dataset, element_class: str, row_idx: int, row: dict) -> None:
    attrs = d.schema.attrs_for(element_class)
    columns = d.columns_for(element_class)
    for key, value in row.items():
        if key not in attrs:
            raise InvalidSpecError(
                f"{element_class} row {row_idx}: attribute {key!r} not declared in schema"
            )
        if value is None:
            continue
        try:
            check_tagged_value(attrs[key], value)
        except ValueError as exc:
            raise InvalidSpecError(f"{element_class} row {row_idx}: attribute {key!r}: {exc}") from exc
    type_name = row.get(TYPE_ATTR)
    if type_name is None:
        raise InvalidSpecError(f"{element_class} row {row_idx}: reserved attribute 'type' missing")
    if type_name not in d.schema.types_for(element_class):
        raise InvalidSpecError(
            f"{element_class} row {row_idx}: type {type_name!r} not declared in schema"
        )
    for attr in attrs:
        columns[attr].append(row.get(attr))


# -- reads ---------------------------------------------------------------


def get_attribute(d: Dataset, element_class: str, row: int, name: str):
    """Read one attribute; tombstoned elements yield a DeletedWarning value."""
    d.check_allocated(element_class, row)
    attrs = d.schema.attrs_for(element_class)
    if name not in attrs:
        raise InvalidSpecError(f"attribute {name!r} not declared for {element_class} class")
    if d.deleted_for(element_class)[row]:
        return DeletedWarning(element_class, row)
    return d.columns_for(element_class)[name][row]


def neighbors(d: Dataset, v: int, direction: str) -> list[tuple[int, int]]:
    """Live incident edges of a live vertex as (edge id, neighbor id) pairs.

    ``out`` and ``in`` are each ascending by edge id; ``both`` concatenates
    out then in, emitting self-loop edges once.
    """
    d.check_live(VERTEX, v)
    dead = d.edge_deleted
    if direction == "out":
        return [(e, w) for e, w in d.out_edges[v] if not dead[e]]
    if direction == "in":
        return [(e, w) for e, w in d.in_edges[v] if not dead[e]]
    if direction == "both":
        result = [(e, w) for e, w in d.out_edges[v] if not dead[e]]
        result.extend((e, w) for e, w in d.in_edges[v] if not dead[e] and d.edge_source[e] != d.edge_target[e])
        return result
    raise InvalidSpecError(f"unknown direction {direction!r}")


def incident_edges(d: Dataset, v: int, direction: str) -> list[tuple[int, int]]:
    """Like :func:`neighbors` but merged ascending by edge id for ``both``.

    This is the enumeration order traversals and expansions use, so that one
    documented tie-break rule (ascending edge id) covers every direction.
    """
    if direction != "both":
        return neighbors(d, v, direction)
    d.check_live(VERTEX, v)
    dead = d.edge_deleted
    merged: dict[int, int] = {}
    for e, w in d.out_edges[v]:
        if not dead[e]:
            merged[e] = w
    for e, w in d.in_edges[v]:
        if not dead[e] and e not in merged:
            merged[e] = w
    return sorted(merged.items())


def endpoints(d: Dataset, e: int) -> tuple[int, int]:
    d.check_live(EDGE, e)
    return d.edge_source[e], d.edge_target[e]


# -- mutation ------------------------------------------------------------


def delete_element(d: Dataset, element_class: str, row: int) -> int:
    """Tombstone an element; vertex deletion tombstones incident edges.

    Returns the new dataset version. Exactly one version bump per call, no
    matter how many edges the tombstone cascades to.
    """
    with d.lock.write_lock():
        d.check_allocated(element_class, row)
        deleted = d.deleted_for(element_class)
        if deleted[row]:
            raise DeadElementError(f"{element_class} {row} is already deleted")
        if element_class == VERTEX:
            for e, _ in d.out_edges[row]:
                if not d.edge_deleted[e]:
                    d.edge_deleted[e] = True
                    d.live_edges -= 1
            for e, _ in d.in_edges[row]:
                if not d.edge_deleted[e]:
                    d.edge_deleted[e] = True
                    d.live_edges -= 1
            d.vertex_deleted[row] = True
            d.live_vertices -= 1
        else:
            d.edge_deleted[row] = True
            d.live_edges -= 1
        d.version += 1
        return d.version


# -- predicates ----------------------------------------------------------


def compile_predicate(p: Predicate, d: Dataset, element_class: str) -> Callable[[int], bool]:
    """Validate and compile a predicate into a fast per-row matcher.

    Absent values fail every conjunct; the caller is responsible for
    tombstone filtering (compiled matchers see live rows only).
    """
    p.validate(d.schema, element_class)
    columns = d.columns_for(element_class)
    checks = [(columns[c.attr], OPERATORS[c.op], c.value) for c in p.conjuncts]

    def matches(row: int) -> bool:
        for col, op, const in checks:
            v = col[row]
            if v is None or not op(v, const):
                return False
        return True

    return matches


def evaluate(p: Predicate, d: Dataset, element_class: str, row: int) -> bool:
    """Evaluate a predicate on one element; deleted elements evaluate false."""
    d.check_allocated(element_class, row)
    matcher = compile_predicate(p, d, element_class)
    if d.deleted_for(element_class)[row]:
        return False
    return matcher(row)
