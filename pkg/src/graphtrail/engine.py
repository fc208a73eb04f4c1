"""Driver query execution: filtered scans and traversals that pause at breakpoints.

A session owns one suspended execution. Each continuation request advances
the underlying stream — ascending-id row scan, or BFS/DFS from a start
vertex — until a record satisfies the pause condition, then suspends and
reports that record. The pause condition is ``spec.filter AND (any
breakpoint)``; an empty breakpoint set behaves as a single always-true
breakpoint, so the filter alone can drive pauses.

Tie-breaks are fixed so runs are reproducible: scans examine live rows in
ascending id order; BFS dequeues FIFO and enqueues neighbors in ascending
edge-id order, marking them visited on enqueue; DFS pops LIFO and pushes
neighbors in descending edge-id order (smallest edge explored first),
skipping vertices that were ever pushed. Traversals evaluate the pause
condition on vertices only.
"""

from __future__ import annotations

import itertools
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from . import store
from .errors import InvalidSpecError, SessionBusyError, SessionTerminalError
from .store import Dataset, Predicate

SCAN_KINDS = ("vertex-scan", "edge-scan")
TRAVERSAL_KINDS = ("bfs", "dfs")
DIRECTIONS = ("out", "in", "both")

DONE_EXHAUSTED = "exhausted"
DONE_DEPTH_BOUND = "depth-bound"

_fallback_ids = itertools.count(1)


@dataclass(frozen=True)
class DriverQuerySpec:
    kind: str
    filter: Predicate = store.ALWAYS_TRUE
    start: int | None = None
    direction: str = "out"
    max_depth: int | None = None

    @property
    def is_traversal(self) -> bool:
        return self.kind in TRAVERSAL_KINDS

    @property
    def element_class(self) -> str:
        return store.EDGE if self.kind == "edge-scan" else store.VERTEX

    def validate(self) -> None:
        if self.kind not in SCAN_KINDS + TRAVERSAL_KINDS:
            raise InvalidSpecError(f"unknown driver query kind {self.kind!r}")
        if self.is_traversal:
            if self.start is None:
                raise InvalidSpecError(f"{self.kind} requires a start vertex")
            if self.direction not in DIRECTIONS:
                raise InvalidSpecError(f"unknown traversal direction {self.direction!r}")
            if self.max_depth is not None and self.max_depth < 0:
                raise InvalidSpecError("max_depth must be non-negative")
        elif self.start is not None:
            raise InvalidSpecError(f"{self.kind} does not take a start vertex")


@dataclass(frozen=True)
class PauseEvent:
    kind: str  # "match" | "done"
    element_class: str | None = None
    element: int | None = None
    type_name: str | None = None
    depth: int | None = None
    reason: str | None = None

    @classmethod
    def match(cls, element_class: str, element: int, type_name: str, depth: int | None) -> "PauseEvent":
        return cls("match", element_class, element, type_name, depth)

    @classmethod
    def done(cls, reason: str) -> "PauseEvent":
        return cls("done", reason=reason)


@dataclass
class Session:
    """One suspended driver-query execution bound to a dataset."""

    id: str
    dataset: Dataset
    spec: DriverQuerySpec
    breakpoints: list[Predicate]
    dataset_version_at_creation: int
    status: str = "created"
    records_processed: int = 0
    last_event: PauseEvent | None = None
    _events: Iterator[PauseEvent] | None = None
    _busy: threading.Lock = field(default_factory=threading.Lock)

    def acquire(self) -> None:
        if not self._busy.acquire(blocking=False):
            raise SessionBusyError(f"session {self.id} has a request in flight")

    def release(self) -> None:
        self._busy.release()


def create_session(
    dataset: Dataset,
    spec: DriverQuerySpec,
    breakpoints: list[Predicate],
    *,
    session_id: str | None = None,
) -> Session:
    """Register a new suspended execution; nothing is processed yet."""
    spec.validate()
    target = spec.element_class
    spec.filter.validate(dataset.schema, target)
    for bp in breakpoints:
        bp.validate(dataset.schema, target)
    if spec.is_traversal:
        dataset.check_live(store.VERTEX, spec.start)
    s = Session(
        id=session_id if session_id is not None else f"local-{next(_fallback_ids)}",
        dataset=dataset,
        spec=spec,
        breakpoints=list(breakpoints),
        dataset_version_at_creation=dataset.version,
    )
    s._events = _event_stream(s)
    return s


def continue_session(s: Session) -> PauseEvent:
    """Advance to the next breakpoint match or to termination."""
    s.acquire()
    try:
        if s.status in ("done", "stopped"):
            raise SessionTerminalError(f"session {s.id} is {s.status}; cannot continue")
        previous = s.status
        s.status = "running"
        try:
            with s.dataset.lock.read_lock():
                try:
                    event = next(s._events)
                except StopIteration as stop:
                    event = PauseEvent.done(stop.value or DONE_EXHAUSTED)
        except Exception:
            s.status = previous
            raise
        s.status = "paused" if event.kind == "match" else "done"
        s.last_event = event
        return event
    finally:
        s.release()


def stop_session(s: Session) -> str:
    """Terminate a session; idempotent on terminal states."""
    s.acquire()
    try:
        s.status = "stopped"
        s._events = None  # cursor state is releasable once stopped
        return s.status
    finally:
        s.release()


def session_status(s: Session) -> tuple[str, int, PauseEvent | None]:
    """Read-only snapshot; never advances execution."""
    return s.status, s.records_processed, s.last_event


# -- execution ------------------------------------------------------------


def _pause_condition(s: Session, element_class: str):
    filt = store.compile_predicate(s.spec.filter, s.dataset, element_class)
    if not s.breakpoints:
        return filt
    bps = [store.compile_predicate(bp, s.dataset, element_class) for bp in s.breakpoints]

    def matches(row: int) -> bool:
        return filt(row) and any(bp(row) for bp in bps)

    return matches


def _event_stream(s: Session) -> Iterator[PauseEvent]:
    if s.spec.kind == "bfs":
        return _traversal_events(s, breadth_first=True)
    if s.spec.kind == "dfs":
        return _traversal_events(s, breadth_first=False)
    return _scan_events(s, s.spec.element_class)


def _scan_events(s: Session, element_class: str) -> Iterator[PauseEvent]:
    d = s.dataset
    deleted = d.deleted_for(element_class)
    type_col = d.columns_for(element_class)[store.TYPE_ATTR]
    passes = _pause_condition(s, element_class)
    for row in range(len(deleted)):
        if deleted[row]:
            continue
        s.records_processed += 1
        if passes(row):
            yield PauseEvent.match(element_class, row, type_col[row], None)
    return DONE_EXHAUSTED


def _traversal_events(s: Session, breadth_first: bool) -> Iterator[PauseEvent]:
    d = s.dataset
    spec = s.spec
    type_col = d.vertex_columns[store.TYPE_ATTR]
    passes = _pause_condition(s, store.VERTEX)
    frontier = deque([(spec.start, 0)])
    seen = {spec.start}  # marked on enqueue (BFS) / on push (DFS)
    depth_bounded = False
    while frontier:
        v, depth = frontier.popleft() if breadth_first else frontier.pop()
        if d.vertex_deleted[v]:
            continue
        adjacent = store.incident_edges(d, v, spec.direction)
        if spec.max_depth is not None and depth >= spec.max_depth:
            if any(w not in seen for _, w in adjacent):
                depth_bounded = True
        else:
            # Expand before pausing so the suspended frontier is complete.
            ordered = adjacent if breadth_first else reversed(adjacent)
            for _, w in ordered:
                if w not in seen:
                    seen.add(w)
                    frontier.append((w, depth + 1))
        s.records_processed += 1
        if passes(v):
            yield PauseEvent.match(store.VERTEX, v, type_col[v], depth)
    return DONE_DEPTH_BOUND if depth_bounded else DONE_EXHAUSTED
