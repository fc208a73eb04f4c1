"""Session-scoped interactive exploration: expand, endpoints, fetch, estimate.

These run while the driver query is paused (or after it finished) and are
read-only over the dataset. Expansion applies up to three restrictions —
edge direction, an edge attribute filter, and a filter on the far endpoint —
and returns a subgraph delta the client merges into its displayed view.
The size preview is an exact count of what the unrestricted expansion would
return; exactness is cheap at this scale and doubles as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import store
from .errors import InvalidSpecError, SessionTerminalError
from .engine import Session
from .store import Dataset, Predicate

# Cap per expansion so one click cannot flood the client; callers may override.
DEFAULT_EXPANSION_LIMIT = 1000


@dataclass(frozen=True)
class ExpansionRequest:
    vertex: int
    direction: str
    edge_filter: Predicate | None = None
    vertex_filter: Predicate | None = None
    limit: int | None = None


@dataclass
class SubgraphDelta:
    vertices: list[tuple[int, str]] = field(default_factory=list)  # (id, type)
    edges: list[tuple[int, str, int, int]] = field(default_factory=list)  # (id, type, source, target)
    truncated: bool = False


@dataclass
class AttributeFetchResult:
    values: dict[tuple[str, int], dict[str, object]] = field(default_factory=dict)
    warnings: list[tuple[str, int, str]] = field(default_factory=list)


def _check_session_live(s: Session) -> None:
    # Exploration stays valid after the driver query ends; only stop kills it.
    if s.status == "stopped":
        raise SessionTerminalError(f"session {s.id} is stopped")


def _matched_edges(d: Dataset, req: ExpansionRequest) -> list[tuple[int, int]]:
    d.check_live(store.VERTEX, req.vertex)
    if req.direction not in ("out", "in", "both"):
        raise InvalidSpecError(f"unknown direction {req.direction!r}")
    edge_ok = store.compile_predicate(req.edge_filter or store.ALWAYS_TRUE, d, store.EDGE)
    vertex_ok = store.compile_predicate(req.vertex_filter or store.ALWAYS_TRUE, d, store.VERTEX)
    return [
        (e, far)
        for e, far in store.incident_edges(d, req.vertex, req.direction)
        if edge_ok(e) and vertex_ok(far)
    ]


def expand_neighborhood(s: Session, req: ExpansionRequest) -> SubgraphDelta:
    """Incident edges passing both filters, ascending edge id, capped at limit."""
    s.acquire()
    try:
        _check_session_live(s)
        limit = DEFAULT_EXPANSION_LIMIT if req.limit is None else req.limit
        if limit < 1:
            raise InvalidSpecError("expansion limit must be positive")
        with s.dataset.lock.read_lock():
            d = s.dataset
            matched = _matched_edges(d, req)
            kept = matched[:limit]
            delta = SubgraphDelta(truncated=len(matched) > limit)
            far_ids = sorted({far for _, far in kept})
            delta.vertices = [(v, d.type_of(store.VERTEX, v)) for v in far_ids]
            delta.edges = [
                (e, d.type_of(store.EDGE, e), d.edge_source[e], d.edge_target[e]) for e, _ in kept
            ]
            return delta
    finally:
        s.release()


def estimate_expansion(s: Session, req: ExpansionRequest) -> int:
    """Exact number of edges the same expansion would return without a limit."""
    s.acquire()
    try:
        _check_session_live(s)
        with s.dataset.lock.read_lock():
            return len(_matched_edges(s.dataset, req))
    finally:
        s.release()


def incident_vertices(s: Session, edge: int) -> tuple[tuple[int, str], tuple[int, str]]:
    """Both endpoints of a live edge, with type names."""
    s.acquire()
    try:
        _check_session_live(s)
        with s.dataset.lock.read_lock():
            d = s.dataset
            src, tgt = store.endpoints(d, edge)
            return (src, d.type_of(store.VERTEX, src)), (tgt, d.type_of(store.VERTEX, tgt))
    finally:
        s.release()


def fetch_attributes(
    s: Session,
    elements: list[tuple[str, int]],
    names: list[str],
) -> AttributeFetchResult:
    """Attribute values for live elements, deletion warnings for dead ones.

    Validates everything up front so a bad request never partially applies.
    Duplicate element references collapse to the first occurrence.
    """
    s.acquire()
    try:
        _check_session_live(s)
        with s.dataset.lock.read_lock():
            d = s.dataset
            for element_class, row in elements:
                if element_class not in (store.VERTEX, store.EDGE):
                    raise InvalidSpecError(f"unknown element class {element_class!r}")
                d.check_allocated(element_class, row)
                for name in names:
                    if name not in d.schema.attrs_for(element_class):
                        raise InvalidSpecError(
                            f"attribute {name!r} not declared for {element_class} class"
                        )
            result = AttributeFetchResult()
            for element_class, row in elements:
                key = (element_class, row)
                if key in result.values or any(w[0] == element_class and w[1] == row for w in result.warnings):
                    continue
                if d.deleted_for(element_class)[row]:
                    result.warnings.append((element_class, row, "deleted"))
                    continue
                columns = d.columns_for(element_class)
                result.values[key] = {name: columns[name][row] for name in names}
            return result
    finally:
        s.release()
