"""Brute-force reference implementations the real code is checked against.

Everything here works straight off the raw columns (edge-endpoint lists,
attribute arrays, tombstone flags) with plainly written loops — no adjacency
index, no compiled predicates, no generators — so a bug in the production
path cannot hide in its oracle.
"""

from __future__ import annotations

import random
from collections import deque

from graphtrail import store
from graphtrail.store import Conjunct, Dataset, Predicate, Schema

PLAIN_OPS = {
    "eq": lambda a, b: a == b,
    "ne": lambda a, b: a != b,
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b,
    "ge": lambda a, b: a >= b,
}


def naive_eval(d: Dataset, element_class: str, row: int, pred: Predicate) -> bool:
    if element_class == "vertex":
        columns, deleted = d.vertex_columns, d.vertex_deleted
    else:
        columns, deleted = d.edge_columns, d.edge_deleted
    if deleted[row]:
        return False
    for c in pred.conjuncts:
        value = columns[c.attr][row]
        if value is None:
            return False
        if not PLAIN_OPS[c.op](value, c.value):
            return False
    return True


def naive_pause(d, element_class, row, filt, breakpoints) -> bool:
    if not naive_eval(d, element_class, row, filt):
        return False
    if not breakpoints:
        return True
    return any(naive_eval(d, element_class, row, bp) for bp in breakpoints)


def naive_scan(d: Dataset, element_class: str, filt: Predicate, breakpoints) -> list[int]:
    """Matching rows of the ascending-id tombstone-filtered scan."""
    total = d.vertex_rows if element_class == "vertex" else d.edge_rows
    deleted = d.vertex_deleted if element_class == "vertex" else d.edge_deleted
    matches = []
    for row in range(total):
        if deleted[row]:
            continue
        if naive_pause(d, element_class, row, filt, breakpoints):
            matches.append(row)
    return matches


def naive_positions(d: Dataset, element_class: str, filt: Predicate, breakpoints) -> list[int]:
    """1-based stream position of each match among live rows."""
    total = d.vertex_rows if element_class == "vertex" else d.edge_rows
    deleted = d.vertex_deleted if element_class == "vertex" else d.edge_deleted
    positions = []
    examined = 0
    for row in range(total):
        if deleted[row]:
            continue
        examined += 1
        if naive_pause(d, element_class, row, filt, breakpoints):
            positions.append(examined)
    return positions


def naive_incident(d: Dataset, v: int, direction: str) -> list[tuple[int, int]]:
    """Live incident edges by scanning the endpoint columns, ascending edge id."""
    out = [
        (e, d.edge_target[e])
        for e in range(d.edge_rows)
        if not d.edge_deleted[e] and d.edge_source[e] == v
    ]
    incoming = [
        (e, d.edge_source[e])
        for e in range(d.edge_rows)
        if not d.edge_deleted[e] and d.edge_target[e] == v
    ]
    if direction == "out":
        return out
    if direction == "in":
        return incoming
    merged: dict[int, int] = {}
    for e, w in out + incoming:
        merged.setdefault(e, w)
    return sorted(merged.items())


def naive_bfs(d: Dataset, start: int, direction: str, max_depth=None) -> list[tuple[int, int]]:
    """Visit order (vertex, depth): FIFO, visited marked on enqueue,
    neighbors taken ascending by edge id."""
    queue = deque([(start, 0)])
    seen = {start}
    visits = []
    while queue:
        v, depth = queue.popleft()
        if d.vertex_deleted[v]:
            continue
        if max_depth is None or depth < max_depth:
            for _, w in naive_incident(d, v, direction):
                if w not in seen:
                    seen.add(w)
                    queue.append((w, depth + 1))
        visits.append((v, depth))
    return visits


def naive_dfs(d: Dataset, start: int, direction: str, max_depth=None) -> list[tuple[int, int]]:
    """Visit order (vertex, depth): LIFO, a vertex is pushed at most once,
    neighbors pushed in descending edge-id order so the smallest pops first."""
    stack = [(start, 0)]
    pushed = {start}
    visits = []
    while stack:
        v, depth = stack.pop()
        if d.vertex_deleted[v]:
            continue
        if max_depth is None or depth < max_depth:
            for _, w in reversed(naive_incident(d, v, direction)):
                if w not in pushed:
                    pushed.add(w)
                    stack.append((w, depth + 1))
        visits.append((v, depth))
    return visits


def naive_expansion(d: Dataset, vertex: int, direction: str, edge_filter, vertex_filter) -> list[int]:
    """Edge ids the filtered expansion should return, ascending."""
    edge_filter = edge_filter or Predicate()
    vertex_filter = vertex_filter or Predicate()
    kept = []
    for e, far in naive_incident(d, vertex, direction):
        if naive_eval(d, "edge", e, edge_filter) and naive_eval(d, "vertex", far, vertex_filter):
            kept.append(e)
    return kept


# -- random inputs ----------------------------------------------------------

VTYPES = ("person", "robot")
ETYPES = ("likes", "follows")
LABELS = ("red", "green", "blue")


def build_schema() -> Schema:
    return Schema(
        vertex_types=list(VTYPES),
        edge_types=list(ETYPES),
        vertex_attrs={
            "age": "int",
            "score": "float",
            "label": "str",
            "active": "bool",
            "joined": "ts",
        },
        edge_attrs={"weight": "float", "since": "ts"},
    )


def random_dataset(rng: random.Random, max_vertices: int, max_edges: int, name="rand") -> Dataset:
    n = rng.randint(1, max_vertices)
    vertices = []
    for _ in range(n):
        row = {"type": rng.choice(VTYPES)}
        if rng.random() < 0.9:
            row["age"] = rng.randint(0, 80)
        if rng.random() < 0.5:
            row["score"] = round(rng.random() * 10, 3)
        if rng.random() < 0.6:
            row["label"] = rng.choice(LABELS)
        if rng.random() < 0.4:
            row["active"] = rng.random() < 0.5
        if rng.random() < 0.5:
            row["joined"] = rng.randint(1_000_000_000, 1_700_000_000)
        vertices.append(row)
    edges = []
    for _ in range(rng.randint(0, max_edges)):
        row = {
            "type": rng.choice(ETYPES),
            "source": rng.randrange(n),
            "target": rng.randrange(n),
        }
        if rng.random() < 0.7:
            row["weight"] = round(rng.random(), 3)
        if rng.random() < 0.5:
            row["since"] = rng.randint(1_000_000_000, 1_700_000_000)
        edges.append(row)
    return store.load_dataset(name, build_schema(), vertices, edges)


_CONST_MAKERS = {
    "age": lambda rng: rng.randint(0, 80),
    "score": lambda rng: round(rng.random() * 10, 3),
    "label": lambda rng: rng.choice(LABELS),
    "active": lambda rng: rng.random() < 0.5,
    "joined": lambda rng: rng.randint(1_000_000_000, 1_700_000_000),
    "weight": lambda rng: round(rng.random(), 3),
    "since": lambda rng: rng.randint(1_000_000_000, 1_700_000_000),
    "type": lambda rng: rng.choice(VTYPES + ETYPES),
}


def random_predicate(rng: random.Random, element_class: str, max_conjuncts: int = 3) -> Predicate:
    schema = build_schema()
    attrs = schema.vertex_attrs if element_class == "vertex" else schema.edge_attrs
    names = list(attrs)
    conjuncts = []
    for _ in range(rng.randint(0, max_conjuncts)):
        attr = rng.choice(names)
        op = rng.choice(list(PLAIN_OPS))
        conjuncts.append(Conjunct(attr, op, attrs[attr], _CONST_MAKERS[attr](rng)))
    return Predicate(tuple(conjuncts))
