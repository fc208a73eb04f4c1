"""JSON codecs for the HTTP protocol.

Encoders build dicts in a fixed key order and never sort, so responses
serialize to stable bytes; decoders are strict (unknown keys, operators or
tags are rejected) and name the offending conjunct where predicates are
concerned. ``decode(encode(x)) == x`` holds for every shape that crosses
the wire in both directions.
"""

from __future__ import annotations

from . import store
from .engine import DriverQuerySpec, PauseEvent, SCAN_KINDS, TRAVERSAL_KINDS
from .errors import InvalidPredicateError, InvalidSpecError
from .explore import AttributeFetchResult, ExpansionRequest, SubgraphDelta
from .store import Conjunct, Predicate

_JSON_TYPES = {
    store.TAG_INT: int,
    store.TAG_TS: int,
    store.TAG_FLOAT: (int, float),
    store.TAG_STR: str,
    store.TAG_BOOL: bool,
}


def encode_typed_value(tag: str, value: object) -> dict:
    return {"t": tag, "v": value}


def decode_typed_value(obj: object, where: str) -> tuple[str, object]:
    if not isinstance(obj, dict) or set(obj.keys()) != {"t", "v"}:
        raise InvalidPredicateError(f"{where}: value must be {{'t','v'}}")
    tag, raw = obj["t"], obj["v"]
    if tag not in store.VALUE_TAGS:
        raise InvalidPredicateError(f"{where}: unknown value tag {tag!r}")
    expected = _JSON_TYPES[tag]
    if isinstance(raw, bool) and tag != store.TAG_BOOL or not isinstance(raw, expected):
        raise InvalidPredicateError(f"{where}: value {raw!r} does not match tag {tag!r}")
    if tag == store.TAG_FLOAT:
        raw = float(raw)
    return tag, raw


def encode_predicate(p: Predicate) -> dict:
    return {
        "conjuncts": [
            {"attr": c.attr, "op": c.op, "value": encode_typed_value(c.tag, c.value)}
            for c in p.conjuncts
        ]
    }


def decode_predicate(obj: object) -> Predicate:
    if not isinstance(obj, dict) or set(obj.keys()) != {"conjuncts"} or not isinstance(obj["conjuncts"], list):
        raise InvalidPredicateError("predicate must be an object with a 'conjuncts' list")
    conjuncts = []
    for i, raw in enumerate(obj["conjuncts"]):
        where = f"conjunct {i}"
        if not isinstance(raw, dict) or set(raw.keys()) != {"attr", "op", "value"}:
            raise InvalidPredicateError(f"{where}: must have attr, op and value")
        if not isinstance(raw["attr"], str):
            raise InvalidPredicateError(f"{where}: attr must be a string")
        if raw["op"] not in store.OPERATORS:
            raise InvalidPredicateError(f"{where}: unknown operator {raw['op']!r}")
        tag, value = decode_typed_value(raw["value"], where)
        conjuncts.append(Conjunct(raw["attr"], raw["op"], tag, value))
    return Predicate(tuple(conjuncts))


def encode_spec(spec: DriverQuerySpec) -> dict:
    out: dict = {"kind": spec.kind, "filter": encode_predicate(spec.filter)}
    if spec.kind in TRAVERSAL_KINDS:
        out["start"] = spec.start
        out["direction"] = spec.direction
        if spec.max_depth is not None:
            out["max_depth"] = spec.max_depth
    return out


def decode_spec(obj: object) -> DriverQuerySpec:
    if not isinstance(obj, dict):
        raise InvalidSpecError("spec must be an object")
    kind = obj.get("kind")
    if kind not in SCAN_KINDS + TRAVERSAL_KINDS:
        raise InvalidSpecError(f"unknown driver query kind {kind!r}")
    allowed = {"kind", "filter"} | ({"start", "direction", "max_depth"} if kind in TRAVERSAL_KINDS else set())
    unknown = set(obj.keys()) - allowed
    if unknown:
        raise InvalidSpecError(f"spec keys not allowed for {kind}: {sorted(unknown)}")
    filt = decode_predicate(obj["filter"]) if "filter" in obj else store.ALWAYS_TRUE
    spec = DriverQuerySpec(
        kind=kind,
        filter=filt,
        start=_opt_int(obj, "start"),
        direction=obj.get("direction", "out"),
        max_depth=_opt_int(obj, "max_depth"),
    )
    spec.validate()
    return spec


def _opt_int(obj: dict, key: str) -> int | None:
    value = obj.get(key)
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidSpecError(f"{key} must be an integer")
    return value


def encode_pause_event(ev: PauseEvent) -> dict:
    if ev.kind == "done":
        return {"kind": "done", "reason": ev.reason}
    return {
        "kind": "match",
        "class": ev.element_class,
        "id": ev.element,
        "type": ev.type_name,
        "depth": ev.depth,
    }


def decode_pause_event(obj: object) -> PauseEvent:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidSpecError("pause event must be an object with a kind")
    if obj["kind"] == "done":
        return PauseEvent.done(obj["reason"])
    if obj["kind"] == "match":
        return PauseEvent.match(obj["class"], obj["id"], obj["type"], obj.get("depth"))
    raise InvalidSpecError(f"unknown pause event kind {obj['kind']!r}")


def encode_expansion_request(req: ExpansionRequest) -> dict:
    out: dict = {"vertex": req.vertex, "direction": req.direction}
    if req.edge_filter is not None:
        out["edge_filter"] = encode_predicate(req.edge_filter)
    if req.vertex_filter is not None:
        out["vertex_filter"] = encode_predicate(req.vertex_filter)
    if req.limit is not None:
        out["limit"] = req.limit
    return out


def decode_expansion_request(obj: object, *, allow_limit: bool = True) -> ExpansionRequest:
    if not isinstance(obj, dict):
        raise InvalidSpecError("expansion request must be an object")
    allowed = {"vertex", "direction", "edge_filter", "vertex_filter"} | ({"limit"} if allow_limit else set())
    unknown = set(obj.keys()) - allowed
    if unknown:
        raise InvalidSpecError(f"expansion request keys not allowed: {sorted(unknown)}")
    vertex = _opt_int(obj, "vertex")
    if vertex is None:
        raise InvalidSpecError("expansion request needs a vertex")
    direction = obj.get("direction")
    if direction not in ("out", "in", "both"):
        raise InvalidSpecError(f"unknown direction {direction!r}")
    edge_filter = decode_predicate(obj["edge_filter"]) if obj.get("edge_filter") is not None else None
    vertex_filter = decode_predicate(obj["vertex_filter"]) if obj.get("vertex_filter") is not None else None
    return ExpansionRequest(
        vertex=vertex,
        direction=direction,
        edge_filter=edge_filter,
        vertex_filter=vertex_filter,
        limit=_opt_int(obj, "limit"),
    )


def encode_delta(delta: SubgraphDelta) -> dict:
    return {
        "vertices": [{"id": v, "type": t} for v, t in delta.vertices],
        "edges": [
            {"id": e, "type": t, "source": s, "target": g} for e, t, s, g in delta.edges
        ],
        "truncated": delta.truncated,
    }


def encode_fetch_result(result: AttributeFetchResult, *, tags: dict[str, dict[str, str]]) -> dict:
    """Encode fetched values; ``tags`` maps element class to attribute tags."""
    values = []
    for (element_class, row), attrs in result.values.items():
        encoded = {
            name: None if v is None else encode_typed_value(tags[element_class][name], v)
            for name, v in attrs.items()
        }
        values.append({"class": element_class, "id": row, "attrs": encoded})
    warnings = [
        {"class": element_class, "id": row, "reason": reason}
        for element_class, row, reason in result.warnings
    ]
    return {"values": values, "warnings": warnings}


def encode_staleness(stale: list[tuple[str, int, str]]) -> list[dict]:
    return [{"class": c, "id": i, "reason": r} for c, i, r in stale]
