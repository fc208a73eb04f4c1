import random

import pytest

from graphtrail import wire
from graphtrail.engine import DriverQuerySpec, PauseEvent
from graphtrail.errors import InvalidPredicateError, InvalidSpecError
from graphtrail.explore import ExpansionRequest
from graphtrail.store import Conjunct, Predicate

from oracles import random_predicate

AGE_JSON = {"conjuncts": [{"attr": "age", "op": "gt", "value": {"t": "int", "v": 21}}]}


def test_predicate_decode_example():
    p = wire.decode_predicate(AGE_JSON)
    assert p == Predicate((Conjunct("age", "gt", "int", 21),))
    assert wire.encode_predicate(p) == AGE_JSON


def test_empty_predicate_round_trip():
    assert wire.decode_predicate({"conjuncts": []}) == Predicate()
    assert wire.encode_predicate(Predicate()) == {"conjuncts": []}


def test_unknown_operator_names_conjunct():
    bad = {"conjuncts": [{"attr": "age", "op": "like", "value": {"t": "int", "v": 21}}]}
    with pytest.raises(InvalidPredicateError, match="conjunct 0"):
        wire.decode_predicate(bad)


def test_unknown_tag_names_conjunct():
    bad = {"conjuncts": [AGE_JSON["conjuncts"][0], {"attr": "x", "op": "eq", "value": {"t": "date", "v": 1}}]}
    with pytest.raises(InvalidPredicateError, match="conjunct 1"):
        wire.decode_predicate(bad)


def test_value_type_must_match_tag():
    for t, v in (("int", "x"), ("int", True), ("str", 3), ("bool", 1), ("ts", 1.5), ("float", "x")):
        with pytest.raises(InvalidPredicateError):
            wire.decode_predicate({"conjuncts": [{"attr": "a", "op": "eq", "value": {"t": t, "v": v}}]})


def test_float_accepts_int_literal():
    p = wire.decode_predicate({"conjuncts": [{"attr": "a", "op": "eq", "value": {"t": "float", "v": 3}}]})
    assert p.conjuncts[0].value == 3.0 and isinstance(p.conjuncts[0].value, float)


def test_predicate_round_trip_random():
    rng = random.Random(73)
    for _ in range(100):
        p = random_predicate(rng, rng.choice(("vertex", "edge")))
        assert wire.decode_predicate(wire.encode_predicate(p)) == p


def test_spec_round_trip():
    for spec in (
        DriverQuerySpec(kind="vertex-scan"),
        DriverQuerySpec(kind="edge-scan", filter=Predicate((Conjunct("since", "ge", "ts", 5),))),
        DriverQuerySpec(kind="bfs", start=3, direction="both"),
        DriverQuerySpec(kind="dfs", start=0, direction="in", max_depth=2),
    ):
        assert wire.decode_spec(wire.encode_spec(spec)) == spec


def test_spec_decode_rejects_bad_shapes():
    with pytest.raises(InvalidSpecError):
        wire.decode_spec({"kind": "scan"})
    with pytest.raises(InvalidSpecError):
        wire.decode_spec({"kind": "vertex-scan", "start": 0})
    with pytest.raises(InvalidSpecError):
        wire.decode_spec({"kind": "bfs", "direction": "out"})
    with pytest.raises(InvalidSpecError):
        wire.decode_spec({"kind": "bfs", "start": 0, "direction": "sideways"})


def test_pause_event_encoding():
    match = PauseEvent.match("vertex", 1, "person", None)
    assert wire.encode_pause_event(match) == {
        "kind": "match", "class": "vertex", "id": 1, "type": "person", "depth": None,
    }
    assert wire.encode_pause_event(PauseEvent.done("exhausted")) == {"kind": "done", "reason": "exhausted"}
    deep = PauseEvent.match("vertex", 9, "person", 2)
    assert wire.encode_pause_event(deep)["depth"] == 2


def test_pause_event_round_trip():
    for ev in (PauseEvent.match("edge", 4, "knows", None), PauseEvent.match("vertex", 0, "p", 3), PauseEvent.done("depth-bound")):
        assert wire.decode_pause_event(wire.encode_pause_event(ev)) == ev


def test_expansion_request_round_trip():
    rng = random.Random(79)
    for _ in range(50):
        req = ExpansionRequest(
            vertex=rng.randrange(100),
            direction=rng.choice(("out", "in", "both")),
            edge_filter=rng.choice((None, random_predicate(rng, "edge"))),
            vertex_filter=rng.choice((None, random_predicate(rng, "vertex"))),
            limit=rng.choice((None, rng.randint(1, 50))),
        )
        assert wire.decode_expansion_request(wire.encode_expansion_request(req)) == req


def test_expansion_request_estimate_refuses_limit():
    body = {"vertex": 0, "direction": "out", "limit": 5}
    with pytest.raises(InvalidSpecError, match="limit"):
        wire.decode_expansion_request(body, allow_limit=False)
