import threading
import time

import pytest

from graphtrail import store
from graphtrail.store import Schema

from oracles import build_schema

AGE_BP = {"conjuncts": [{"attr": "age", "op": "gt", "value": {"t": "int", "v": 21}}]}
EMPTY = {"conjuncts": []}


@pytest.fixture
def client(g0, make_client):
    return make_client({"g0": g0})


def create_scan(client, breakpoints=(AGE_BP,), dataset="g0"):
    response = client.post(
        "/api/sessions",
        json={"dataset": dataset, "spec": {"kind": "vertex-scan", "filter": EMPTY}, "breakpoints": list(breakpoints)},
    )
    assert response.status_code == 201, response.text
    return response.json()["data"]["session_id"]


# -- envelope & routing ---------------------------------------------------------


def test_create_session_created(client):
    response = client.post("/api/sessions", json={"dataset": "g0", "spec": {"kind": "vertex-scan"}, "breakpoints": []})
    assert response.status_code == 201
    body = response.json()
    assert body["ok"] is True and body["data"]["session_id"]


def test_unknown_session_404(client):
    response = client.post("/api/sessions/XYZ/continue")
    assert response.status_code == 404
    assert response.json()["error"]["code"] == "unknown_session"


def test_unknown_dataset_404(client):
    response = client.post("/api/sessions", json={"dataset": "nope", "spec": {"kind": "vertex-scan"}})
    assert response.status_code == 404
    assert response.json()["error"]["code"] == "unknown_dataset"


def test_unknown_route_enveloped(client):
    response = client.get("/api/nothing")
    assert response.status_code == 404
    body = response.json()
    assert body["ok"] is False and "error" in body


def test_malformed_json_is_invalid_spec(client):
    response = client.post("/api/sessions", content=b"{nope", headers={"content-type": "application/json"})
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "invalid_spec"


def test_invalid_predicate_code(client):
    bad = {"conjuncts": [{"attr": "age", "op": "like", "value": {"t": "int", "v": 1}}]}
    response = client.post("/api/sessions", json={"dataset": "g0", "spec": {"kind": "vertex-scan"}, "breakpoints": [bad]})
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "invalid_predicate"


def test_error_codes_closed_set(client):
    codes = set()
    codes.add(client.post("/api/sessions/XYZ/continue").json()["error"]["code"])
    codes.add(client.post("/api/sessions", json={"dataset": "x", "spec": {"kind": "vertex-scan"}}).json()["error"]["code"])
    codes.add(client.get("/api/bookmarks/b9").json()["error"]["code"])
    allowed = {
        "unknown_session", "unknown_dataset", "unknown_bookmark", "invalid_spec", "invalid_predicate",
        "dead_element", "session_busy", "session_terminal", "dangling_edge", "io_error",
    }
    assert codes <= allowed


# -- session flow -----------------------------------------------------------------


def test_scan_sequence_over_http(client):
    sid = create_scan(client)
    seen = []
    while True:
        data = client.post(f"/api/sessions/{sid}/continue").json()["data"]
        if data["kind"] == "done":
            seen.append(("done", data["reason"]))
            break
        seen.append((data["class"], data["id"]))
    assert seen == [("vertex", 1), ("vertex", 2), ("vertex", 3), ("done", "exhausted")]


def test_status_endpoint(client):
    sid = create_scan(client)
    status = client.get(f"/api/sessions/{sid}").json()["data"]
    assert status == {"status": "created", "records_processed": 0, "last_event": None}
    client.post(f"/api/sessions/{sid}/continue")
    status = client.get(f"/api/sessions/{sid}").json()["data"]
    assert status["status"] == "paused" and status["records_processed"] == 2
    assert status["last_event"]["id"] == 1


def test_stop_endpoint(client):
    sid = create_scan(client)
    assert client.post(f"/api/sessions/{sid}/stop").json()["data"] == {"status": "stopped"}
    response = client.post(f"/api/sessions/{sid}/continue")
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "session_terminal"


def test_delete_endpoint_and_dead_element(client):
    response = client.post("/api/datasets/g0/elements:delete", json={"class": "vertex", "id": 2})
    assert response.json()["data"] == {"version": 1}
    again = client.post("/api/datasets/g0/elements:delete", json={"class": "vertex", "id": 2})
    assert again.status_code == 410
    assert again.json()["error"]["code"] == "dead_element"


def test_expand_and_estimate_endpoints(client):
    sid = create_scan(client)
    delta = client.post(f"/api/sessions/{sid}/expand", json={"vertex": 0, "direction": "out"}).json()["data"]
    assert [e["id"] for e in delta["edges"]] == [0, 2]
    assert delta["truncated"] is False
    count = client.post(f"/api/sessions/{sid}/estimate", json={"vertex": 0, "direction": "out"}).json()["data"]
    assert count == {"count": 2}
    capped = client.post(f"/api/sessions/{sid}/expand", json={"vertex": 0, "direction": "out", "limit": 1}).json()["data"]
    assert capped["truncated"] is True and len(capped["edges"]) == 1


def test_attributes_endpoint_with_warning(client):
    sid = create_scan(client)
    client.post("/api/datasets/g0/elements:delete", json={"class": "vertex", "id": 4})
    body = {"elements": [{"class": "vertex", "id": 1}, {"class": "vertex", "id": 4}], "names": ["age"]}
    data = client.post(f"/api/sessions/{sid}/attributes", json=body).json()["data"]
    assert data["values"] == [{"class": "vertex", "id": 1, "attrs": {"age": {"t": "int", "v": 25}}}]
    assert data["warnings"] == [{"class": "vertex", "id": 4, "reason": "deleted"}]


def test_endpoints_endpoint(client):
    sid = create_scan(client)
    data = client.post(f"/api/sessions/{sid}/edge/3/endpoints").json()["data"]
    assert data == {"source": {"id": 2, "type": "person"}, "target": {"id": 3, "type": "person"}}


def test_bookmark_lifecycle_over_http(client):
    sid = create_scan(client)
    payload = {
        "vertices": [{"id": 1, "type": "person", "attrs": {"age": {"t": "int", "v": 25}}}],
        "edges": [],
    }
    stored = client.post(f"/api/sessions/{sid}/bookmarks", json={"payload": payload, "description": "hit"})
    assert stored.status_code == 201
    bid = stored.json()["data"]["id"]
    listing = client.get(f"/api/bookmarks?session={sid}").json()["data"]
    assert [m["id"] for m in listing] == [bid]
    assert client.get("/api/bookmarks?session=sX").json()["data"] == []
    full = client.get(f"/api/bookmarks/{bid}").json()["data"]
    assert list(full.keys()) == ["id", "created_at", "description", "dataset", "dataset_version", "vertices", "edges"]
    restored = client.post(f"/api/sessions/{sid}/bookmarks/{bid}/restore").json()["data"]
    assert restored["payload"] == payload and restored["staleness"] == []
    client.post("/api/datasets/g0/elements:delete", json={"class": "vertex", "id": 1})
    restored = client.post(f"/api/sessions/{sid}/bookmarks/{bid}/restore").json()["data"]
    assert restored["staleness"] == [{"class": "vertex", "id": 1, "reason": "deleted"}]


def test_dangling_payload_rejected(client):
    sid = create_scan(client)
    payload = {"vertices": [], "edges": [{"id": 1, "type": "knows", "source": 1, "target": 2, "attrs": {}}]}
    response = client.post(f"/api/sessions/{sid}/bookmarks", json={"payload": payload, "description": None})
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "dangling_edge"


# -- reads are stateless -----------------------------------------------------------


def test_get_never_advances_anything(client):
    sid = create_scan(client)
    client.post(f"/api/sessions/{sid}/continue")
    snapshots = [client.get(f"/api/sessions/{sid}").content for _ in range(3)]
    assert len(set(snapshots)) == 1
    datasets = [client.get("/api/datasets").content for _ in range(2)]
    assert datasets[0] == datasets[1]
    bookmarks = [client.get("/api/bookmarks").content for _ in range(2)]
    assert bookmarks[0] == bookmarks[1]


# -- per-session serialization ------------------------------------------------------


def test_busy_flag_rejects_second_request(client, g0, make_client):
    sid = create_scan(client)
    from graphtrail import engine  # grab the live session and hold its slot

    session = client.app.state.graphtrail.registry.get(sid)
    session.acquire()
    try:
        response = client.post(f"/api/sessions/{sid}/continue")
    finally:
        session.release()
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "session_busy"


def test_busy_flag_under_real_concurrency(make_client):
    # a scan long enough that the second request lands mid-flight
    n = 400_000
    schema = Schema(vertex_types=["t"], edge_types=[], vertex_attrs={"n": "int"})
    d = store.load_dataset("big", schema, ({"type": "t", "n": i} for i in range(n)), [])
    client = make_client({"big": d})
    bp = {"conjuncts": [{"attr": "n", "op": "eq", "value": {"t": "int", "v": n - 1}}]}
    response = client.post("/api/sessions", json={"dataset": "big", "spec": {"kind": "vertex-scan"}, "breakpoints": [bp]})
    sid = response.json()["data"]["session_id"]

    codes = []

    def slow_continue():
        codes.append(client.post(f"/api/sessions/{sid}/continue").status_code)

    t = threading.Thread(target=slow_continue)
    t.start()
    time.sleep(0.05)
    second = client.post(f"/api/sessions/{sid}/continue")
    t.join()
    assert codes == [200]
    assert second.status_code == 409
    assert second.json()["error"]["code"] == "session_busy"
