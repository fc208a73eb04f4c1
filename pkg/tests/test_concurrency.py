import threading
import time

from graphtrail import engine, explore, store
from graphtrail.engine import DriverQuerySpec
from graphtrail.explore import ExpansionRequest
from graphtrail.store import RWLock, Schema


def test_rwlock_readers_share():
    lock = RWLock()
    active = []

    def reader(idx):
        with lock.read_lock():
            active.append(idx)
            time.sleep(0.05)

    threads = [threading.Thread(target=reader, args=(i,)) for i in range(4)]
    start = time.monotonic()
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    # four 50ms readers overlapping should finish well under 200ms serial time
    assert time.monotonic() - start < 0.15
    assert sorted(active) == [0, 1, 2, 3]


def test_rwlock_writer_excludes_readers():
    lock = RWLock()
    order = []

    def writer():
        with lock.write_lock():
            order.append("w-in")
            time.sleep(0.05)
            order.append("w-out")

    def reader():
        with lock.read_lock():
            order.append("r")

    with lock.read_lock():
        w = threading.Thread(target=writer)
        w.start()
        time.sleep(0.02)
        assert "w-in" not in order  # writer waits for the reader
    w.join()
    r = threading.Thread(target=reader)
    r.start()
    r.join()
    assert order == ["w-in", "w-out", "r"]


def test_delete_serializes_against_long_continue():
    n = 120_000
    schema = Schema(vertex_types=["t"], edge_types=["e"], vertex_attrs={"n": "int"})
    vertices = ({"type": "t", "n": i} for i in range(n))
    edges = ({"type": "e", "source": i, "target": i + 1} for i in range(n - 1))
    d = store.load_dataset("big", schema, vertices, edges)
    bp = store.Predicate((store.Conjunct("n", "eq", "int", n - 1),))
    session = engine.create_session(d, DriverQuerySpec(kind="vertex-scan"), [bp])

    versions = []

    def mutate():
        versions.append(store.delete_element(d, "vertex", 0))

    t = threading.Thread(target=mutate)
    started = time.monotonic()
    runner = threading.Thread(target=lambda: engine.continue_session(session))
    runner.start()
    time.sleep(0.01)
    t.start()
    t.join(timeout=10)
    runner.join(timeout=10)
    assert versions == [1]
    assert time.monotonic() - started < 10
    # the scan ran under the reader lock; the matched row was still reported once
    assert session.last_event.kind == "match"


def test_session_status_readable_while_busy(g0, make_client):
    client = make_client({"g0": g0})
    response = client.post("/api/sessions", json={"dataset": "g0", "spec": {"kind": "vertex-scan"}, "breakpoints": []})
    sid = response.json()["data"]["session_id"]
    session = client.app.state.graphtrail.registry.get(sid)
    session.acquire()
    try:
        status = client.get(f"/api/sessions/{sid}")
    finally:
        session.release()
    assert status.status_code == 200
    assert status.json()["data"]["status"] == "created"


def test_default_expansion_cap():
    fan = 1500
    schema = Schema(vertex_types=["hub", "leaf"], edge_types=["spoke"])
    vertices = [{"type": "hub"}] + [{"type": "leaf"} for _ in range(fan)]
    edges = [{"type": "spoke", "source": 0, "target": i + 1} for i in range(fan)]
    d = store.load_dataset("star", schema, vertices, edges)
    session = engine.create_session(d, DriverQuerySpec(kind="vertex-scan"), [])
    delta = explore.expand_neighborhood(session, ExpansionRequest(vertex=0, direction="out"))
    assert len(delta.edges) == explore.DEFAULT_EXPANSION_LIMIT
    assert delta.truncated is True
    assert explore.estimate_expansion(session, ExpansionRequest(vertex=0, direction="out")) == fan
