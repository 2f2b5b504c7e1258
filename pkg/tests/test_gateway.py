"""Gateway endpoints: snapshots, command turns, metrics, event stream."""

import json

import pytest
from fastapi.testclient import TestClient

from fuzzyarm.benchmark import table_scene
from fuzzyarm.gateway import EventBus, Session, create_app
from fuzzyarm.pipeline import mock_adapters


@pytest.fixture()
def client():
    scene = table_scene(0, seed=42)
    session = Session(scene, mock_adapters())
    return TestClient(create_app(session))


def sse_events(response_text):
    events = []
    for line in response_text.splitlines():
        if line.startswith("data: "):
            events.append(json.loads(line[len("data: "):]))
    return events


def test_scene_snapshot(client):
    snap = client.get("/scene").json()
    assert snap["frame"] == [1280, 720]
    assert "apple" in snap["objects"]
    assert snap["held"] is None


def test_metrics_empty_before_any_turn(client):
    assert client.get("/metrics").json() == {"n_trials": 0}


def test_command_runs_full_turn(client):
    resp = client.post("/command", json={"text": "grab the apple"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["record"]["a_total"] == 100
    assert body["scene"]["held"] == "apple"
    assert body["actions"] == [{"method": "pick_up", "args": ["apple"]}]
    metrics = client.get("/metrics").json()
    assert metrics["n_trials"] == 1


def test_action_json_accepted(client):
    resp = client.post("/command", json={"actions": [{"method": "pick_up", "args": ["lemon"]}]})
    assert resp.status_code == 200
    assert resp.json()["scene"]["held"] == "lemon"


def test_raw_action_text_accepted(client):
    resp = client.post("/command", json={"text": "[pick_up(orange)]"})
    assert resp.status_code == 200
    assert resp.json()["scene"]["held"] == "orange"


def test_invalid_action_text_rejected_with_position(client):
    resp = client.post("/command", json={"text": "[pick_up(apple"})
    assert resp.status_code == 422
    detail = resp.json()["detail"]
    assert "offset" in detail
    assert isinstance(detail["offset"], int)


def test_unknown_method_rejected_with_violations(client):
    resp = client.post("/command", json={"text": "[fly_to(moon)]"})
    assert resp.status_code == 422
    assert "violations" in resp.json()["detail"]


def test_empty_command_rejected(client):
    assert client.post("/command", json={"text": "  "}).status_code == 422
    assert client.post("/command", json={}).status_code == 422


def test_event_stream_replays_stage_sequence(client):
    client.post("/command", json={"text": "grab the apple"})
    with client.stream("GET", "/events", params={"replay": True, "follow": False}) as resp:
        text = "".join(resp.iter_text())
    events = sse_events(text)
    stages = [(e["stage"], e["status"]) for e in events if e["type"] == "stage"]
    assert stages == [
        ("stt", "running"), ("stt", "ok"),
        ("ae", "running"), ("ae", "ok"),
        ("od", "running"), ("od", "ok"),
        ("ra", "running"), ("ra", "ok"),
    ]
    trajectory = [e for e in events if e["type"] == "trajectory"]
    assert len(trajectory) >= 2
    # Monotone iteration counter within the servo run.
    iters = [e["iteration"] for e in trajectory]
    assert all(b >= a for a, b in zip(iters, iters[1:])) or len(set(iters)) > 1


def test_unreachable_object_reports_failures(client):
    resp = client.post("/command", json={"text": "grab the banana"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["record"]["a_total"] == 0
    assert body["failures"][0]["reason"] == "object not detected"


def test_event_bus_drop_oldest():
    bus = EventBus()
    q = bus.subscribe()
    from fuzzyarm.gateway import SUBSCRIBER_HIGH_WATER

    for i in range(SUBSCRIBER_HIGH_WATER + 5):
        bus.publish({"type": "x", "i": i})
    assert q.qsize() <= SUBSCRIBER_HIGH_WATER + 1
    first = q.get_nowait()
    assert first["i"] > 0  # oldest were dropped


def test_busy_error_returns_409():
    scene = table_scene(0, seed=1)
    session = Session(scene, mock_adapters())
    app = create_app(session)
    client = TestClient(app)
    session._busy.acquire()
    try:
        resp = client.post("/command", json={"text": "grab the apple"})
        assert resp.status_code == 409
    finally:
        session._busy.release()
