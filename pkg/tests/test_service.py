from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from guiflow.service import create_app
from guiflow.session import open_session, suggestions


@pytest.fixture
def client(demo_db):
    return TestClient(create_app(demo_db))


def _open(client, assume_launch=True):
    response = client.post("/sessions", json={"assume_launch": assume_launch})
    assert response.status_code == 201
    return response.json()


def test_app_info(client, demo_db):
    body = client.get("/app").json()
    assert body == {"app_id": "demo-app", "version": "1.0", "states": 4, "edges": 7}


def test_open_session_returns_estimate(client):
    body = _open(client)
    assert body["estimate_size"] == 1
    assert body["degraded"] is False
    assert body["session_id"]


def test_suggestions_match_library(client, demo_db):
    body = _open(client)
    http_items = client.get(f"/sessions/{body['session_id']}/suggestions").json()
    lib_items = suggestions(open_session(demo_db, assume_launch=True))
    assert [(i["component"], i["action"]) for i in http_items] == \
        [(s.component, s.action) for s in lib_items]
    assert len(http_items) == 2
    variant = http_items[0]["variants"][0]
    assert variant["screenshot_url"].startswith("/screenshots/")
    assert variant["source_state"] == lib_items[0].variants[0].source_state.short_id


def test_confirm_step_flow(client):
    session_id = _open(client)["session_id"]
    items = client.get(f"/sessions/{session_id}/suggestions").json()
    chk = next(i for i in items if i["component"] == "chkOpt")
    response = client.post(f"/sessions/{session_id}/steps", json={
        "component": "chkOpt", "action": "tap",
        "source_state": chk["variants"][0]["source_state"]})
    assert response.status_code == 200
    assert response.json() == {"estimate_size": 1, "degraded": False}


def test_confirm_not_suggested_is_404(client):
    session_id = _open(client)["session_id"]
    items = client.get(f"/sessions/{session_id}/suggestions").json()
    source = items[0]["variants"][0]["source_state"]
    response = client.post(f"/sessions/{session_id}/steps", json={
        "component": "btnBack", "action": "tap", "source_state": source})
    assert response.status_code == 404


def test_unknown_source_state_is_404(client):
    session_id = _open(client)["session_id"]
    response = client.post(f"/sessions/{session_id}/steps", json={
        "component": "btnGo", "action": "tap", "source_state": "ffffffff"})
    assert response.status_code == 404


def test_fallback_step(client):
    session_id = _open(client)["session_id"]
    response = client.post(f"/sessions/{session_id}/fallback-steps", json={
        "activity": "Main", "component": "btnGo", "action": "tap"})
    assert response.status_code == 200
    assert response.json() == {"estimate_size": 4, "degraded": True}


def test_undo_empty_is_409(client):
    session_id = _open(client)["session_id"]
    assert client.delete(f"/sessions/{session_id}/steps/last").status_code == 409


def test_undo_after_step(client):
    session_id = _open(client)["session_id"]
    items = client.get(f"/sessions/{session_id}/suggestions").json()
    chk = next(i for i in items if i["component"] == "chkOpt")
    client.post(f"/sessions/{session_id}/steps", json={
        "component": "chkOpt", "action": "tap",
        "source_state": chk["variants"][0]["source_state"]})
    response = client.delete(f"/sessions/{session_id}/steps/last")
    assert response.status_code == 200
    assert client.get(f"/sessions/{session_id}/suggestions").json() == items


def test_finalize_and_fetch_report(client, demo_db):
    session_id = _open(client)["session_id"]
    items = client.get(f"/sessions/{session_id}/suggestions").json()
    chk = next(i for i in items if i["component"] == "chkOpt")
    client.post(f"/sessions/{session_id}/steps", json={
        "component": "chkOpt", "action": "tap",
        "source_state": chk["variants"][0]["source_state"]})
    response = client.post(f"/sessions/{session_id}/finalize",
                           json={"title": "Extras toggle", "description": "d"})
    assert response.status_code == 201
    report_id = response.json()["report_id"]

    doc = json.loads(client.get(f"/reports/{report_id}").content)
    assert doc["title"] == "Extras toggle"
    markdown = client.get(f"/reports/{report_id}/markdown")
    assert markdown.status_code == 200
    assert "1. Tap `chkOpt` on `Main`" in markdown.text
    # persisted for restarts
    assert (demo_db.db_dir / "reports" / f"report_{report_id}.json").is_file()


def test_screenshot_passthrough(client, demo_db):
    name = sorted((demo_db.db_dir / "shots").glob("*.ppm"))[0]
    response = client.get(f"/screenshots/{name.name}")
    assert response.status_code == 200
    assert response.content == name.read_bytes()
    assert response.headers["content-type"].startswith("image/x-portable-pixmap")


def test_unknown_ids_are_404(client):
    assert client.get("/sessions/nope/suggestions").status_code == 404
    assert client.get("/reports/nope").status_code == 404
    assert client.get("/screenshots/nope.ppm").status_code == 404


def test_malformed_bodies_are_400(client):
    session_id = _open(client)["session_id"]
    assert client.post("/sessions", json={"assume_launch": ["not", "a", "bool"]}).status_code == 400
    assert client.post(f"/sessions/{session_id}/steps", json={"component": "x"}).status_code == 400
    assert client.post(f"/sessions/{session_id}/finalize", json={}).status_code == 400


def test_empty_title_is_400(client):
    session_id = _open(client)["session_id"]
    client.post(f"/sessions/{session_id}/fallback-steps", json={
        "activity": "Main", "component": "btnGo", "action": "tap"})
    response = client.post(f"/sessions/{session_id}/finalize",
                           json={"title": "", "description": ""})
    assert response.status_code == 400


def test_expired_session_is_410(demo_db):
    now = [0.0]
    app = create_app(demo_db, session_ttl_seconds=10.0, clock=lambda: now[0])
    client = TestClient(app)
    session_id = _open(client)["session_id"]
    assert client.get(f"/sessions/{session_id}/suggestions").status_code == 200
    now[0] = 11.0
    assert client.get(f"/sessions/{session_id}/suggestions").status_code == 410
    # still 410 (not 404) afterwards: the id is known but gone
    assert client.get(f"/sessions/{session_id}/suggestions").status_code == 410


def test_access_refreshes_ttl(demo_db):
    now = [0.0]
    app = create_app(demo_db, session_ttl_seconds=10.0, clock=lambda: now[0])
    client = TestClient(app)
    session_id = _open(client)["session_id"]
    for t in (6.0, 12.0, 18.0):
        now[0] = t
        assert client.get(f"/sessions/{session_id}/suggestions").status_code == 200


def test_finalized_session_is_410(client):
    session_id = _open(client)["session_id"]
    client.post(f"/sessions/{session_id}/fallback-steps", json={
        "activity": "Main", "component": "btnGo", "action": "tap"})
    client.post(f"/sessions/{session_id}/finalize", json={"title": "t", "description": ""})
    response = client.post(f"/sessions/{session_id}/fallback-steps", json={
        "activity": "Main", "component": "btnGo", "action": "tap"})
    assert response.status_code == 410


def test_reports_survive_service_restart(demo_db):
    client = TestClient(create_app(demo_db))
    session_id = _open(client)["session_id"]
    client.post(f"/sessions/{session_id}/fallback-steps", json={
        "activity": "Main", "component": "btnGo", "action": "tap"})
    report_id = client.post(f"/sessions/{session_id}/finalize",
                            json={"title": "survives", "description": ""}).json()["report_id"]
    original = client.get(f"/reports/{report_id}").content

    fresh = TestClient(create_app(demo_db))  # simulated restart over the same db dir
    assert fresh.get(f"/reports/{report_id}").content == original
    assert fresh.get("/sessions/" + session_id + "/suggestions").status_code == 404
