from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from app.main import app
from tests.conftest import SQUARE_FIXTURE


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


def test_healthz(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_functions_listing(client):
    listing = {item["name"]: item for item in client.get("/api/functions").json()}
    assert listing["I"]["citation"] == "def:i-function"
    assert listing["ellipse_axes"]["outputs"] == ["a", "b"]


def test_eval(client):
    response = client.post("/api/eval", json={"function": "I", "args": ["0.6624"]})
    assert response.status_code == 200
    body = response.json()
    lo, hi = body["values"]["value"]
    assert lo <= hi
    assert body["citation"] == "def:i-function"


def test_eval_names_each_output(client):
    body = client.post("/api/eval", json={"function": "ellipse_axes", "args": ["1", "0.5"]}).json()
    assert set(body) == {"function", "values", "citation"}
    assert set(body["values"]) == {"a", "b"}


def test_eval_errors(client):
    assert client.post("/api/eval", json={"function": "nope"}).status_code == 404
    assert client.post("/api/eval", json={"function": "F", "args": ["0.7"]}).status_code == 422
    assert client.post("/api/eval", json={"args": ["0.7"]}).status_code == 422


def test_gate_listing(client):
    gate_ids = {item["gate_id"] for item in client.get("/api/gates").json()}
    assert {"bilip", "upward", "cone-def"} <= gate_ids


def test_gate_report(client):
    response = client.post("/api/gates/bilip", json={"params": {"delta": "0.5", "ell": "0.01"}})
    assert response.status_code == 200
    report = response.json()
    assert report["status"] == "Certified"
    assert set(report["quantities"]) == {"ell", "J"}


def test_gate_errors(client):
    domain = client.post("/api/gates/bilip", json={"params": {"delta": "1.0", "ell": "0.01"}})
    assert domain.status_code == 422
    assert client.post("/api/gates/nope", json={"params": {}}).status_code == 404


def test_cosmetic(client):
    response = client.post("/api/cosmetic", json=dict(SQUARE_FIXTURE, knot=True))
    assert response.status_code == 200
    body = response.json()
    assert [0, 1] in body["s1"]
    assert "knot_pairs" in body
    assert len(body["pairs"]) == len(body["s1"]) * len(body["s2"]) - len(body["s1"])


def test_cosmetic_requires_volumes(client):
    payload = {"cusps": SQUARE_FIXTURE["cusps"], "sys": 0.2}
    response = client.post("/api/cosmetic", json=payload)
    assert response.status_code == 422
    assert "required" in response.json()["detail"]


def test_tasks_listing(client):
    tasks = {item["task_id"] for item in client.get("/api/tasks").json()}
    assert "delta_cut_bracket" in tasks


def test_verify(client, ledger_path):
    response = client.post("/api/verify/delta_cut_bracket")
    assert response.status_code == 200
    assert response.json()["status"] == "Verified"
    assert ledger_path.exists()
    assert client.post("/api/verify/nope").status_code == 404
