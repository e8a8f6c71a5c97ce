"""HTTP endpoints, exercised in process through the test client."""

from __future__ import annotations

from fastapi.testclient import TestClient

from ddcheck.service import app
from systems import (
    FAN_COUNTEREXAMPLE_TRS,
    GROUND_LINEAR_TRS,
    RATIONAL_ARS,
    fan_counterexample_certificate,
    ground_linear_certificate,
)

client = TestClient(app)


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_check_accept():
    response = client.post(
        "/check", json={"trs": GROUND_LINEAR_TRS, "certificate": ground_linear_certificate()}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "accept"
    assert body["exit_code"] == 0


def test_check_reject_with_offending_terms():
    response = client.post(
        "/check", json={"trs": FAN_COUNTEREXAMPLE_TRS, "certificate": fan_counterexample_certificate()}
    )
    body = response.json()
    assert body["status"] == "reject"
    assert body["reason"] == "fan-violation"
    assert {"fun": "g", "args": [{"fun": "a", "args": []}]} in body["offending"]


def test_check_parse_error_is_error_verdict():
    response = client.post("/check", json={"trs": "(RULES a ->", "certificate": ground_linear_certificate()})
    body = response.json()
    assert body["status"] == "error"
    assert body["exit_code"] == 2
    assert body["reason"] == "parse"


def test_check_schema_error_is_error_verdict():
    response = client.post("/check", json={"trs": GROUND_LINEAR_TRS, "certificate": {"mode": "nope"}})
    assert response.json()["status"] == "error"


def test_critical_peaks_endpoint():
    response = client.post("/critical-peaks", json={"trs": FAN_COUNTEREXAMPLE_TRS})
    assert response.status_code == 200
    peaks = response.json()["peaks"]
    assert len([p for p in peaks if not p["trivial"]]) == 4
    assert all("rendered" in p for p in peaks)


def test_critical_peaks_bad_input():
    response = client.post("/critical-peaks", json={"trs": "(RULES"})
    assert response.status_code == 422


def test_prove_endpoint_found():
    response = client.post("/prove", json={"trs": GROUND_LINEAR_TRS, "depth": 2})
    body = response.json()
    assert body["found"] is True
    cert = body["certificate"]
    assert cert["mode"] == "linear-rl"
    again = client.post("/check", json={"trs": GROUND_LINEAR_TRS, "certificate": cert})
    assert again.json()["status"] == "accept"


def test_prove_endpoint_not_found():
    response = client.post("/prove", json={"trs": FAN_COUNTEREXAMPLE_TRS})
    assert response.json() == {"found": False, "certificate": None}


def test_prove_endpoint_rejects_bad_mode():
    response = client.post("/prove", json={"trs": GROUND_LINEAR_TRS, "mode": "zigzag"})
    assert response.status_code == 422


def test_ars_check_endpoint():
    response = client.post("/ars/check", json={"ars": RATIONAL_ARS})
    body = response.json()
    assert body["decreasing"] is True
    assert body["confluent"] is True
    assert all(peak["decreasing"] for peak in body["peaks"])


def test_ars_check_bad_input():
    response = client.post("/ars/check", json={"ars": "only words"})
    assert response.status_code == 422
