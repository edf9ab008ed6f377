"""Tests for the HTTP JSON API using Flask's test client."""
import json

import pytest
from sympy import eye

from curvkit import api_server
from curvkit.api_server import create_app
from curvkit.generators import constant_curvature
from curvkit.instance import serialize_instance
from curvkit.space import make_space


@pytest.fixture
def client():
    app = create_app(max_dim=4)
    app.testing = True
    yield app.test_client()
    app.config["CURVKIT_MAX_DIM"] = None


def post_instance(client, path, space, tensor, **kwargs):
    return client.post(path, data=serialize_instance(space, tensor), content_type="application/json", **kwargs)


def test_index_lists_endpoints(client):
    resp = client.get("/")
    assert resp.status_code == 200
    body = resp.get_data(as_text=True)
    assert "/api/analyze" in body
    assert "above dimension 4" in body


def test_analyze(client, constant_document):
    resp = client.post("/api/analyze", data=constant_document, content_type="application/json")
    assert resp.status_code == 200
    report = resp.get_json()
    assert report["ricci"]["class"] == "einstein(-3)"
    assert "generated_at" in report


def test_verify_flags_non_semisymmetric(client, non_semisymmetric):
    resp = post_instance(client, "/api/verify", non_semisymmetric.space, non_semisymmetric)
    assert resp.status_code == 200
    report = resp.get_json()
    assert report["ok"] is False
    assert report["exit_code"] == 2


def test_verify_ok(client, isotropic_tensor):
    report = post_instance(client, "/api/verify", isotropic_tensor.space, isotropic_tensor).get_json()
    assert report["ok"] is True
    assert report["exit_code"] == 0


def test_jacobi(client, round3):
    result = post_instance(client, "/api/jacobi", round3.space, round3).get_json()
    assert result["holds"]
    assert result["closure_dim"] == 3


def test_bad_json_is_400(client):
    resp = client.post("/api/analyze", data="{not json", content_type="application/json")
    assert resp.status_code == 400
    assert resp.get_json()["kind"] == "ParseError"


def test_float_is_400(client):
    resp = client.post("/api/analyze", data='{"gram": [[1.0]], "tensor": {"matrix": []}}')
    assert resp.status_code == 400


def test_generate_get(client):
    resp = client.get("/api/generate?kind=isotropic&signature=2,1&seed=9")
    assert resp.status_code == 200
    doc = json.loads(resp.get_data(as_text=True))
    assert len(doc["gram"]) == 3
    assert doc["meta"]["generator_spec"]["seed"] == 9


def test_generate_post(client):
    spec = {"kind": "constant", "seed": 1, "params": {"signature": [2, 0], "curvature": "5"}}
    resp = client.post("/api/generate", json=spec)
    assert resp.status_code == 200
    assert json.loads(resp.get_data(as_text=True))["tensor"]["matrix"] == [["5"]]


def test_generate_unknown_kind(client):
    resp = client.get("/api/generate?kind=torus")
    assert resp.status_code == 400
    assert resp.get_json()["kind"] == "SpecInvalid"


def test_dimension_limit(client):
    resp = client.get("/api/generate?kind=constant&signature=4,1")
    assert resp.status_code == 400
    assert resp.get_json()["kind"] == "DimensionLimitExceeded"


def test_oversized_spec_is_never_built(client, monkeypatch):
    built = []
    monkeypatch.setattr(api_server, "generate", lambda spec: built.append(spec))
    resp = client.post("/api/generate", json={"kind": "projected", "params": {"signature": [9, 0]}})
    assert resp.status_code == 400
    assert resp.get_json()["kind"] == "DimensionLimitExceeded"
    assert built == []


def test_generate_bad_seed(client):
    resp = client.get("/api/generate?kind=constant&seed=abc")
    assert resp.status_code == 400
    assert resp.get_json()["kind"] == "InputError"
    assert "seed" in resp.get_json()["error"]


def test_generate_seed_is_clamped(client):
    resp = client.get("/api/generate?kind=isotropic&seed=-5")
    assert resp.status_code == 200
    assert json.loads(resp.get_data(as_text=True))["meta"]["generator_spec"]["seed"] == 0


def test_analyze_dimension_limit():
    app = create_app(max_dim=2)
    app.testing = True
    s = make_space(eye(3))
    try:
        resp = post_instance(app.test_client(), "/api/analyze", s, constant_curvature(s, 1))
        assert resp.status_code == 400
    finally:
        app.config["CURVKIT_MAX_DIM"] = None


def test_cors_header(client, round3):
    resp = post_instance(client, "/api/jacobi", round3.space, round3, headers={"Origin": "http://notebook.example"})
    assert resp.headers.get("Access-Control-Allow-Origin") == "*"
