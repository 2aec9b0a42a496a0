import json

import pytest
from fastapi.testclient import TestClient

from spiraltension.service import MAX_BODY_BYTES, create_app

SCORE = {
    "title": "demo",
    "beats_per_bar": 4,
    "slices": [
        {"melody": {"midi": 67, "duration_beats": 1}, "chord": ["C", "E", "G"], "downbeat": True},
        {"melody": {"midi": 65, "duration_beats": 1}, "chord": ["F", "A", "C"], "downbeat": False},
        {"melody": {"midi": 62, "duration_beats": 1}, "chord": ["G", "B", "D"], "downbeat": False},
        {"melody": {"midi": 64, "duration_beats": 1}, "chord": ["C", "E", "G"], "downbeat": False},
    ],
}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_analyze_returns_feature_file(client):
    r = client.post("/analyze", json=SCORE)
    assert r.status_code == 200
    doc = r.json()
    assert doc["version"] == 1
    assert doc["length"] == 4
    assert doc["distance"][0] == 0.0
    assert len(doc["melody"]) == 4


def test_recover_round_trip_via_service(client):
    features = client.post("/analyze", json=SCORE).json()
    r = client.post("/recover", json={"features": features})
    assert r.status_code == 200
    out = r.json()
    assert out["total_cost"] < 1e-9
    assert all(v < 1e-9 for v in out["per_step_rd"])
    assert len(out["chords"]) == 4


def test_recover_deterministic(client):
    features = client.post("/analyze", json=SCORE).json()
    body = {"features": features, "beam_width": 4}
    a = client.post("/recover", json=body)
    b = client.post("/recover", json=body)
    assert a.content == b.content


def test_edit_endpoint(client):
    features = client.post("/analyze", json=SCORE).json()
    edits = [{"target": "tension", "op": "scale", "segment": [0, 3], "value": 2.0}]
    r = client.post("/edit", json={"features": features, "edits": edits})
    assert r.status_code == 200
    out = r.json()
    assert out["tension"] == pytest.approx([2 * v for v in features["tension"]])


def test_metrics_endpoint(client):
    features = client.post("/analyze", json=SCORE).json()
    body = {
        "chords": [s["chord"] for s in SCORE["slices"]],
        "melody": features["melody"],
        "target_features": features,
    }
    r = client.post("/metrics", json=body)
    assert r.status_code == 200
    out = r.json()
    assert out["mean_cc"] == pytest.approx(0.75)
    assert out["mctd"] > 0
    assert set(out["srcc"]) <= {"tension", "distance", "strain"}


def test_library_endpoint_with_filter(client):
    r = client.get("/library", params={"min_notes": 3, "max_notes": 3, "quality": "maj,min"})
    assert r.status_code == 200
    out = r.json()
    assert out["count"] == 24
    assert all(e["quality"] in ("maj", "min") for e in out["entries"])


def test_manifest_endpoint(tmp_path):
    manifest = {"feature_ranges": {"tension": [0, 4]}, "norm_stats": {}}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(manifest))
    with TestClient(create_app(manifest_path=str(path))) as with_manifest:
        assert with_manifest.get("/manifest").json() == manifest
    with TestClient(create_app()) as without:
        assert without.get("/manifest").status_code == 404


def test_malformed_body_is_400(client):
    r = client.post("/analyze", content=b"{not json", headers={"content-type": "application/json"})
    assert r.status_code == 400
    assert r.json()["error"] == "malformed_body"


def test_schema_violation_is_422(client):
    r = client.post("/analyze", json={"title": "x", "slices": []})
    assert r.status_code == 422
    bad_tonality = {"features": {"version": 1, "tonality": 99, "tension": [1], "distance": [0], "strain": [1]}}
    assert client.post("/recover", json=bad_tonality).status_code == 422


def test_invariant_violation_is_422(client):
    features = {"version": 1, "tonality": 0, "tension": [1.0], "distance": [0.5], "strain": [1.0]}
    r = client.post("/recover", json={"features": features})
    assert r.status_code == 422


def test_oversized_body_rejected(client):
    blob = b"x" * (MAX_BODY_BYTES + 1)
    r = client.post("/analyze", content=blob, headers={"content-type": "application/json"})
    assert r.status_code == 413
