"""HTTP service tests via the in-process ASGI test client.

The preview oracle is the same closed-form semicircle used in the
trajectory tests: start (0,0), heading +x, radius 1, swept +pi ends at
world (0, 2, h/2), so the last center pixel must equal projecting that
point directly.
"""

import math

import pytest
from fastapi.testclient import TestClient

from posetraj.config import ForgeConfig
from posetraj.geom import project_point
from posetraj.service import build_app

CFG = ForgeConfig()


@pytest.fixture(scope="module")
def client():
    return TestClient(build_app(CFG), raise_server_exceptions=False)


SEMICIRCLE = {
    "template": "arc",
    "start": [0.0, 0.0],
    "initial_heading": 0.0,
    "radius": 1.0,
    "swept_angle": math.pi,
    "steps": 200,
    "keyframes": 32,
}


def test_health(client):
    resp = client.get("/v1/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_sample_is_deterministic_and_in_range(client):
    a = client.post("/v1/trajectory/sample", json={"seed": 12})
    b = client.post("/v1/trajectory/sample", json={"seed": 12})
    assert a.status_code == 200
    assert a.content == b.content
    spec = a.json()["spec"]
    assert 1.0 <= spec["radius"] <= 1.5
    assert math.pi / 2 <= abs(spec["swept_angle"]) <= math.pi
    assert spec["template"] in ("arc", "s_curve")


def test_sample_missing_seed_is_400_with_field_errors(client):
    resp = client.post("/v1/trajectory/sample", json={})
    assert resp.status_code == 400
    err = resp.json()["error"]
    assert err["code"] == "invalid_request"
    assert any("seed" in f["loc"] for f in err["fields"])


def test_preview_semicircle_matches_projection_oracle(client):
    resp = client.post("/v1/trajectory/preview",
                       json={"spec": SEMICIRCLE, "box_extents": [1.0, 1.0, 1.0]})
    assert resp.status_code == 200
    frames = resp.json()["keyframes"]
    assert len(frames) == 32
    want, _ = project_point(CFG.camera(), (0.0, 2.0, 0.5))
    got = frames[-1]["center_pixel"]
    assert math.hypot(got[0] - want[0], got[1] - want[1]) < 1e-6
    for f in frames:
        assert len(f["bbox_corners_pixel"]) == 8
        assert len(f["rotation"]) == 4 and len(f["translation"]) == 3


def test_preview_responses_byte_identical(client):
    body = {"spec": SEMICIRCLE}
    a = client.post("/v1/trajectory/preview", json=body)
    b = client.post("/v1/trajectory/preview", json=body)
    assert a.content == b.content


def test_preview_requires_exactly_one_source(client):
    both = {"spec": SEMICIRCLE, "polyline": [[0, 0], [10, 10]]}
    neither = {}
    for body in (both, neither):
        resp = client.post("/v1/trajectory/preview", json=body)
        assert resp.status_code == 400


def test_preview_polyline_yaw_follows_tangent(client):
    # straight pixel path across the floor: all headings equal
    resp = client.post("/v1/trajectory/preview",
                       json={"polyline": [[200.0, 200.0], [400.0, 220.0]],
                             "keyframes": 8})
    assert resp.status_code == 200
    frames = resp.json()["keyframes"]
    assert len(frames) == 8
    headings = [f["heading"] for f in frames]
    assert max(headings) - min(headings) < 1e-9
    # the world track must re-project onto the drawn pixel line
    first = frames[0]["center_pixel"]
    last = frames[-1]["center_pixel"]
    assert math.hypot(first[0] - 200.0, first[1] - 200.0) < 1e-6
    assert math.hypot(last[0] - 400.0, last[1] - 220.0) < 1e-6


def test_preview_polyline_heading_matches_segment_direction(client):
    resp = client.post("/v1/trajectory/preview",
                       json={"polyline": [[288.0, 200.0], [288.0, 120.0]],
                             "keyframes": 4})
    assert resp.status_code == 200
    frames = resp.json()["keyframes"]
    # pixels map to world through the ray cast; tangent computed in world
    dx = frames[-1]["translation"][0] - frames[0]["translation"][0]
    dy = frames[-1]["translation"][1] - frames[0]["translation"][1]
    want = math.atan2(dy, dx)
    for f in frames:
        diff = (f["heading"] - want + math.pi) % (2 * math.pi) - math.pi
        assert abs(diff) < 1e-3


def test_preview_behind_camera_is_422(client):
    # start toward the camera (-y) on a huge arc: the track crosses the
    # camera plane and some keyframe cannot be imaged
    spec = dict(SEMICIRCLE)
    spec["radius"] = 100.0
    spec["initial_heading"] = -math.pi / 2.0
    resp = client.post("/v1/trajectory/preview", json={"spec": spec})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "behind_camera"


def test_preview_zero_length_polyline_rejected(client):
    resp = client.post("/v1/trajectory/preview",
                       json={"polyline": [[10.0, 10.0], [10.0, 10.0]]})
    assert resp.status_code == 422


def test_drag_sample_shape_and_determinism(client):
    body = {"rect": {"x0": 10.0, "y0": 20.0, "x1": 50.0, "y1": 60.0},
            "n": 5, "seed": 7,
            "centers": [[30.0, 40.0], [35.0, 42.0], [41.0, 45.0]]}
    a = client.post("/v1/drag/sample", json=body)
    b = client.post("/v1/drag/sample", json=body)
    assert a.status_code == 200
    assert a.content == b.content
    doc = a.json()
    assert len(doc["initial_points"]) == 5
    assert len(doc["tracks"]) == 5
    for p, track in zip(doc["initial_points"], doc["tracks"]):
        assert 10.0 <= p[0] <= 50.0 and 20.0 <= p[1] <= 60.0
        assert len(track) == 3
        assert track[0] == p
        # rigid displacement along the given centers
        assert track[1][0] - track[0][0] == pytest.approx(5.0)
        assert track[1][1] - track[0][1] == pytest.approx(2.0)


def test_drag_sample_n9_is_400(client):
    body = {"rect": {"x0": 0.0, "y0": 0.0, "x1": 10.0, "y1": 10.0},
            "n": 9, "seed": 0}
    resp = client.post("/v1/drag/sample", json=body)
    assert resp.status_code == 400


def test_drag_sample_empty_rect_is_422(client):
    body = {"rect": {"x0": 10.0, "y0": 0.0, "x1": 10.0, "y1": 10.0},
            "n": 2, "seed": 0}
    resp = client.post("/v1/drag/sample", json=body)
    assert resp.status_code == 422
