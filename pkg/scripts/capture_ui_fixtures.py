"""Record exact service responses for the frontend test suite.

The designer UI's vitest tests replay these fixtures through a stubbed
fetch, so its assertions (constant headings, reversed semicircle heading,
inline validation errors, byte-exact export) hold against real service
output rather than a hand-rolled fake. Rerun after any wire-format change:

    python scripts/capture_ui_fixtures.py
"""

import json
import math
from pathlib import Path

from fastapi.testclient import TestClient

from posetraj.service import build_app

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "fixtures"

CASES = {
    # two-point horizontal stroke across the image -> constant world heading
    "straight_polyline": ("/v1/trajectory/preview", {
        "polyline": [[120.0, 160.0], [456.0, 160.0]],
        "keyframes": 14,
    }),
    # parametric semicircle: final heading opposite the initial one
    "semicircle_spec": ("/v1/trajectory/preview", {
        "spec": {
            "template": "arc",
            "start": [0.0, 0.0],
            "initial_heading": 0.0,
            "radius": 1.0,
            "swept_angle": math.pi,
            "steps": 200,
            "keyframes": 14,
        },
    }),
    # over the drag-point budget -> 400 with a field location
    "nine_drag_points": ("/v1/drag/sample", {
        "rect": {"x0": 100.0, "y0": 80.0, "x1": 300.0, "y1": 240.0},
        "n": 9,
        "seed": 5,
    }),
    # degenerate stroke -> 422 domain error
    "zero_length_polyline": ("/v1/trajectory/preview", {
        "polyline": [[200.0, 160.0], [200.0, 160.0]],
        "keyframes": 14,
    }),
}


def main():
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    client = TestClient(build_app())
    for name, (path, body) in CASES.items():
        resp = client.post(path, json=body)
        out = {
            "path": path,
            "request": body,
            "status": resp.status_code,
            # exact bytes, so export round-trips can be compared verbatim
            "body_text": resp.content.decode("utf-8"),
        }
        target = FIXTURE_DIR / f"{name}.json"
        target.write_text(json.dumps(out, indent=2) + "\n")
        print(f"{target.name}: {resp.status_code} {len(resp.content)} bytes")


if __name__ == "__main__":
    main()
