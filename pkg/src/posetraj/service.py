"""Local HTTP service exposing trajectory sampling, preview, and drag-point
sampling to scripts and the browser designer.

All handlers are pure over (request body, immutable config): identical
bodies produce byte-identical responses. Binds loopback by default — this
is a design aid, not a deployment target.
"""

from __future__ import annotations

import dataclasses
import math

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import ForgeConfig
from .errors import BehindCamera, DomainError, PosetrajError
from .forge import MAX_DRAG_POINTS, Rect, displaced_tracks, spec_doc, spec_from_doc
from .geom import (Box3, CameraModel, Pose, box_corners, invert_pose,
                   project_point, quat_yaw, unproject_pixel)
from .trajectory import build_pose_track, sample_trajectory_spec

WIRE_SCHEMA_VERSION = 1


class CameraBody(BaseModel):
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int
    extrinsic_rotation: tuple[float, float, float, float]
    extrinsic_translation: tuple[float, float, float]

    def to_model(self) -> CameraModel:
        return CameraModel(
            fx=self.fx, fy=self.fy, cx=self.cx, cy=self.cy,
            width=self.width, height=self.height,
            extrinsic=Pose(self.extrinsic_rotation, self.extrinsic_translation))


class SampleBody(BaseModel):
    seed: int


class PreviewBody(BaseModel):
    # exactly one of `spec` / `polyline` drives the preview
    spec: dict | None = None
    polyline: list[tuple[float, float]] | None = Field(default=None, min_length=2)
    camera: CameraBody | None = None
    box_extents: tuple[float, float, float] = (1.0, 1.0, 1.0)
    keyframes: int | None = Field(default=None, ge=2)


class RectBody(BaseModel):
    x0: float
    y0: float
    x1: float
    y1: float


class DragBody(BaseModel):
    rect: RectBody
    n: int = Field(ge=1, le=MAX_DRAG_POINTS)
    seed: int
    centers: list[tuple[float, float]] | None = Field(default=None, min_length=1)


def _error_response(status: int, code: str, message: str, fields=None) -> JSONResponse:
    body = {"error": {"code": code, "message": message}}
    if fields is not None:
        body["error"]["fields"] = fields
    return JSONResponse(status_code=status, content=body)


def _resample_polyline(points: list[tuple[float, float]], count: int):
    """Uniform arc-length resampling of a polyline to `count` points."""
    cum = [0.0]
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        cum.append(cum[-1] + math.hypot(x1 - x0, y1 - y0))
    total = cum[-1]
    if total <= 0.0:
        raise DomainError("polyline has zero length")
    out = []
    seg = 0
    for k in range(count):
        target = total * k / (count - 1)
        while seg < len(points) - 2 and cum[seg + 1] < target:
            seg += 1
        span = cum[seg + 1] - cum[seg]
        t = 0.0 if span <= 0.0 else (target - cum[seg]) / span
        x0, y0 = points[seg]
        x1, y1 = points[seg + 1]
        out.append(((x0 + t * (x1 - x0)), (y0 + t * (y1 - y0)), seg))
    return out


def _pixel_to_plane(cam: CameraModel, pixel: tuple[float, float], plane_z: float):
    """Intersect the camera ray through `pixel` with the world plane z = plane_z."""
    eye = invert_pose(cam.extrinsic).translation
    probe = unproject_pixel(cam, pixel, 1.0)
    d = (probe[0] - eye[0], probe[1] - eye[1], probe[2] - eye[2])
    if abs(d[2]) < 1e-12:
        raise BehindCamera("view ray parallel to the ground plane")
    t = (plane_z - eye[2]) / d[2]
    if t <= 0.0:
        raise BehindCamera("ground plane intersection behind the camera")
    return (eye[0] + t * d[0], eye[1] + t * d[1], plane_z)


def _polyline_poses(body: PreviewBody, cam: CameraModel, keyframes: int):
    """World poses along a user-drawn pixel polyline.

    Vertices are cast onto the object's resting plane, resampled uniformly
    by arc length, and yawed along the local tangent.
    """
    plane_z = body.box_extents[2] / 2.0
    world = [_pixel_to_plane(cam, p, plane_z) for p in body.polyline]
    pts2 = [(p[0], p[1]) for p in world]
    samples = _resample_polyline(pts2, keyframes)
    poses = []
    for k, (x, y, seg) in enumerate(samples):
        # tangent from the source segment, so corners stay sharp
        x0, y0 = pts2[seg]
        x1, y1 = pts2[seg + 1]
        yaw = math.atan2(y1 - y0, x1 - x0)
        poses.append(Pose.from_yaw(yaw, (x, y, plane_z)))
    return poses


def _preview_payload(poses, cam: CameraModel, box_extents):
    half = tuple(e / 2.0 for e in box_extents)
    frames = []
    for k, pose in enumerate(poses):
        center_px, _ = project_point(cam, pose.translation)
        corners = []
        for corner in box_corners(Box3(half, pose)):
            px, _ = project_point(cam, corner)
            corners.append([px[0], px[1]])
        frames.append({
            "frame_index": k + 1,
            "rotation": list(pose.rotation),
            "translation": list(pose.translation),
            "center_pixel": [center_px[0], center_px[1]],
            "bbox_corners_pixel": corners,
            "heading": quat_yaw(pose.rotation),
        })
    return frames


def build_app(config: ForgeConfig | None = None) -> FastAPI:
    config = config or ForgeConfig()
    app = FastAPI(title="posetraj", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _invalid_body(request: Request, exc: RequestValidationError):
        fields = [{"loc": [str(p) for p in e["loc"]], "msg": e["msg"]}
                  for e in exc.errors()]
        return _error_response(400, "invalid_request", "request body is invalid", fields)

    @app.exception_handler(BehindCamera)
    async def _behind(request: Request, exc: BehindCamera):
        return _error_response(422, "behind_camera", str(exc))

    @app.exception_handler(PosetrajError)
    async def _domain(request: Request, exc: PosetrajError):
        return _error_response(422, type(exc).__name__.lower(), str(exc))

    @app.get("/v1/health")
    async def health():
        return {"status": "ok"}

    @app.post("/v1/trajectory/sample")
    async def trajectory_sample(body: SampleBody):
        spec = sample_trajectory_spec(body.seed)
        return {"schema_version": WIRE_SCHEMA_VERSION, "spec": spec_doc(spec)}

    @app.post("/v1/trajectory/preview")
    async def trajectory_preview(body: PreviewBody):
        if (body.spec is None) == (body.polyline is None):
            return _error_response(
                400, "invalid_request", "provide exactly one of 'spec' or 'polyline'",
                [{"loc": ["body"], "msg": "exactly one of spec/polyline"}])
        cam = body.camera.to_model() if body.camera else config.camera()
        if body.spec is not None:
            spec = spec_from_doc(body.spec, where="preview.spec")
            if body.keyframes and body.keyframes != spec.keyframes:
                spec = dataclasses.replace(spec, keyframes=body.keyframes)
            poses = build_pose_track(spec, body.box_extents[2]).poses
        else:
            keyframes = body.keyframes or config.keyframes
            poses = _polyline_poses(body, cam, keyframes)
        return {
            "schema_version": WIRE_SCHEMA_VERSION,
            "keyframes": _preview_payload(poses, cam, body.box_extents),
        }

    @app.post("/v1/drag/sample")
    async def drag_sample(body: DragBody):
        rect = Rect(body.rect.x0, body.rect.y0, body.rect.x1, body.rect.y1)
        centers = body.centers or [(0.0, 0.0)]
        dps = displaced_tracks(rect, body.n, body.seed, centers)
        return {
            "schema_version": WIRE_SCHEMA_VERSION,
            "initial_points": [[p[0], p[1]] for p in dps.initial_points],
            "tracks": [[[x, y] for x, y in t.points] for t in dps.tracks],
        }

    return app
