"""Scene synthesis: object normalization, trajectory assignment, camera
placement, and per-keyframe annotation, folded into deterministic dataset
manifests and scene descriptions for an external photoreal renderer.

Scene content is a pure function of (seed, object, config). When a sampled
trajectory leaves the object center unimageable, or makes it jump more than
the configured per-frame pixel bound, the scene is rejected and resampled
from a deterministic retry sub-seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BehindCamera, CameraMiss, DegenerateObject, DomainError, ParseError, SchemaVersionError
from .config import ForgeConfig
from .geom import Box3, CameraModel, Pose, Vec3, project_point
from .jsonio import canonical_json, finite_floats, require
from .raster import PointTrack
from .seeding import derive_seed, make_rng
from .trajectory import (SamplerOverrides, Template, TrajectorySpec,
                         build_pose_track, sample_trajectory_spec)

MANIFEST_SCHEMA_VERSION = 1
SCENE_SCHEMA_VERSION = 1
MAX_DRAG_POINTS = 8


@dataclass(frozen=True)
class ObjectRecord:
    """Catalog entry; the mesh itself stays an opaque URI for the renderer."""

    object_id: str
    raw_extents: Vec3
    mesh_uri: str

    def __post_init__(self):
        ext = tuple(float(c) for c in self.raw_extents)
        if len(ext) != 3 or any(c <= 0 or not math.isfinite(c) for c in ext):
            raise DomainError(f"{self.object_id}: raw extents must be positive")
        object.__setattr__(self, "raw_extents", ext)


@dataclass(frozen=True)
class FrameAnnotation:
    frame_index: int  # 1-based, matching the i = 1..L convention
    object_pose: Pose
    center_pixel: tuple[float, float]
    bbox_corners_pixel: tuple[tuple[float, float], ...] | None
    camera_extrinsic: Pose


@dataclass(frozen=True)
class DatasetManifest:
    scene_id: str
    seed: int
    object: ObjectRecord
    normalization_scale: float
    spec: TrajectorySpec
    camera: CameraModel
    frames: tuple[FrameAnnotation, ...]
    fps: int = 5


@dataclass(frozen=True)
class Rect:
    """Axis-aligned pixel rectangle with positive area."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise DomainError("rectangle must have positive width and height")


@dataclass(frozen=True)
class DragPointSet:
    """n sparse drag points plus their tracks along the center trajectory."""

    initial_points: tuple[tuple[float, float], ...]
    tracks: tuple[PointTrack, ...]


def normalize_object(raw_extents: Vec3) -> float:
    """Scale factor that normalizes the object height (z extent) to 1 unit."""
    height = float(raw_extents[2])
    if height < 1e-12:
        raise DegenerateObject(f"object height {height:g} too small to normalize")
    return 1.0 / height


def scaled_box(obj: ObjectRecord, scale: float, pose: Pose) -> Box3:
    ex, ey, ez = obj.raw_extents
    return Box3((ex * scale / 2.0, ey * scale / 2.0, ez * scale / 2.0), pose)


def forge_scene(seed: int, obj: ObjectRecord, config: ForgeConfig,
                scene_id: str | None = None) -> DatasetManifest:
    """Forge one scene; deterministic in (seed, object, config).

    Raises CameraMiss after `max_scene_retries` rejected trajectory samples.
    """
    return forge_scene_counted(seed, obj, config, scene_id)[0]


def forge_scene_counted(seed: int, obj: ObjectRecord, config: ForgeConfig,
                        scene_id: str | None = None) -> tuple[DatasetManifest, int]:
    """forge_scene plus the number of samples rejected along the way."""
    scale = normalize_object(obj.raw_extents)
    height = obj.raw_extents[2] * scale  # exactly 1.0
    camera = config.camera()
    overrides = SamplerOverrides(steps=config.steps, keyframes=config.keyframes)
    if scene_id is None:
        scene_id = f"{obj.object_id}-{seed & 0xFFFFFFFFFFFFFFFF:016x}"

    last_reason = "no attempt made"
    for attempt in range(config.max_scene_retries):
        spec = sample_trajectory_spec(derive_seed(seed, attempt), overrides)
        track = build_pose_track(spec, height)
        frames = _annotate_track(track, obj, scale, camera, config)
        if isinstance(frames, str):
            last_reason = frames
            continue
        manifest = DatasetManifest(
            scene_id=scene_id,
            seed=seed,
            object=obj,
            normalization_scale=scale,
            spec=spec,
            camera=camera,
            frames=tuple(frames),
            fps=config.fps,
        )
        return manifest, attempt
    raise CameraMiss(
        f"scene {scene_id}: rejected {config.max_scene_retries} samples (last: {last_reason})")


def _annotate_track(track, obj: ObjectRecord, scale: float, camera: CameraModel,
                    config: ForgeConfig):
    """Per-keyframe annotations, or a rejection-reason string."""
    frames = []
    prev_center = None
    for k, pose in enumerate(track.poses):
        try:
            center_px, _ = project_point(camera, pose.translation)
        except BehindCamera:
            return f"center behind camera at keyframe {k + 1}"
        if prev_center is not None:
            step = math.hypot(center_px[0] - prev_center[0], center_px[1] - prev_center[1])
            if step > config.max_center_step_px:
                return f"center jumps {step:.1f}px at keyframe {k + 1}"
        prev_center = center_px
        corners_px = _project_corners(camera, scaled_box(obj, scale, pose))
        frames.append(FrameAnnotation(
            frame_index=k + 1,
            object_pose=pose,
            center_pixel=center_px,
            bbox_corners_pixel=corners_px,
            camera_extrinsic=camera.extrinsic,
        ))
    return frames


def _project_corners(camera: CameraModel, box: Box3):
    from .geom import box_corners
    pixels = []
    for corner in box_corners(box):
        try:
            px, _ = project_point(camera, corner)
        except BehindCamera:
            return None
        pixels.append(px)
    return tuple(pixels)


def center_track(manifest: DatasetManifest) -> PointTrack:
    return PointTrack(tuple(f.center_pixel for f in manifest.frames))


def frame_bbox_rect(manifest: DatasetManifest, frame_index: int = 1) -> Rect:
    """Axis-aligned rectangle around a frame's projected box corners."""
    frame = manifest.frames[frame_index - 1]
    if frame.bbox_corners_pixel is None:
        raise DomainError(f"frame {frame_index} has no projected bbox")
    xs = [p[0] for p in frame.bbox_corners_pixel]
    ys = [p[1] for p in frame.bbox_corners_pixel]
    return Rect(min(xs), min(ys), max(xs), max(ys))


def sample_drag_points(manifest: DatasetManifest, frame_1_bbox_2d: Rect, n: int,
                       rng_seed: int) -> DragPointSet:
    """n points uniform in the rectangle, dragged along the center track.

    Every track is the rigid offset of the center trajectory through its
    initial point, so per-frame displacements match the center's exactly.
    """
    if not 1 <= n <= MAX_DRAG_POINTS:
        raise DomainError(f"n must be in 1..{MAX_DRAG_POINTS}, got {n}")
    centers = [f.center_pixel for f in manifest.frames]
    return _displace_points(frame_1_bbox_2d, n, rng_seed, centers)


def displaced_tracks(rect: Rect, n: int, rng_seed: int,
                     centers: list[tuple[float, float]]) -> DragPointSet:
    """sample_drag_points for a bare center track (no manifest required)."""
    if not 1 <= n <= MAX_DRAG_POINTS:
        raise DomainError(f"n must be in 1..{MAX_DRAG_POINTS}, got {n}")
    if len(centers) < 1:
        raise DomainError("center track must not be empty")
    return _displace_points(rect, n, rng_seed, centers)


def _displace_points(rect: Rect, n: int, rng_seed: int, centers) -> DragPointSet:
    rng = make_rng(rng_seed)
    c1 = centers[0]
    # offsets computed once so frame 1 is exactly the initial point
    offsets = [(c[0] - c1[0], c[1] - c1[1]) for c in centers]
    points = []
    tracks = []
    for _ in range(n):
        px = rng.uniform(rect.x0, rect.x1)
        py = rng.uniform(rect.y0, rect.y1)
        points.append((px, py))
        tracks.append(PointTrack(tuple(
            (px + dx, py + dy) for dx, dy in offsets)))
    return DragPointSet(tuple(points), tuple(tracks))


# --- serialization ---------------------------------------------------------

def _pose_doc(p: Pose) -> dict:
    return {"rotation": list(p.rotation), "translation": list(p.translation)}


def _pose_from_doc(doc: dict, where: str) -> Pose:
    q = finite_floats(require(doc, "rotation", where), where)
    t = finite_floats(require(doc, "translation", where), where)
    if len(q) != 4 or len(t) != 3:
        raise ParseError(f"{where}: pose needs 4 rotation and 3 translation values")
    return Pose(tuple(q), tuple(t))


def _camera_doc(cam: CameraModel) -> dict:
    return {
        "fx": cam.fx, "fy": cam.fy, "cx": cam.cx, "cy": cam.cy,
        "width": cam.width, "height": cam.height,
        "extrinsic": _pose_doc(cam.extrinsic),
    }


def _camera_from_doc(doc: dict, where: str) -> CameraModel:
    return CameraModel(
        fx=float(require(doc, "fx", where)), fy=float(require(doc, "fy", where)),
        cx=float(require(doc, "cx", where)), cy=float(require(doc, "cy", where)),
        width=int(require(doc, "width", where)), height=int(require(doc, "height", where)),
        extrinsic=_pose_from_doc(require(doc, "extrinsic", where), where),
    )


def spec_doc(spec: TrajectorySpec) -> dict:
    return {
        "template": spec.template.value,
        "start": list(spec.start),
        "initial_heading": spec.initial_heading,
        "radius": spec.radius,
        "swept_angle": spec.swept_angle,
        "steps": spec.steps,
        "keyframes": spec.keyframes,
    }


def spec_from_doc(doc: dict, where: str = "trajectory") -> TrajectorySpec:
    template_raw = require(doc, "template", where)
    try:
        template = Template(template_raw)
    except ValueError as exc:
        raise ParseError(f"{where}: unknown template {template_raw!r}") from exc
    start = finite_floats(require(doc, "start", where), where)
    if len(start) != 2:
        raise ParseError(f"{where}: start must be a 2-vector")
    return TrajectorySpec(
        template=template,
        start=(start[0], start[1]),
        initial_heading=float(require(doc, "initial_heading", where)),
        radius=float(require(doc, "radius", where)),
        swept_angle=float(require(doc, "swept_angle", where)),
        steps=int(require(doc, "steps", where)),
        keyframes=int(require(doc, "keyframes", where)),
    )


def manifest_to_doc(m: DatasetManifest) -> dict:
    return {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "kind": "manifest",
        "scene_id": m.scene_id,
        "seed": m.seed,
        "fps": m.fps,
        "object": {
            "object_id": m.object.object_id,
            "raw_extents": list(m.object.raw_extents),
            "mesh_uri": m.object.mesh_uri,
        },
        "normalization_scale": m.normalization_scale,
        "trajectory": spec_doc(m.spec),
        "camera": _camera_doc(m.camera),
        "frames": [
            {
                "frame_index": f.frame_index,
                "object_pose": _pose_doc(f.object_pose),
                "center_pixel": list(f.center_pixel),
                "bbox_corners_pixel": (
                    None if f.bbox_corners_pixel is None
                    else [list(p) for p in f.bbox_corners_pixel]),
                "camera_extrinsic": _pose_doc(f.camera_extrinsic),
            }
            for f in m.frames
        ],
    }


def manifest_to_json(m: DatasetManifest) -> str:
    return canonical_json(manifest_to_doc(m))


def manifest_from_doc(doc: dict) -> DatasetManifest:
    where = "manifest"
    version = require(doc, "schema_version", where)
    if version != MANIFEST_SCHEMA_VERSION:
        raise SchemaVersionError(f"manifest schema {version} unsupported")
    obj_doc = require(doc, "object", where)
    obj = ObjectRecord(
        object_id=str(require(obj_doc, "object_id", "object")),
        raw_extents=tuple(finite_floats(require(obj_doc, "raw_extents", "object"), "object")),
        mesh_uri=str(require(obj_doc, "mesh_uri", "object")),
    )
    frames = []
    for idx, fdoc in enumerate(require(doc, "frames", where)):
        fwhere = f"frames[{idx}]"
        corners = fdoc.get("bbox_corners_pixel")
        if corners is not None:
            corners = tuple(
                tuple(finite_floats(p, fwhere)) for p in corners)
            if len(corners) != 8:
                raise ParseError(f"{fwhere}: expected 8 bbox corners")
        center = finite_floats(require(fdoc, "center_pixel", fwhere), fwhere)
        frames.append(FrameAnnotation(
            frame_index=int(require(fdoc, "frame_index", fwhere)),
            object_pose=_pose_from_doc(require(fdoc, "object_pose", fwhere), fwhere),
            center_pixel=(center[0], center[1]),
            bbox_corners_pixel=corners,
            camera_extrinsic=_pose_from_doc(require(fdoc, "camera_extrinsic", fwhere), fwhere),
        ))
    return DatasetManifest(
        scene_id=str(require(doc, "scene_id", where)),
        seed=int(require(doc, "seed", where)),
        object=obj,
        normalization_scale=float(require(doc, "normalization_scale", where)),
        spec=spec_from_doc(require(doc, "trajectory", where)),
        camera=_camera_from_doc(require(doc, "camera", where), "camera"),
        frames=tuple(frames),
        fps=int(require(doc, "fps", where)),
    )


def export_scene(m: DatasetManifest) -> dict:
    """Scene-description document for the external photoreal renderer."""
    return {
        "schema_version": SCENE_SCHEMA_VERSION,
        "kind": "scene",
        "scene_id": m.scene_id,
        "fps": m.fps,
        "object": {
            "object_id": m.object.object_id,
            "mesh_uri": m.object.mesh_uri,
            "raw_extents": list(m.object.raw_extents),
        },
        "normalization_scale": m.normalization_scale,
        "camera": _camera_doc(m.camera),
        "keyframes": [
            {
                "frame_index": f.frame_index,
                "rotation": list(f.object_pose.rotation),
                "translation": list(f.object_pose.translation),
            }
            for f in m.frames
        ],
    }


def scene_to_json(doc: dict) -> str:
    return canonical_json(doc)


def ingest_scene(text: str) -> dict:
    """Parse and validate a scene description; inverse of export+render."""
    import json as _json
    try:
        doc = _json.loads(text)
    except _json.JSONDecodeError as exc:
        raise ParseError(f"scene: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    where = "scene"
    version = require(doc, "schema_version", where)
    if version != SCENE_SCHEMA_VERSION:
        raise SchemaVersionError(f"scene schema {version} unsupported")
    if require(doc, "kind", where) != "scene":
        raise ParseError("scene: kind must be 'scene'")
    _camera_from_doc(require(doc, "camera", where), "scene.camera")
    for idx, kf in enumerate(require(doc, "keyframes", where)):
        kwhere = f"scene.keyframes[{idx}]"
        q = finite_floats(require(kf, "rotation", kwhere), kwhere)
        t = finite_floats(require(kf, "translation", kwhere), kwhere)
        if len(q) != 4 or len(t) != 3:
            raise ParseError(f"{kwhere}: bad pose arity")
    return doc


def read_catalog(path) -> list[ObjectRecord]:
    """Object catalog: JSON lines, one record per line."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            import json as _json
            try:
                doc = _json.loads(line)
            except _json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: {exc.msg}") from exc
            where = f"{path}:{lineno}"
            records.append(ObjectRecord(
                object_id=str(require(doc, "object_id", where)),
                raw_extents=tuple(finite_floats(require(doc, "raw_extents", where), where)),
                mesh_uri=str(require(doc, "mesh_uri", where)),
            ))
    if not records:
        raise ParseError(f"{path}: catalog is empty")
    return records
