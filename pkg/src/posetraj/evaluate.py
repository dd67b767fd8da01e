"""Trajectory-following accuracy (ObjMC) and manifest self-consistency
oracles.

ObjMC is the mean over tracks and frames of the squared Euclidean pixel
distance between corresponding generated and reference points; lower is
better. A `displacements` mode compares frame-to-frame motion vectors
instead of positions, for studying how sensitive rankings are to that
reading of "motion tendency".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (BehindCamera, DomainError, EmptyInput, ParseError,
                     SchemaVersionError, ShapeMismatch)
from .forge import DatasetManifest
from .geom import box_corners, project_point
from .jsonio import canonical_json, require
from .raster import PointTrack

TRACKS_SCHEMA_VERSION = 1
OBJMC_MODES = ("positions", "displacements")


@dataclass(frozen=True)
class TrackFile:
    """Point tracks for one video; all tracks share one length."""

    video_id: str
    fps: int
    tracks: tuple[PointTrack, ...]

    def __post_init__(self):
        if not self.tracks:
            raise EmptyInput(f"{self.video_id}: no tracks")
        lengths = {len(t) for t in self.tracks}
        if len(lengths) != 1:
            raise ShapeMismatch(f"{self.video_id}: ragged track lengths {sorted(lengths)}")

    @property
    def length(self) -> int:
        return len(self.tracks[0])


def _stacked(tf: TrackFile) -> np.ndarray:
    return np.array([[p for p in t.points] for t in tf.tracks], dtype=np.float64)


def objmc(generated: TrackFile, reference: TrackFile, mode: str = "positions") -> float:
    """Mean squared pixel distance between corresponding track points."""
    if mode not in OBJMC_MODES:
        raise DomainError(f"mode must be one of {OBJMC_MODES}, got {mode!r}")
    if len(generated.tracks) != len(reference.tracks):
        raise ShapeMismatch(
            f"{len(generated.tracks)} generated tracks vs {len(reference.tracks)} reference")
    if generated.length != reference.length:
        raise ShapeMismatch(
            f"track length {generated.length} vs {reference.length}")
    g = _stacked(generated)
    r = _stacked(reference)
    if mode == "displacements":
        if generated.length < 2:
            raise DomainError("displacements mode needs tracks of length >= 2")
        g = np.diff(g, axis=1)
        r = np.diff(r, axis=1)
    # squared Euclidean distance per point, then mean over tracks and frames
    return float(np.mean(np.sum((g - r) ** 2, axis=2)))


# --- track file I/O --------------------------------------------------------

def tracks_to_doc(tf: TrackFile) -> dict:
    return {
        "schema_version": TRACKS_SCHEMA_VERSION,
        "kind": "tracks",
        "video_id": tf.video_id,
        "fps": tf.fps,
        "tracks": [[[p[0], p[1]] for p in t.points] for t in tf.tracks],
    }


def tracks_to_json(tf: TrackFile) -> str:
    return canonical_json(tracks_to_doc(tf))


def write_tracks(path, tf: TrackFile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(tracks_to_json(tf))


def tracks_from_doc(doc: dict, where: str = "tracks") -> TrackFile:
    version = require(doc, "schema_version", where)
    if version != TRACKS_SCHEMA_VERSION:
        raise SchemaVersionError(f"{where}: schema {version} unsupported")
    video_id = str(require(doc, "video_id", where))
    fps = int(require(doc, "fps", where))
    tracks = []
    for ti, raw in enumerate(require(doc, "tracks", where)):
        points = []
        for fi, pt in enumerate(raw):
            if len(pt) != 2:
                raise ParseError(f"{where}: track {ti} frame {fi + 1}: point needs 2 values")
            x, y = float(pt[0]), float(pt[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ParseError(
                    f"{where}: track {ti} frame {fi + 1}: non-finite coordinate")
            points.append((x, y))
        if not points:
            raise ParseError(f"{where}: track {ti} is empty")
        tracks.append(PointTrack(tuple(points)))
    return TrackFile(video_id=video_id, fps=fps, tracks=tuple(tracks))


def ingest_tracks(path) -> TrackFile:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return tracks_from_doc(doc, where=str(path))


# --- manifest self-check ---------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def manifest_self_check(manifest: DatasetManifest,
                        max_center_step_px: float = 80.0,
                        tol_px: float = 1e-6) -> tuple[CheckResult, ...]:
    """Runnable oracle over a manifest's internal consistency.

    Failures come back as report entries, never exceptions, so the check is
    usable on hand-edited or externally produced manifests.
    """
    from .forge import scaled_box

    checks = []

    n = len(manifest.frames)
    checks.append(CheckResult(
        "keyframe_count", n == manifest.spec.keyframes,
        f"{n} frames, spec says {manifest.spec.keyframes}"))

    worst_center = 0.0
    worst_corner = 0.0
    bad_frame = None
    for f in manifest.frames:
        try:
            px, _ = project_point(manifest.camera, f.object_pose.translation)
        except BehindCamera:
            bad_frame = f.frame_index
            break
        err = math.hypot(px[0] - f.center_pixel[0], px[1] - f.center_pixel[1])
        if err > worst_center:
            worst_center = err
        if f.bbox_corners_pixel is not None:
            box = scaled_box(manifest.object, manifest.normalization_scale, f.object_pose)
            for corner, stored in zip(box_corners(box), f.bbox_corners_pixel):
                try:
                    cpx, _ = project_point(manifest.camera, corner)
                except BehindCamera:
                    bad_frame = f.frame_index
                    break
                cerr = math.hypot(cpx[0] - stored[0], cpx[1] - stored[1])
                if cerr > worst_corner:
                    worst_corner = cerr
            if bad_frame is not None:
                break
    if bad_frame is not None:
        checks.append(CheckResult(
            "reprojection", False, f"frame {bad_frame}: point behind camera"))
    else:
        checks.append(CheckResult(
            "reprojection", worst_center <= tol_px and worst_corner <= tol_px,
            f"max center error {worst_center:.3g}px, max corner error {worst_corner:.3g}px"))

    max_step = 0.0
    for prev, cur in zip(manifest.frames, manifest.frames[1:]):
        step = math.hypot(cur.center_pixel[0] - prev.center_pixel[0],
                          cur.center_pixel[1] - prev.center_pixel[1])
        max_step = max(max_step, step)
    checks.append(CheckResult(
        "center_continuity", max_step <= max_center_step_px,
        f"max per-frame center step {max_step:.2f}px (bound {max_center_step_px:g}px)"))

    indices_ok = all(f.frame_index == k + 1 for k, f in enumerate(manifest.frames))
    checks.append(CheckResult(
        "frame_indices", indices_ok, "1-based and consecutive" if indices_ok
        else "frame_index values out of order"))

    return tuple(checks)


# --- reports ---------------------------------------------------------------

REPORT_SCHEMA_VERSION = 1


def report_doc(per_video: dict[str, float], mode: str,
               resolution: tuple[int, int]) -> dict:
    if not per_video:
        raise EmptyInput("no videos evaluated")
    ordered = sorted(per_video)
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "objmc_report",
        "mode": mode,
        "resolution": [resolution[0], resolution[1]],
        "per_video": [{"video_id": vid, "objmc": per_video[vid]} for vid in ordered],
        "mean_objmc": float(np.mean([per_video[vid] for vid in ordered])),
    }


def report_table(doc: dict) -> str:
    """Fixed-width text table for terminal output."""
    rows = doc["per_video"]
    width = max([len("video_id")] + [len(r["video_id"]) for r in rows])
    lines = [f"{'video_id':<{width}}  {'objmc_px2':>12}"]
    lines.append("-" * (width + 14))
    for r in rows:
        lines.append(f"{r['video_id']:<{width}}  {r['objmc']:>12.4f}")
    lines.append("-" * (width + 14))
    lines.append(f"{'mean':<{width}}  {doc['mean_objmc']:>12.4f}")
    return "\n".join(lines)
