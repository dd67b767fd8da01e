"""Run configuration: one dataclass, loadable from a JSON file with
`--set key=value` overrides.

Camera placement and intrinsics, stroke widths, and the drawing color are
artifact choices, not ground truth; they live here so they are visible and
overridable.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .geom import CameraModel, look_at_extrinsic

CONFIG_ENV_VAR = "POSETRAJ_CONFIG"


@dataclass
class ForgeConfig:
    root_seed: int = 0
    object_catalog_path: str = "catalog.jsonl"
    output_dir: str = "out"
    samples_per_object: int = 5
    steps: int = 200
    keyframes: int = 32
    training_frames: int = 14
    fps: int = 5
    image_width: int = 576
    image_height: int = 320
    # camera on a ring around the origin, aimed at the origin
    camera_fx: float = 580.0
    camera_fy: float = 580.0
    camera_cx: float = 288.0
    camera_cy: float = 160.0
    camera_ring_radius: float = 4.0
    camera_elevation_deg: float = 30.0
    camera_azimuth_deg: float = 270.0
    # conditioning-signal drawing
    traj_stroke: int = 3
    bbox_stroke: int = 3
    bbox_color: tuple[int, int, int] = (255, 0, 0)
    lambda_spa: float = 1.0
    # scene acceptance
    max_center_step_px: float = 80.0
    max_scene_retries: int = 64
    workers: int = 1
    # per-command knobs (settable via --set)
    stage: str = "stage_one_bbox"
    eval_generated: str = ""
    eval_reference: str = ""
    eval_report: str = ""
    eval_mode: str = "positions"
    preview_seed: int = 0
    preview_out: str = "preview.png"
    serve_host: str = "127.0.0.1"
    serve_port: int = 8731

    def __post_init__(self):
        for name in ("samples_per_object", "steps", "keyframes", "training_frames",
                     "fps", "image_width", "image_height", "traj_stroke", "bbox_stroke",
                     "max_scene_retries", "workers"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.keyframes > self.steps:
            raise ConfigError("keyframes must be <= steps")
        if self.training_frames > self.keyframes:
            raise ConfigError("training_frames must be <= keyframes")

    def camera(self) -> CameraModel:
        """Fixed scene camera built from the ring placement."""
        az = math.radians(self.camera_azimuth_deg)
        el = math.radians(self.camera_elevation_deg)
        eye = (
            self.camera_ring_radius * math.cos(el) * math.cos(az),
            self.camera_ring_radius * math.cos(el) * math.sin(az),
            self.camera_ring_radius * math.sin(el),
        )
        return CameraModel(
            fx=self.camera_fx, fy=self.camera_fy,
            cx=self.camera_cx, cy=self.camera_cy,
            width=self.image_width, height=self.image_height,
            extrinsic=look_at_extrinsic(eye, (0.0, 0.0, 0.0)),
        )


def _coerce(name: str, raw, target):
    if isinstance(target, bool):
        if isinstance(raw, bool):
            return raw
        if str(raw).lower() in ("1", "true", "yes"):
            return True
        if str(raw).lower() in ("0", "false", "no"):
            return False
        raise ConfigError(f"{name}: cannot parse boolean from {raw!r}")
    if isinstance(target, int):
        try:
            return int(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: cannot parse integer from {raw!r}") from exc
    if isinstance(target, float):
        try:
            return float(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: cannot parse number from {raw!r}") from exc
    if isinstance(target, tuple):
        if isinstance(raw, str):
            parts = [p for p in raw.replace(",", " ").split() if p]
        else:
            parts = list(raw)
        if len(parts) != len(target):
            raise ConfigError(f"{name}: expected {len(target)} values")
        return tuple(_coerce(name, p, t) for p, t in zip(parts, target))
    return str(raw)


def load_config(path: str | None = None, sets: list[str] | None = None) -> ForgeConfig:
    """Defaults, optionally merged from a JSON file, then --set overrides.

    With no explicit path the POSETRAJ_CONFIG environment variable names
    the file; if neither is given, defaults apply.
    """
    updates: dict = {}
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path:
        if not Path(path).is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        updates.update(doc)
    for item in sets or []:
        if "=" not in item:
            raise ConfigError(f"--set needs key=value, got {item!r}")
        key, value = item.split("=", 1)
        updates[key.strip()] = value
    # single construction at the end: cross-field invariants must not care
    # what order overrides arrive in
    return _apply(ForgeConfig(), updates)


def _apply(cfg: ForgeConfig, updates: dict) -> ForgeConfig:
    known = {f.name for f in fields(ForgeConfig)}
    values = {f.name: getattr(cfg, f.name) for f in fields(ForgeConfig)}
    for key, raw in updates.items():
        if key not in known:
            raise ConfigError(f"unknown config key: {key}")
        values[key] = _coerce(key, raw, values[key])
    return ForgeConfig(**values)
