"""Rotational trajectory sampling and evaluation.

A trajectory is an arc (no turning point) or an S-curve (two arcs of
opposite curvature, one turning point) on the ground plane. The object
slides along the curve with its yaw locked to the curve tangent, so an arc
sweep rotates the object by the swept angle about the arc center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, InvalidOverride
from .geom import Pose, Vec3
from .seeding import make_rng

# Default sampling ranges for the synthetic forge: radius of rotation
# 1..1.5 units, swept angle 90..180 degrees, start inside the unit disk,
# initial heading 0..90 degrees off +x.
RADIUS_RANGE = (1.0, 1.5)
SWEPT_ANGLE_ABS_RANGE = (math.pi / 2.0, math.pi)
INITIAL_HEADING_RANGE = (0.0, math.pi / 2.0)
START_RADIUS_RANGE = (0.0, 1.0)
DEFAULT_STEPS = 200
DEFAULT_KEYFRAMES = 32


class Template(Enum):
    ARC = "arc"
    S_CURVE = "s_curve"


@dataclass(frozen=True)
class TrajectorySpec:
    """Template plus sampled parameters defining one rotational path."""

    template: Template
    start: tuple[float, float]
    initial_heading: float
    radius: float
    swept_angle: float  # signed; positive turns left (counterclockwise)
    steps: int = DEFAULT_STEPS
    keyframes: int = DEFAULT_KEYFRAMES

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError("radius must be positive")
        if self.steps < 2:
            raise DomainError("steps must be >= 2")
        if not (1 <= self.keyframes <= self.steps):
            raise DomainError("keyframes must satisfy 1 <= keyframes <= steps")
        object.__setattr__(self, "start", (float(self.start[0]), float(self.start[1])))


@dataclass(frozen=True)
class SamplerOverrides:
    """Optional replacement bounds for sample_trajectory_spec.

    Each bound is an inclusive (lo, hi) pair; None keeps the default.
    """

    radius: tuple[float, float] | None = None
    swept_angle_abs: tuple[float, float] | None = None
    initial_heading: tuple[float, float] | None = None
    start_radius: tuple[float, float] | None = None
    template: Template | None = None
    turn_sign: int | None = None  # +1 left turn, -1 right turn
    steps: int | None = None
    keyframes: int | None = None


def _checked_bounds(name: str, override, default: tuple[float, float]) -> tuple[float, float]:
    if override is None:
        return default
    try:
        lo, hi = (float(override[0]), float(override[1]))
    except (TypeError, ValueError, IndexError) as exc:
        raise InvalidOverride(f"{name}: bounds must be a (lo, hi) pair") from exc
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidOverride(f"{name}: bounds must be finite")
    if hi < lo:
        raise InvalidOverride(f"{name}: inverted bounds ({lo}, {hi})")
    return lo, hi


def sample_trajectory_spec(rng_seed: int, overrides: SamplerOverrides | None = None) -> TrajectorySpec:
    """Draw one TrajectorySpec, deterministic in the seed.

    Template is a fair coin between arc and S-curve; the start point is
    uniform over the disk by area; all scalar parameters are uniform over
    their (possibly overridden) ranges. The draw order is fixed - template,
    start, heading, radius, sweep magnitude, turn sign - so a seed always
    reproduces the same spec.
    """
    ov = overrides or SamplerOverrides()
    radius_b = _checked_bounds("radius", ov.radius, RADIUS_RANGE)
    sweep_b = _checked_bounds("swept_angle_abs", ov.swept_angle_abs, SWEPT_ANGLE_ABS_RANGE)
    heading_b = _checked_bounds("initial_heading", ov.initial_heading, INITIAL_HEADING_RANGE)
    start_b = _checked_bounds("start_radius", ov.start_radius, START_RADIUS_RANGE)
    if start_b[0] < 0:
        raise InvalidOverride("start_radius: bounds must be non-negative")
    if ov.turn_sign is not None and ov.turn_sign not in (-1, 1):
        raise InvalidOverride("turn_sign: must be -1 or +1")

    rng = make_rng(rng_seed)
    if ov.template is None:
        template = Template.ARC if rng.integers(0, 2) == 0 else Template.S_CURVE
    else:
        template = ov.template
    # area-uniform over the annulus start_b[0] <= r <= start_b[1]
    u = rng.uniform(0.0, 1.0)
    r = math.sqrt(start_b[0] ** 2 + u * (start_b[1] ** 2 - start_b[0] ** 2))
    theta = rng.uniform(0.0, 2.0 * math.pi)
    start = (r * math.cos(theta), r * math.sin(theta))
    heading = rng.uniform(heading_b[0], heading_b[1])
    radius = rng.uniform(radius_b[0], radius_b[1])
    sweep_abs = rng.uniform(sweep_b[0], sweep_b[1])
    if ov.turn_sign is None:
        sign = 1.0 if rng.integers(0, 2) == 0 else -1.0
    else:
        sign = float(ov.turn_sign)
    return TrajectorySpec(
        template=template,
        start=start,
        initial_heading=heading,
        radius=radius,
        swept_angle=sign * sweep_abs,
        steps=ov.steps if ov.steps is not None else DEFAULT_STEPS,
        keyframes=ov.keyframes if ov.keyframes is not None else DEFAULT_KEYFRAMES,
    )


def _arc_state(start: tuple[float, float], heading: float, radius: float,
               swept: float, fraction: float) -> tuple[tuple[float, float], float]:
    """Position/heading after sweeping `fraction` of `swept` along one arc."""
    phi = fraction * swept
    if swept == 0.0:
        return start, heading
    side = math.copysign(1.0, swept)
    cx = start[0] + radius * math.cos(heading + side * math.pi / 2.0)
    cy = start[1] + radius * math.sin(heading + side * math.pi / 2.0)
    dx, dy = start[0] - cx, start[1] - cy
    c, s = math.cos(phi), math.sin(phi)
    return (cx + c * dx - s * dy, cy + s * dx + c * dy), heading + phi


def eval_curve(spec: TrajectorySpec, s: float) -> tuple[tuple[float, float], float]:
    """Position and tangent heading at curve parameter s in [0, 1].

    The parameter is proportional to arc length; total length is
    radius * |swept_angle| for both templates. An S-curve runs two equal
    arcs of opposite curvature, each sweeping half the total angle, joined
    with continuous position and heading at s = 0.5.
    """
    if not (0.0 <= s <= 1.0) or not math.isfinite(s):
        raise DomainError(f"curve parameter {s} outside [0, 1]")
    if spec.template is Template.ARC:
        return _arc_state(spec.start, spec.initial_heading, spec.radius, spec.swept_angle, s)
    if s <= 0.5:
        return _arc_state(spec.start, spec.initial_heading, spec.radius, spec.swept_angle, s)
    mid_pos, mid_heading = _arc_state(
        spec.start, spec.initial_heading, spec.radius, spec.swept_angle, 0.5)
    return _arc_state(mid_pos, mid_heading, spec.radius, -spec.swept_angle, s - 0.5)


def subsample_keyframes(steps: int, keyframes: int) -> tuple[int, ...]:
    """Evenly spaced step indices including the first and last step."""
    if keyframes < 2:
        raise DomainError("keyframes must be >= 2")
    if keyframes > steps:
        raise DomainError("keyframes must be <= steps")
    span = steps - 1
    # floor(x + 0.5) avoids banker's rounding; spacing >= 1 keeps it strict
    return tuple(math.floor(i * span / (keyframes - 1) + 0.5) for i in range(keyframes))


@dataclass(frozen=True)
class PoseTrack:
    """Discrete 6D pose track sampled from a trajectory spec."""

    poses: tuple[Pose, ...]
    center_world: tuple[Vec3, ...]
    spec: TrajectorySpec


def build_pose_track(spec: TrajectorySpec, object_height: float) -> PoseTrack:
    """Evaluate the curve at `steps` uniform parameters and keep `keyframes`.

    Each pose puts the object center at half its height so it rests on the
    floor; yaw equals the curve heading, roll and pitch stay zero.
    """
    if object_height <= 0:
        raise DomainError("object height must be positive")
    indices = subsample_keyframes(spec.steps, spec.keyframes)
    z = object_height / 2.0
    poses = []
    centers = []
    for k in indices:
        s = k / (spec.steps - 1)
        (x, y), heading = eval_curve(spec, s)
        center = (x, y, z)
        poses.append(Pose.from_yaw(heading, center))
        centers.append(center)
    return PoseTrack(tuple(poses), tuple(centers), spec)
