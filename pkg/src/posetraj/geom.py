"""SE(3) pose algebra, pinhole camera model, and 3D -> 2D projection.

Conventions, used bit-consistently across the package and all file formats:

* world frame is right-handed and z-up; the ground plane is z = 0
* rotations are unit quaternions stored as (w, x, y, z)
* the camera frame is right-handed with x right, y down, z forward
  (the camera looks down its own +z axis)
* a CameraModel extrinsic is the world-to-camera rigid transform
* pixel (0, 0) is the center of the top-left pixel; pixel x grows right,
  pixel y grows down
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BehindCamera, DomainError

Vec3 = tuple[float, float, float]
Quat = tuple[float, float, float, float]

# Depth below this cannot be imaged; kept slightly above zero so the
# perspective divide never blows up right at the image plane.
NEAR_PLANE = 1e-9


def _quat_normalize(q: Quat) -> Quat:
    w, x, y, z = q
    n = math.sqrt(w * w + x * x + y * y + z * z)
    if n < 1e-12:
        raise DomainError("quaternion norm is ~0; not a rotation")
    return (w / n, x / n, y / n, z / n)


def _quat_mul(a: Quat, b: Quat) -> Quat:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_rotate(q: Quat, v: Vec3) -> Vec3:
    """Rotate a 3-vector by a unit quaternion."""
    w, x, y, z = q
    vx, vy, vz = v
    # t = 2 * (q_vec x v); v' = v + w*t + q_vec x t
    tx = 2.0 * (y * vz - z * vy)
    ty = 2.0 * (z * vx - x * vz)
    tz = 2.0 * (x * vy - y * vx)
    return (
        vx + w * tx + (y * tz - z * ty),
        vy + w * ty + (z * tx - x * tz),
        vz + w * tz + (x * ty - y * tx),
    )


def quat_from_yaw(yaw: float) -> Quat:
    """Rotation by `yaw` radians about world +z."""
    h = 0.5 * yaw
    return (math.cos(h), 0.0, 0.0, math.sin(h))


def quat_yaw(q: Quat) -> float:
    """Continuous yaw of a pure z-rotation quaternion, in (-2pi, 2pi].

    Only meaningful for rotations about +z (the pose tracks built here);
    it deliberately does not wrap, so swept angles beyond pi survive.
    """
    return 2.0 * math.atan2(q[3], q[0])


def quat_to_matrix(q: Quat) -> tuple[Vec3, Vec3, Vec3]:
    """Rows of the 3x3 rotation matrix for a unit quaternion."""
    w, x, y, z = q
    return (
        (1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)),
        (2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)),
        (2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)),
    )


def quat_from_matrix(m: tuple[Vec3, Vec3, Vec3]) -> Quat:
    """Unit quaternion from a 3x3 rotation matrix (Shepperd's method)."""
    m00, m01, m02 = m[0]
    m10, m11, m12 = m[1]
    m20, m21, m22 = m[2]
    tr = m00 + m11 + m22
    if tr > 0.0:
        s = math.sqrt(tr + 1.0) * 2.0
        q = (0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s)
    elif m00 >= m11 and m00 >= m22:
        s = math.sqrt(1.0 + m00 - m11 - m22) * 2.0
        q = ((m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s)
    elif m11 >= m22:
        s = math.sqrt(1.0 + m11 - m00 - m22) * 2.0
        q = ((m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s)
    else:
        s = math.sqrt(1.0 + m22 - m00 - m11) * 2.0
        q = ((m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s)
    return _quat_normalize(q)


@dataclass(frozen=True)
class Pose:
    """SE(3) rigid transform: unit quaternion (w, x, y, z) plus translation.

    Immutable value; the quaternion is renormalized at construction so its
    norm stays within 1e-9 of 1 after any chain of operations.
    """

    rotation: Quat = (1.0, 0.0, 0.0, 0.0)
    translation: Vec3 = (0.0, 0.0, 0.0)

    def __post_init__(self):
        q = _quat_normalize(tuple(float(c) for c in self.rotation))
        t = tuple(float(c) for c in self.translation)
        if len(t) != 3:
            raise DomainError("translation must be a 3-vector")
        if not all(math.isfinite(c) for c in q + t):
            raise DomainError("pose components must be finite")
        object.__setattr__(self, "rotation", q)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "Pose":
        return cls()

    @classmethod
    def from_yaw(cls, yaw: float, translation: Vec3 = (0.0, 0.0, 0.0)) -> "Pose":
        return cls(quat_from_yaw(yaw), translation)

    def apply(self, point: Vec3) -> Vec3:
        rx, ry, rz = quat_rotate(self.rotation, point)
        tx, ty, tz = self.translation
        return (rx + tx, ry + ty, rz + tz)


def compose_pose(a: Pose, b: Pose) -> Pose:
    """Composition a * b: apply b first, then a."""
    q = _quat_mul(a.rotation, b.rotation)
    t = a.apply(b.translation)
    return Pose(q, t)


def invert_pose(p: Pose) -> Pose:
    w, x, y, z = p.rotation
    q_inv = (w, -x, -y, -z)
    tx, ty, tz = quat_rotate(q_inv, p.translation)
    return Pose(q_inv, (-tx, -ty, -tz))


@dataclass(frozen=True)
class CameraModel:
    """Pinhole camera: intrinsics in pixels plus a world-to-camera extrinsic."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int
    extrinsic: Pose = Pose()

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise DomainError("image dimensions must be positive")
        if self.fx <= 0 or self.fy <= 0:
            raise DomainError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise DomainError("principal point must lie inside the image")


def project_point(cam: CameraModel, world_point: Vec3) -> tuple[tuple[float, float], float]:
    """Project a world point; returns ((px, py), depth).

    The pixel may fall outside the image bounds; callers clip. Raises
    BehindCamera when the camera-frame depth is <= NEAR_PLANE.
    """
    x, y, z = cam.extrinsic.apply(world_point)
    if z <= NEAR_PLANE:
        raise BehindCamera(f"camera-frame depth {z:g} <= {NEAR_PLANE:g}")
    return (cam.fx * x / z + cam.cx, cam.fy * y / z + cam.cy), z


def unproject_pixel(cam: CameraModel, pixel: tuple[float, float], depth: float) -> Vec3:
    """World point on the ray through `pixel` at the given camera-frame depth."""
    if depth <= NEAR_PLANE:
        raise DomainError("depth must be positive")
    px, py = pixel
    cam_point = ((px - cam.cx) * depth / cam.fx, (py - cam.cy) * depth / cam.fy, depth)
    return invert_pose(cam.extrinsic).apply(cam_point)


def look_at_extrinsic(eye: Vec3, target: Vec3, up: Vec3 = (0.0, 0.0, 1.0)) -> Pose:
    """World-to-camera pose for a camera at `eye` looking at `target`.

    Uses the x-right / y-down / z-forward camera convention; `up` is the
    world direction that should point toward the top of the image.
    """
    fx, fy, fz = (target[i] - eye[i] for i in range(3))
    n = math.sqrt(fx * fx + fy * fy + fz * fz)
    if n < 1e-12:
        raise DomainError("eye and target coincide")
    fwd = (fx / n, fy / n, fz / n)
    rx = fwd[1] * up[2] - fwd[2] * up[1]
    ry = fwd[2] * up[0] - fwd[0] * up[2]
    rz = fwd[0] * up[1] - fwd[1] * up[0]
    rn = math.sqrt(rx * rx + ry * ry + rz * rz)
    if rn < 1e-12:
        raise DomainError("view direction is parallel to up")
    right = (rx / rn, ry / rn, rz / rn)
    down = (
        fwd[1] * right[2] - fwd[2] * right[1],
        fwd[2] * right[0] - fwd[0] * right[2],
        fwd[0] * right[1] - fwd[1] * right[0],
    )
    q = quat_from_matrix((right, down, fwd))
    # t = -R * eye so that p_cam = R * p_world + t
    rot_eye = quat_rotate(q, eye)
    return Pose(q, (-rot_eye[0], -rot_eye[1], -rot_eye[2]))


@dataclass(frozen=True)
class Box3:
    """Oriented 3D box: positive half extents plus a box-to-world pose."""

    half_extents: Vec3
    pose: Pose = Pose()

    def __post_init__(self):
        h = tuple(float(c) for c in self.half_extents)
        if len(h) != 3 or any(c <= 0 or not math.isfinite(c) for c in h):
            raise DomainError("half extents must be positive and finite")
        object.__setattr__(self, "half_extents", h)


# Corner index convention: bit 0 -> x sign, bit 1 -> y sign, bit 2 -> z sign;
# a set bit selects the positive half extent.
BOX_EDGES: tuple[tuple[int, int], ...] = tuple(
    (i, i | (1 << b)) for i in range(8) for b in range(3) if not i & (1 << b)
)


def box_corners(b: Box3) -> tuple[Vec3, ...]:
    """The 8 world-space corners in the documented binary order."""
    hx, hy, hz = b.half_extents
    corners = []
    for i in range(8):
        local = (
            hx if i & 1 else -hx,
            hy if i & 2 else -hy,
            hz if i & 4 else -hz,
        )
        corners.append(b.pose.apply(local))
    return tuple(corners)
