"""Rasterization of conditioning signals: per-frame trajectory segment
images and 3D bounding-box wireframe overlays.

Lines are drawn with an integer midpoint (Bresenham) walk thickened by
stamping a disk of diameter `stroke` at every lit pixel; all geometry is
clipped so no input, however large, writes outside the buffer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ImageMismatch
from .geom import (BOX_EDGES, Box3, CameraModel, NEAR_PLANE, box_corners)


@dataclass
class Image:
    """8-bit raster buffer, shape (height, width, channels), row-major."""

    width: int
    height: int
    channels: int
    buffer: np.ndarray

    def __post_init__(self):
        if self.channels not in (1, 3):
            raise DomainError("channels must be 1 or 3")
        if self.buffer.dtype != np.uint8:
            raise DomainError("buffer must be uint8")
        if self.buffer.shape != (self.height, self.width, self.channels):
            raise DomainError(
                f"buffer shape {self.buffer.shape} != {(self.height, self.width, self.channels)}")

    @classmethod
    def blank(cls, width: int, height: int, channels: int = 1, fill: int = 0) -> "Image":
        if width <= 0 or height <= 0:
            raise DomainError("image dimensions must be positive")
        buf = np.full((height, width, channels), fill, dtype=np.uint8)
        return cls(width, height, channels, buf)

    def copy(self) -> "Image":
        return Image(self.width, self.height, self.channels, self.buffer.copy())

    def tobytes(self) -> bytes:
        return np.ascontiguousarray(self.buffer).tobytes()


@dataclass(frozen=True)
class PointTrack:
    """Pixel-space trajectory {(x_i, y_i)} for one tracked point."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(p[0]), float(p[1])) for p in self.points)
        if len(pts) == 0:
            raise DomainError("track must contain at least one point")
        if not all(math.isfinite(x) and math.isfinite(y) for x, y in pts):
            raise DomainError("track coordinates must be finite")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


def _iround(v: float) -> int:
    return math.floor(v + 0.5)


def _clip_segment(x0, y0, x1, y1, xmin, ymin, xmax, ymax):
    """Liang-Barsky clip of a float segment to a rectangle; None if outside."""
    dx, dy = x1 - x0, y1 - y0
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, x0 - xmin), (dx, xmax - x0), (-dy, y0 - ymin), (dy, ymax - y0)):
        if p == 0.0:
            if q < 0.0:
                return None
            continue
        t = q / p
        if p < 0.0:
            if t > t1:
                return None
            t0 = max(t0, t)
        else:
            if t < t0:
                return None
            t1 = min(t1, t)
    return (x0 + t0 * dx, y0 + t0 * dy, x0 + t1 * dx, y0 + t1 * dy)


def _line_pixels(x0: int, y0: int, x1: int, y1: int) -> tuple[np.ndarray, np.ndarray]:
    """Bresenham pixel centers from (x0, y0) to (x1, y1) inclusive."""
    xs = [x0]
    ys = [y0]
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while not (x == x1 and y == y1):
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
        xs.append(x)
        ys.append(y)
    return np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64)


@lru_cache(maxsize=64)
def _disk_offsets(stroke: int) -> tuple[tuple[int, int], ...]:
    """Integer offsets whose centers lie within a disk of diameter `stroke`."""
    r = (stroke + 1) // 2
    return tuple((dx, dy)
                 for dy in range(-r, r + 1)
                 for dx in range(-r, r + 1)
                 if 4 * (dx * dx + dy * dy) <= stroke * stroke)


def _draw_segment(buffer: np.ndarray, p0: tuple[float, float], p1: tuple[float, float],
                  stroke: int, color: np.ndarray):
    """Stamp a thick segment into the buffer; every write is bounds-checked."""
    h, w = buffer.shape[:2]
    margin = (stroke + 1) // 2 + 1.0
    clipped = _clip_segment(p0[0], p0[1], p1[0], p1[1],
                            -margin, -margin, w - 1 + margin, h - 1 + margin)
    if clipped is None:
        return
    xs, ys = _line_pixels(_iround(clipped[0]), _iround(clipped[1]),
                          _iround(clipped[2]), _iround(clipped[3]))
    for dx, dy in _disk_offsets(stroke):
        xx = xs + dx
        yy = ys + dy
        keep = (xx >= 0) & (xx < w) & (yy >= 0) & (yy < h)
        if keep.any():
            buffer[yy[keep], xx[keep]] = color


def _check_stroke(stroke: int) -> int:
    if stroke < 1:
        raise DomainError("stroke must be >= 1 pixel")
    return int(stroke)


def _color_array(color, channels: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(color, dtype=np.uint8))
    if arr.shape != (channels,):
        raise ImageMismatch(f"color has {arr.size} channels, image has {channels}")
    return arr


def draw_segment_image(track: PointTrack, i: int, width: int, height: int,
                       stroke: int = 3, cumulative: bool = False) -> Image:
    """Single-channel image of the i-th trajectory segment (1-based).

    Frame i < L holds the segment from point i to point i+1 at value 255;
    frame i = L is the all-zero padding image. With `cumulative`, frame i
    instead holds every segment up to and including i (an ablation mode;
    the last frame stays empty so the padding contract is unchanged).
    """
    stroke = _check_stroke(stroke)
    n = len(track)
    if not 1 <= i <= n:
        raise DomainError(f"frame index {i} outside 1..{n}")
    img = Image.blank(width, height, 1)
    value = np.array([255], dtype=np.uint8)
    if i < n:
        first = 0 if cumulative else i - 1
        for k in range(first, i):
            _draw_segment(img.buffer, track.points[k], track.points[k + 1],
                          stroke, value)
    return img


def draw_bbox_overlay(base: Image, cam: CameraModel, box: Box3, color=(255, 0, 0),
                      stroke: int = 3) -> Image:
    """Copy of `base` with the 12 projected box edges drawn on top.

    Edges with both endpoints behind the camera are skipped; an edge with
    one endpoint behind is clipped to the near plane before projection.
    """
    stroke = _check_stroke(stroke)
    if base.channels != 3:
        raise ImageMismatch("bbox overlay needs a 3-channel base image")
    if (base.width, base.height) != (cam.width, cam.height):
        raise ImageMismatch(
            f"base is {base.width}x{base.height}, camera images {cam.width}x{cam.height}")
    col = _color_array(color, 3)
    cam_pts = [cam.extrinsic.apply(p) for p in box_corners(box)]
    out = base.copy()
    for a, b in BOX_EDGES:
        pa, pb = cam_pts[a], cam_pts[b]
        if pa[2] <= NEAR_PLANE and pb[2] <= NEAR_PLANE:
            continue
        if pa[2] <= NEAR_PLANE or pb[2] <= NEAR_PLANE:
            # parametric intersection with the z = NEAR_PLANE plane
            t = (NEAR_PLANE - pa[2]) / (pb[2] - pa[2])
            cut = tuple(pa[k] + t * (pb[k] - pa[k]) for k in range(3))
            if pa[2] <= NEAR_PLANE:
                pa = cut
            else:
                pb = cut
        px0 = (cam.fx * pa[0] / pa[2] + cam.cx, cam.fy * pa[1] / pa[2] + cam.cy)
        px1 = (cam.fx * pb[0] / pb[2] + cam.cx, cam.fy * pb[1] / pb[2] + cam.cy)
        _draw_segment(out.buffer, px0, px1, stroke, col)
    return out


def draw_track_overlay(base: Image, track: PointTrack, color, stroke: int = 3) -> Image:
    """Copy of `base` with the full track polyline drawn on top."""
    stroke = _check_stroke(stroke)
    col = _color_array(color, base.channels)
    out = base.copy()
    pts = track.points
    if len(pts) == 1:
        _draw_segment(out.buffer, pts[0], pts[0], stroke, col)
        return out
    for k in range(len(pts) - 1):
        _draw_segment(out.buffer, pts[k], pts[k + 1], stroke, col)
    return out
