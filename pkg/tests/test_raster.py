"""Rasterization tests.

The line oracle is a dense parametric sampling of the ideal segment: a
pixel is "expected" when some sample rounds into it. Bresenham output must
match that set within one pixel of symmetric difference per the stroke-1
diagonal case; thickened strokes are checked through locality bounds
(every lit pixel near the segment, every far pixel untouched) because the
disk union has no similarly crisp closed form.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetraj.errors import DomainError, ImageMismatch
from posetraj.geom import Box3, CameraModel, Pose
from posetraj.raster import (Image, PointTrack, draw_bbox_overlay,
                             draw_segment_image, draw_track_overlay)
from posetraj.seeding import make_rng

BIG = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def _lit(img: Image):
    ys, xs = np.nonzero(img.buffer[:, :, 0])
    return set(zip(xs.tolist(), ys.tolist()))


def _segment_distance(p, a, b):
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L2))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


# --- Image container -------------------------------------------------------

def test_blank_image_is_zero_and_right_shape():
    img = Image.blank(7, 5, 3)
    assert img.buffer.shape == (5, 7, 3)
    assert not img.buffer.any()
    assert len(img.tobytes()) == 7 * 5 * 3


def test_image_rejects_bad_channel_count():
    with pytest.raises(DomainError):
        Image.blank(4, 4, 2)


def test_point_track_needs_a_point_and_finiteness():
    with pytest.raises(DomainError):
        PointTrack(())
    with pytest.raises(DomainError):
        PointTrack(((0.0, math.nan),))


# --- trajectory segment images ----------------------------------------------

def track_3():
    return PointTrack(((10.0, 10.0), (40.0, 20.0), (40.0, 40.0)))


def test_last_segment_image_is_all_zero():
    img = draw_segment_image(track_3(), 3, 64, 48)
    assert not img.buffer.any()


def test_middle_segment_image_draws_only_that_segment():
    img = draw_segment_image(track_3(), 2, 64, 48, stroke=1)
    lit = _lit(img)
    assert lit, "segment 2 must draw something"
    for x, y in lit:
        assert _segment_distance((x, y), (40.0, 20.0), (40.0, 40.0)) <= 1.5


def test_segment_index_domain():
    with pytest.raises(DomainError):
        draw_segment_image(track_3(), 0, 64, 48)
    with pytest.raises(DomainError):
        draw_segment_image(track_3(), 4, 64, 48)


def test_coincident_endpoints_stamp_a_single_disk():
    track = PointTrack(((20.0, 20.0), (20.0, 20.0)))
    img = draw_segment_image(track, 1, 40, 40, stroke=5)
    lit = _lit(img)
    assert (20, 20) in lit
    for x, y in lit:
        assert math.hypot(x - 20, y - 20) <= 2.5 + 1e-9


def test_diagonal_stroke1_matches_dense_sampling_oracle():
    track = PointTrack(((0.0, 0.0), (10.0, 10.0)))
    img = draw_segment_image(track, 1, 16, 16, stroke=1)
    lit = _lit(img)
    oracle = set()
    for k in range(10001):
        t = k / 10000.0
        oracle.add((math.floor(10.0 * t + 0.5), math.floor(10.0 * t + 0.5)))
    assert len(lit ^ oracle) <= 1


def test_cumulative_mode_accumulates_segments():
    per_step = _lit(draw_segment_image(track_3(), 1, 64, 48)) | _lit(
        draw_segment_image(track_3(), 2, 64, 48))
    cumulative = _lit(draw_segment_image(track_3(), 2, 64, 48, cumulative=True))
    assert cumulative == per_step
    # padding frame stays empty in cumulative mode too
    assert not draw_segment_image(track_3(), 3, 64, 48, cumulative=True).buffer.any()


@given(BIG, BIG, BIG, BIG, st.integers(min_value=1, max_value=9))
@settings(max_examples=400, deadline=None)
def test_fuzzed_segments_never_escape_bounds_and_stay_local(x0, y0, x1, y1, stroke):
    w, h = 32, 24
    img = draw_segment_image(PointTrack(((x0, y0), (x1, y1))), 1, w, h, stroke=stroke)
    assert img.buffer.shape == (h, w, 1)
    reach = stroke / 2.0 + 1.5  # disk radius + rounding slack
    for x, y in _lit(img):
        assert 0 <= x < w and 0 <= y < h
        assert _segment_distance((x, y), (x0, y0), (x1, y1)) <= reach


# --- bbox overlays ----------------------------------------------------------

def _camera(extrinsic=Pose()):
    return CameraModel(fx=60.0, fy=60.0, cx=32.0, cy=24.0, width=64, height=48,
                       extrinsic=extrinsic)


def test_overlay_needs_three_channels_and_matching_size():
    cam = _camera()
    box = Box3((0.5, 0.5, 0.5), Pose(translation=(0.0, 0.0, 3.0)))
    with pytest.raises(ImageMismatch):
        draw_bbox_overlay(Image.blank(64, 48, 1), cam, box)
    with pytest.raises(ImageMismatch):
        draw_bbox_overlay(Image.blank(32, 48, 3), cam, box)


def test_box_fully_behind_camera_leaves_base_untouched():
    cam = _camera()
    base = Image.blank(64, 48, 3)
    base.buffer[10, 10] = (7, 8, 9)
    box = Box3((0.5, 0.5, 0.5), Pose(translation=(0.0, 0.0, -3.0)))
    out = draw_bbox_overlay(base, cam, box)
    assert out.tobytes() == base.tobytes()


def test_box_in_view_draws_inside_corner_hull():
    cam = _camera()
    box = Box3((0.5, 0.5, 0.5), Pose(translation=(0.0, 0.0, 3.0)))
    out = draw_bbox_overlay(Image.blank(64, 48, 3), cam, box, color=(255, 0, 0),
                            stroke=1)
    ys, xs = np.nonzero(out.buffer.any(axis=2))
    assert len(xs) > 0
    # corners project to 32 +/- 60*0.5/z for z in {2.5, 3.5}
    lo_x = 32.0 - 60.0 * 0.5 / 2.5
    hi_x = 32.0 + 60.0 * 0.5 / 2.5
    assert xs.min() >= math.floor(lo_x) - 1 and xs.max() <= math.ceil(hi_x) + 1
    assert (out.buffer[ys, xs] == (255, 0, 0)).all()


def test_partially_behind_box_is_clipped_not_skipped():
    cam = _camera()
    # box straddles the image plane; edges crossing z=0 must still draw
    box = Box3((0.5, 0.5, 2.0), Pose(translation=(0.3, 0.0, 1.5)))
    out = draw_bbox_overlay(Image.blank(64, 48, 3), cam, box)
    assert out.buffer.any()


def test_overlay_does_not_mutate_base():
    cam = _camera()
    base = Image.blank(64, 48, 3)
    box = Box3((0.5, 0.5, 0.5), Pose(translation=(0.0, 0.0, 3.0)))
    draw_bbox_overlay(base, cam, box)
    assert not base.buffer.any()


def test_overlay_locality_far_pixels_unmodified():
    cam = _camera()
    rng = make_rng(3)
    base = Image(64, 48, 3, rng.integers(0, 255, size=(48, 64, 3), dtype=np.uint8))
    box = Box3((0.4, 0.4, 0.4), Pose(translation=(0.0, 0.0, 3.0)))
    stroke = 3
    out = draw_bbox_overlay(base, cam, box, stroke=stroke)
    changed = np.argwhere((out.buffer != base.buffer).any(axis=2))
    assert len(changed) > 0
    # every changed pixel lies within stroke+1 of some projected edge
    corners_px = []
    for i in range(8):
        from posetraj.geom import box_corners, project_point
        px, _ = project_point(cam, box_corners(box)[i])
        corners_px.append(px)
    from posetraj.geom import BOX_EDGES
    for y, x in changed:
        d = min(_segment_distance((x, y), corners_px[a], corners_px[b])
                for a, b in BOX_EDGES)
        assert d <= stroke + 1


# --- track overlays ---------------------------------------------------------

def test_single_point_track_stamps_one_disk():
    base = Image.blank(32, 32, 3)
    out = draw_track_overlay(base, PointTrack(((16.0, 16.0),)), color=(0, 255, 0),
                             stroke=3)
    ys, xs = np.nonzero(out.buffer.any(axis=2))
    assert len(xs) > 0
    assert all(math.hypot(x - 16, y - 16) <= 2.0 for x, y in zip(xs, ys))


def test_track_fully_outside_image_is_a_no_op():
    base = Image.blank(32, 32, 3)
    track = PointTrack(((-500.0, -500.0), (-400.0, -450.0)))
    out = draw_track_overlay(base, track, color=(1, 2, 3))
    assert out.tobytes() == base.tobytes()


def test_track_overlay_equals_union_of_segment_rasters():
    track = PointTrack(((5.0, 5.0), (25.0, 9.0), (12.0, 28.0), (3.0, 18.0)))
    w, h, stroke = 32, 32, 3
    out = draw_track_overlay(Image.blank(w, h, 3), track, color=(9, 9, 9),
                             stroke=stroke)
    union = set()
    for i in range(1, len(track)):
        union |= _lit(draw_segment_image(track, i, w, h, stroke=stroke))
    got = set()
    ys, xs = np.nonzero(out.buffer.any(axis=2))
    got = set(zip(xs.tolist(), ys.tolist()))
    assert got == union


def test_rasterization_is_deterministic():
    track = PointTrack(((1.2, 3.4), (30.9, 21.7)))
    a = draw_segment_image(track, 1, 40, 30, stroke=4).tobytes()
    b = draw_segment_image(track, 1, 40, 30, stroke=4).tobytes()
    assert a == b
