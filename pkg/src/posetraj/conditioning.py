"""Per-stage training-condition assembly, camera-pose dropout, spatial-loss
frame sampling, and reference loss reductions.

The three stages differ only in which initial image the denoiser sees,
whether a camera pose is attached, and which video the reconstruction
targets:

    stage_one_bbox       -> bbox-augmented initial image, no camera,
                            bbox-augmented target video
    stage_two_appearance -> plain initial image, no camera, plain target
    finetune_camera      -> plain initial image, camera kept with
                            probability 1/2 (seeded), plain target

Losses are element means, so values are resolution independent; only the
relative scale matters to a trainer.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, EmptyInput, MissingCamera, NonFinite,
                     ShapeMismatch, UnexpectedCamera)
from .geom import Pose, compose_pose, invert_pose, quat_from_matrix, quat_to_matrix
from .seeding import make_rng


class Stage(enum.Enum):
    STAGE_ONE_BBOX = "stage_one_bbox"
    STAGE_TWO_APPEARANCE = "stage_two_appearance"
    FINETUNE_CAMERA = "finetune_camera"


class InitialImageKind(enum.Enum):
    BBOX_AUGMENTED = "bbox_augmented"
    PLAIN = "plain"


class TargetKind(enum.Enum):
    BBOX_AUGMENTED_VIDEO = "bbox_augmented_video"
    PLAIN_VIDEO = "plain_video"


@dataclass(frozen=True)
class ConditioningSet:
    frame_index: int
    trajectory_image_ref: str
    initial_image_kind: InitialImageKind
    camera_pose: Pose | None
    target_kind: TargetKind


@dataclass(frozen=True)
class LossWeights:
    lambda_spa: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.lambda_spa) and self.lambda_spa >= 0):
            raise DomainError(f"lambda_spa must be >= 0, got {self.lambda_spa}")


def default_trajectory_image_ref(frame_index: int) -> str:
    return f"traj_{frame_index:03d}.png"


def assemble_condition(stage: Stage, frame_index: int,
                       camera_pose: Pose | None, rng_seed: int,
                       trajectory_image_ref: str | None = None) -> ConditioningSet:
    """One conditioning record for frame `frame_index` (1-based).

    A camera pose must be supplied exactly when `stage` is the camera
    finetune stage; there it survives with probability 1/2 under the seeded
    generator, modelling the 50% camera dropout.
    """
    if frame_index < 1:
        raise DomainError(f"frame_index must be >= 1, got {frame_index}")
    if trajectory_image_ref is None:
        trajectory_image_ref = default_trajectory_image_ref(frame_index)

    if stage is Stage.FINETUNE_CAMERA:
        if camera_pose is None:
            raise MissingCamera("camera finetune stage needs a camera pose")
        keep = bool(make_rng(rng_seed).integers(0, 2))
        return ConditioningSet(
            frame_index=frame_index,
            trajectory_image_ref=trajectory_image_ref,
            initial_image_kind=InitialImageKind.PLAIN,
            camera_pose=camera_pose if keep else None,
            target_kind=TargetKind.PLAIN_VIDEO,
        )

    if camera_pose is not None:
        raise UnexpectedCamera(f"{stage.value} takes no camera pose")
    if stage is Stage.STAGE_ONE_BBOX:
        kind, target = InitialImageKind.BBOX_AUGMENTED, TargetKind.BBOX_AUGMENTED_VIDEO
    else:
        kind, target = InitialImageKind.PLAIN, TargetKind.PLAIN_VIDEO
    return ConditioningSet(
        frame_index=frame_index,
        trajectory_image_ref=trajectory_image_ref,
        initial_image_kind=kind,
        camera_pose=None,
        target_kind=target,
    )


def sample_spatial_frame(length: int, rng_seed: int) -> int:
    """Uniform frame index j in 1..length for the spatial enhancement loss."""
    if length < 1:
        raise DomainError(f"frame count must be >= 1, got {length}")
    return int(make_rng(rng_seed).integers(1, length + 1))


def _paired(predicted, target):
    p = np.asarray(predicted, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    if p.shape != t.shape:
        raise ShapeMismatch(f"shape {p.shape} vs {t.shape}")
    if p.size == 0:
        raise EmptyInput("loss over empty arrays")
    return p, t


def loss_mse(predicted, target) -> float:
    """Mean squared difference over all elements (frames folded in)."""
    p, t = _paired(predicted, target)
    return float(np.mean((p - t) ** 2))


def loss_spa(predicted_j, target_j) -> float:
    """Mean squared difference over one sampled frame."""
    p, t = _paired(predicted_j, target_j)
    return float(np.mean((p - t) ** 2))


def loss_total(mse: float, spa: float, w: LossWeights) -> float:
    if not (math.isfinite(mse) and math.isfinite(spa)):
        raise NonFinite(f"loss terms must be finite, got mse={mse} spa={spa}")
    return mse + w.lambda_spa * spa


CameraRow = tuple[float, ...]  # 9 rotation entries row-major + 3 translation


def camera_track_encode(extrinsics) -> tuple[CameraRow, ...]:
    """Encode camera extrinsics relative to frame 1 as 12-real rows.

    Row i is the transform taking frame-1 camera coordinates to frame-i
    camera coordinates, so frame 1 encodes as the identity and the whole
    track is invariant to re-expressing the world in any fixed frame.
    """
    extrinsics = tuple(extrinsics)
    if not extrinsics:
        raise EmptyInput("camera track must not be empty")
    first_inv = invert_pose(extrinsics[0])
    rows = []
    for ext in extrinsics:
        rel = compose_pose(ext, first_inv)
        m = quat_to_matrix(rel.rotation)
        rows.append(tuple(m[0]) + tuple(m[1]) + tuple(m[2]) + tuple(rel.translation))
    return tuple(rows)


def camera_track_decode(rows, first_extrinsic: Pose) -> tuple[Pose, ...]:
    """Inverse of camera_track_encode given the absolute frame-1 pose."""
    poses = []
    for row in rows:
        row = tuple(float(v) for v in row)
        if len(row) != 12:
            raise ShapeMismatch(f"camera row has {len(row)} values, wanted 12")
        m = (row[0:3], row[3:6], row[6:9])
        rel = Pose(quat_from_matrix(m), row[9:12])
        poses.append(compose_pose(rel, first_extrinsic))
    return tuple(poses)


def condition_line_doc(scene_id: str, stage: Stage, cset: ConditioningSet,
                       trajectory_image_path: str,
                       camera_row: CameraRow | None) -> dict:
    """One batch-manifest line as consumed by a downstream trainer."""
    return {
        "stage": stage.value,
        "scene_id": scene_id,
        "frame_index": cset.frame_index,
        "trajectory_image": trajectory_image_path,
        "initial_image_kind": cset.initial_image_kind.value,
        "camera": None if camera_row is None else list(camera_row),
        "target_kind": cset.target_kind.value,
    }
