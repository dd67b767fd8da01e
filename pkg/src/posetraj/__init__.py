"""Deterministic forge and evaluation harness for rotational object
trajectories with 6D pose tracks, pixel-space conditioning signals, and
trajectory-accuracy scoring."""

from .config import ForgeConfig, load_config
from .errors import (BehindCamera, CameraMiss, ConfigError, DegenerateObject,
                     DomainError, EmptyInput, ImageMismatch, InvalidOverride,
                     MissingCamera, NonFinite, ParseError, PosetrajError,
                     SchemaVersionError, ShapeMismatch, UnexpectedCamera)
from .geom import (Box3, CameraModel, Pose, box_corners, compose_pose,
                   invert_pose, look_at_extrinsic, project_point, unproject_pixel)
from .trajectory import (PoseTrack, SamplerOverrides, Template, TrajectorySpec,
                         build_pose_track, eval_curve, sample_trajectory_spec,
                         subsample_keyframes)
from .raster import (Image, PointTrack, draw_bbox_overlay, draw_segment_image,
                     draw_track_overlay)
from .forge import (DatasetManifest, DragPointSet, FrameAnnotation,
                    ObjectRecord, Rect, export_scene, forge_scene,
                    ingest_scene, manifest_from_doc, manifest_to_json,
                    normalize_object, sample_drag_points)
from .conditioning import (ConditioningSet, InitialImageKind, LossWeights,
                           Stage, TargetKind, assemble_condition,
                           camera_track_decode, camera_track_encode, loss_mse,
                           loss_spa, loss_total, sample_spatial_frame)
from .evaluate import TrackFile, ingest_tracks, manifest_self_check, objmc, write_tracks

__version__ = "0.1.0"
