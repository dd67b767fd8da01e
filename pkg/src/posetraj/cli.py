"""Command-line entry points.

    posetraj forge|assemble|eval|preview|serve [--config PATH] [--set k=v]...

Exit codes: 0 success, 2 configuration error, 3 I/O or input-data error,
4 scene rejection retries exhausted. Every command is deterministic given
its configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .conditioning import Stage, assemble_condition, camera_track_encode, condition_line_doc
from .config import ForgeConfig, load_config
from .errors import (CameraMiss, ConfigError, EmptyInput, InvalidOverride,
                     MissingCamera, ParseError, SchemaVersionError, ShapeMismatch)
from .evaluate import ingest_tracks, objmc, report_doc, report_table
from .forge import (DatasetManifest, ObjectRecord, center_track, export_scene,
                    forge_scene_counted, frame_bbox_rect, manifest_from_doc,
                    manifest_to_json, read_catalog, scaled_box, scene_to_json)
from .jsonio import load_json
from .raster import Image, draw_bbox_overlay, draw_segment_image, draw_track_overlay
from .seeding import derive_seed


def _write_png(path: Path, image: Image) -> None:
    from PIL import Image as PILImage
    buf = image.buffer[:, :, 0] if image.channels == 1 else image.buffer
    PILImage.fromarray(buf).save(path, format="PNG")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _scene_images(manifest: DatasetManifest, config: ForgeConfig, image_dir: Path) -> None:
    image_dir.mkdir(parents=True, exist_ok=True)
    track = center_track(manifest)
    base = Image.blank(config.image_width, config.image_height, 3)
    for f in manifest.frames:
        i = f.frame_index
        seg = draw_segment_image(track, i, config.image_width, config.image_height,
                                 stroke=config.traj_stroke)
        _write_png(image_dir / f"traj_{i:03d}.png", seg)
        box = scaled_box(manifest.object, manifest.normalization_scale, f.object_pose)
        overlay = draw_bbox_overlay(base, manifest.camera, box,
                                    color=config.bbox_color, stroke=config.bbox_stroke)
        _write_png(image_dir / f"bbox_{i:03d}.png", overlay)


def _forge_one(job, config: ForgeConfig, out: Path):
    seed, obj, scene_id = job
    manifest, rejected = forge_scene_counted(seed, obj, config, scene_id)
    _write_text(out / "manifests" / f"{scene_id}.json", manifest_to_json(manifest))
    _write_text(out / "scenes" / f"{scene_id}.scene.json",
                scene_to_json(export_scene(manifest)))
    _scene_images(manifest, config, out / "images" / scene_id)
    return scene_id, rejected


def cmd_forge(config: ForgeConfig) -> int:
    catalog = read_catalog(config.object_catalog_path)
    out = Path(config.output_dir)
    jobs = []
    for obj in catalog:
        for k in range(config.samples_per_object):
            seed = derive_seed(config.root_seed, obj.object_id, k)
            jobs.append((seed, obj, f"{obj.object_id}-{k:02d}"))

    rejected_total = 0
    done = 0
    if config.workers <= 1:
        results = (_forge_one(job, config, out) for job in jobs)
        for scene_id, rejected in results:
            rejected_total += rejected
            done += 1
            print(f"[{done}/{len(jobs)}] {scene_id} rejected={rejected}")
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for scene_id, rejected in pool.map(
                    lambda job: _forge_one(job, config, out), jobs):
                rejected_total += rejected
                done += 1
                print(f"[{done}/{len(jobs)}] {scene_id} rejected={rejected}")
    print(f"scenes={done} rejected={rejected_total}")
    return 0


def _load_manifests(out: Path) -> list[DatasetManifest]:
    manifest_dir = out / "manifests"
    paths = sorted(manifest_dir.glob("*.json"))
    if not paths:
        raise EmptyInput(f"no manifests under {manifest_dir}")
    return [manifest_from_doc(load_json(p)) for p in paths]


def cmd_assemble(config: ForgeConfig) -> int:
    try:
        stage = Stage(config.stage)
    except ValueError:
        raise ConfigError(f"unknown stage {config.stage!r}; "
                          f"choose from {[s.value for s in Stage]}")
    out = Path(config.output_dir)
    manifests = _load_manifests(out)
    lines = []
    errors = 0
    camera_lines = 0
    for m in manifests:
        frames = m.frames[:config.training_frames]
        rows = camera_track_encode([f.camera_extrinsic for f in frames])
        for f in frames:
            seed = derive_seed(config.root_seed, "camera_drop", m.scene_id, f.frame_index)
            pose = f.camera_extrinsic if stage is Stage.FINETUNE_CAMERA else None
            try:
                cset = assemble_condition(stage, f.frame_index, pose, seed)
            except MissingCamera as exc:
                print(f"error: {m.scene_id} frame {f.frame_index}: {exc}", file=sys.stderr)
                errors += 1
                continue
            row = rows[f.frame_index - 1] if cset.camera_pose is not None else None
            if row is not None:
                camera_lines += 1
            traj_path = f"images/{m.scene_id}/traj_{f.frame_index:03d}.png"
            lines.append(json.dumps(
                condition_line_doc(m.scene_id, stage, cset, traj_path, row),
                sort_keys=True))
    dest = out / f"conditions_{stage.value}.jsonl"
    dest.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    print(f"wrote {dest} lines={len(lines)} camera_lines={camera_lines} errors={errors}")
    return 3 if errors else 0


def _track_files(path_str: str, which: str) -> dict[str, Path]:
    path = Path(path_str)
    if not path_str:
        raise ConfigError(f"eval_{which} is not set")
    if path.is_dir():
        files = {p.name: p for p in sorted(path.glob("*.json"))}
        if not files:
            raise EmptyInput(f"no track files under {path}")
        return files
    if not path.exists():
        raise FileNotFoundError(f"{path} does not exist")
    return {path.name: path}


def cmd_eval(config: ForgeConfig) -> int:
    generated = _track_files(config.eval_generated, "generated")
    reference = _track_files(config.eval_reference, "reference")
    missing = sorted(set(generated) ^ set(reference))
    if missing:
        raise ShapeMismatch(f"unpaired track files: {', '.join(missing)}")
    per_video = {}
    for name in sorted(generated):
        gen = ingest_tracks(generated[name])
        ref = ingest_tracks(reference[name])
        per_video[gen.video_id] = objmc(gen, ref, mode=config.eval_mode)
    doc = report_doc(per_video, config.eval_mode,
                     (config.image_width, config.image_height))
    print(report_table(doc))
    if config.eval_report:
        from .jsonio import write_json
        report_path = Path(config.eval_report)
        report_path.parent.mkdir(parents=True, exist_ok=True)
        write_json(report_path, doc)
        print(f"wrote {report_path}")
    return 0


def cmd_preview(config: ForgeConfig) -> int:
    obj = ObjectRecord("preview", (1.0, 1.0, 1.0), "preview://unit-box")
    manifest, rejected = forge_scene_counted(
        derive_seed(config.root_seed, "preview", config.preview_seed), obj, config,
        scene_id=f"preview-{config.preview_seed}")
    spec = manifest.spec
    print(f"template={spec.template.value} radius={spec.radius:.3f} "
          f"swept_angle={spec.swept_angle:.3f} heading={spec.initial_heading:.3f} "
          f"rejected={rejected}")
    base = Image.blank(config.image_width, config.image_height, 3)
    track = center_track(manifest)
    img = draw_track_overlay(base, track, color=(255, 255, 255),
                             stroke=config.traj_stroke)
    box = scaled_box(manifest.object, manifest.normalization_scale,
                     manifest.frames[0].object_pose)
    img = draw_bbox_overlay(img, manifest.camera, box, color=config.bbox_color,
                            stroke=config.bbox_stroke)
    rect = frame_bbox_rect(manifest)
    print(f"frame-1 bbox: ({rect.x0:.1f},{rect.y0:.1f})-({rect.x1:.1f},{rect.y1:.1f})")
    path = Path(config.preview_out)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    _write_png(path, img)
    print(f"wrote {path}")
    return 0


def cmd_serve(config: ForgeConfig) -> int:
    import uvicorn

    from .service import build_app
    app = build_app(config)
    uvicorn.run(app, host=config.serve_host, port=config.serve_port, log_level="warning")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posetraj",
        description="Deterministic rotational-trajectory dataset forge and evaluation tools.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("forge", "synthesize scenes: manifests, scene exports, conditioning images"),
        ("assemble", "write per-stage conditioning records as JSON lines"),
        ("eval", "score generated tracks against references (ObjMC)"),
        ("preview", "render one sampled trajectory to a PNG"),
        ("serve", "run the local HTTP design service"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config field (repeatable)")
    return parser


_COMMANDS = {
    "forge": cmd_forge,
    "assemble": cmd_assemble,
    "eval": cmd_eval,
    "preview": cmd_preview,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.set)
        return _COMMANDS[args.command](config)
    except (ConfigError, InvalidOverride) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CameraMiss as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (OSError, ParseError, SchemaVersionError, ShapeMismatch, EmptyInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
