"""End-to-end CLI tests over a small temporary dataset.

Each test drives posetraj.cli.main() in-process; exit codes follow the
documented convention (0 ok, 2 config, 3 I/O, 4 retries exhausted).
"""

import hashlib
import json
import os
from pathlib import Path

import pytest

from posetraj.cli import main
from posetraj.config import CONFIG_ENV_VAR

CATALOG = [
    {"object_id": "crate", "raw_extents": [1.0, 1.0, 2.0], "mesh_uri": "mesh://crate"},
    {"object_id": "cone", "raw_extents": [0.8, 0.8, 1.6], "mesh_uri": "mesh://cone"},
]


def _write_catalog(path: Path, entries=None):
    entries = entries or CATALOG
    path.write_text("".join(json.dumps(e) + "\n" for e in entries))


def _forge_args(tmp_path: Path, *extra_sets, samples=2):
    catalog = tmp_path / "catalog.jsonl"
    if not catalog.exists():
        _write_catalog(catalog)
    out = tmp_path / "out"
    args = ["forge",
            "--set", f"object_catalog_path={catalog}",
            "--set", f"output_dir={out}",
            "--set", f"samples_per_object={samples}",
            "--set", "keyframes=8", "--set", "steps=64",
            "--set", "training_frames=8",
            "--set", "image_width=144", "--set", "image_height=80",
            "--set", "camera_cx=72", "--set", "camera_cy=40",
            "--set", "camera_fx=145", "--set", "camera_fy=145"]
    for s in extra_sets:
        args += ["--set", s]
    return args, out


def _tree_hash(root: Path) -> str:
    digest = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            digest.update(str(path.relative_to(root)).encode())
            digest.update(path.read_bytes())
    return digest.hexdigest()


@pytest.fixture()
def forged(tmp_path):
    args, out = _forge_args(tmp_path)
    assert main(args) == 0
    return tmp_path, out


# --- forge -------------------------------------------------------------------

def test_forge_writes_expected_tree(forged, capsys):
    _, out = forged
    manifests = sorted(p.name for p in (out / "manifests").glob("*.json"))
    assert manifests == ["cone-00.json", "cone-01.json", "crate-00.json", "crate-01.json"]
    scenes = sorted(p.name for p in (out / "scenes").glob("*.scene.json"))
    assert scenes == ["cone-00.scene.json", "cone-01.scene.json",
                      "crate-00.scene.json", "crate-01.scene.json"]
    for scene_id in ("crate-00", "cone-01"):
        pngs = sorted(p.name for p in (out / "images" / scene_id).glob("*.png"))
        assert len(pngs) == 16  # 8 traj + 8 bbox
        assert "traj_008.png" in pngs and "bbox_001.png" in pngs


def test_forge_summary_line(tmp_path, capsys):
    args, _ = _forge_args(tmp_path)
    assert main(args) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1].startswith("scenes=4 rejected=")


def test_forge_rerun_is_byte_identical(tmp_path):
    args, out = _forge_args(tmp_path)
    assert main(args) == 0
    first = _tree_hash(out)
    assert main(args) == 0
    assert _tree_hash(out) == first


def test_forge_worker_count_does_not_change_bytes(tmp_path):
    args1, out = _forge_args(tmp_path)
    assert main(args1) == 0
    first = _tree_hash(out)
    args8, _ = _forge_args(tmp_path, "workers=8")
    assert main(args8) == 0
    assert _tree_hash(out) == first


def test_forge_traj_padding_frame_is_black(forged):
    import numpy as np
    from PIL import Image as PILImage
    _, out = forged
    last = np.asarray(PILImage.open(out / "images" / "crate-00" / "traj_008.png"))
    assert not last.any()
    some = np.asarray(PILImage.open(out / "images" / "crate-00" / "traj_001.png"))
    assert some.any()


def test_missing_catalog_is_io_error(tmp_path):
    out = tmp_path / "out"
    assert main(["forge", "--set", f"object_catalog_path={tmp_path}/nope.jsonl",
                 "--set", f"output_dir={out}"]) == 3


def test_bad_set_flag_is_config_error(tmp_path):
    assert main(["forge", "--set", "not_a_field=3"]) == 2
    assert main(["forge", "--set", "keyframes"]) == 2
    assert main(["forge", "--set", "keyframes=notanint"]) == 2


def test_invalid_config_value_is_config_error(tmp_path):
    args, _ = _forge_args(tmp_path, "keyframes=0")
    assert main(args) == 2


def test_retries_exhausted_is_exit_4(tmp_path):
    # camera too close to ever keep a unit-height object imageable
    args, _ = _forge_args(tmp_path, "camera_ring_radius=0.2",
                          "camera_elevation_deg=5", "max_scene_retries=3")
    assert main(args) == 4


def test_config_file_and_env_var(tmp_path, monkeypatch):
    catalog = tmp_path / "catalog.jsonl"
    _write_catalog(catalog)
    out = tmp_path / "envout"
    cfg = {"object_catalog_path": str(catalog), "output_dir": str(out),
           "samples_per_object": 1, "keyframes": 4, "steps": 16,
           "training_frames": 4,
           "image_width": 64, "image_height": 48, "camera_cx": 32.0,
           "camera_cy": 24.0, "camera_fx": 64.0, "camera_fy": 64.0}
    cfg_path = tmp_path / "conf.json"
    cfg_path.write_text(json.dumps(cfg))
    monkeypatch.setenv(CONFIG_ENV_VAR, str(cfg_path))
    assert main(["forge"]) == 0
    assert (out / "manifests" / "crate-00.json").exists()
    # explicit --config wins over the environment
    out2 = tmp_path / "cfgout"
    cfg["output_dir"] = str(out2)
    cfg_path2 = tmp_path / "conf2.json"
    cfg_path2.write_text(json.dumps(cfg))
    assert main(["forge", "--config", str(cfg_path2)]) == 0
    assert (out2 / "manifests" / "crate-00.json").exists()


# --- assemble -----------------------------------------------------------------

def _read_jsonl(path: Path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_assemble_stage_one_counts_and_targets(forged):
    tmp_path, out = forged
    args = ["assemble", "--set", f"output_dir={out}",
            "--set", "training_frames=6", "--set", "stage=stage_one_bbox"]
    assert main(args) == 0
    lines = _read_jsonl(out / "conditions_stage_one_bbox.jsonl")
    assert len(lines) == 4 * 6
    assert all(l["target_kind"] == "bbox_augmented_video" for l in lines)
    assert all(l["initial_image_kind"] == "bbox_augmented" for l in lines)
    assert all(l["camera"] is None for l in lines)
    assert lines[0]["trajectory_image"].startswith("images/")


def test_assemble_stage_two_has_no_camera_rows(forged):
    _, out = forged
    args = ["assemble", "--set", f"output_dir={out}",
            "--set", "training_frames=6", "--set", "stage=stage_two_appearance"]
    assert main(args) == 0
    lines = _read_jsonl(out / "conditions_stage_two_appearance.jsonl")
    assert all(l["camera"] is None for l in lines)
    assert all(l["target_kind"] == "plain_video" for l in lines)


def test_assemble_finetune_camera_rows_near_half(forged):
    _, out = forged
    args = ["assemble", "--set", f"output_dir={out}",
            "--set", "training_frames=8", "--set", "stage=finetune_camera"]
    assert main(args) == 0
    lines = _read_jsonl(out / "conditions_finetune_camera.jsonl")
    assert len(lines) == 4 * 8
    with_cam = [l for l in lines if l["camera"] is not None]
    assert 0 < len(with_cam) < len(lines)
    for l in with_cam:
        assert len(l["camera"]) == 12


def test_assemble_rerun_is_deterministic(forged):
    _, out = forged
    args = ["assemble", "--set", f"output_dir={out}",
            "--set", "stage=finetune_camera", "--set", "training_frames=8"]
    assert main(args) == 0
    first = (out / "conditions_finetune_camera.jsonl").read_bytes()
    assert main(args) == 0
    assert (out / "conditions_finetune_camera.jsonl").read_bytes() == first


def test_assemble_unknown_stage_is_config_error(forged):
    _, out = forged
    assert main(["assemble", "--set", f"output_dir={out}",
                 "--set", "stage=stage_three"]) == 2


def test_assemble_without_dataset_is_io_error(tmp_path):
    assert main(["assemble", "--set", f"output_dir={tmp_path}/empty"]) == 3


# --- eval ------------------------------------------------------------------------

def _write_track(path: Path, video_id: str, tracks):
    doc = {"schema_version": 1, "kind": "tracks", "video_id": video_id,
           "fps": 5, "tracks": tracks}
    path.write_text(json.dumps(doc))


def test_eval_prints_table_and_writes_report(tmp_path, capsys):
    gen_dir = tmp_path / "gen"
    ref_dir = tmp_path / "ref"
    gen_dir.mkdir()
    ref_dir.mkdir()
    base = [[[float(k), 0.0] for k in range(14)]]
    moved = [[[float(k) + 3.0, 4.0] for k in range(14)]]
    _write_track(gen_dir / "a.json", "clip-a", moved)
    _write_track(ref_dir / "a.json", "clip-a", base)
    _write_track(gen_dir / "b.json", "clip-b", base)
    _write_track(ref_dir / "b.json", "clip-b", base)
    report = tmp_path / "report.json"
    assert main(["eval", "--set", f"eval_generated={gen_dir}",
                 "--set", f"eval_reference={ref_dir}",
                 "--set", f"eval_report={report}"]) == 0
    table = capsys.readouterr().out
    assert "clip-a" in table and "25.0000" in table
    doc = json.loads(report.read_text())
    assert doc["mean_objmc"] == pytest.approx(12.5)
    assert doc["resolution"] == [576, 320]


def test_eval_unpaired_files_is_error(tmp_path):
    gen_dir = tmp_path / "gen"
    ref_dir = tmp_path / "ref"
    gen_dir.mkdir()
    ref_dir.mkdir()
    _write_track(gen_dir / "a.json", "a", [[[0.0, 0.0]]])
    assert main(["eval", "--set", f"eval_generated={gen_dir}",
                 "--set", f"eval_reference={ref_dir}"]) == 3


def test_eval_missing_path_is_io_error(tmp_path):
    assert main(["eval", "--set", f"eval_generated={tmp_path}/none.json",
                 "--set", f"eval_reference={tmp_path}/none.json"]) == 3


# --- preview -----------------------------------------------------------------------

def test_preview_writes_png_and_is_deterministic(tmp_path, capsys):
    out_png = tmp_path / "preview.png"
    args = ["preview", "--set", f"preview_out={out_png}",
            "--set", "preview_seed=3", "--set", "keyframes=8", "--set", "steps=64",
            "--set", "training_frames=8",
            "--set", "image_width=144", "--set", "image_height=80",
            "--set", "camera_cx=72", "--set", "camera_cy=40",
            "--set", "camera_fx=145", "--set", "camera_fy=145"]
    assert main(args) == 0
    first = out_png.read_bytes()
    assert main(args) == 0
    assert out_png.read_bytes() == first
    assert "template=" in capsys.readouterr().out
