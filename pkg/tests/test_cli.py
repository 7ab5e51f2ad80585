from __future__ import annotations

import json
import shutil

import pytest

from choreokit.cli import main
from conftest import SAMPLE_LIBRARY, SAMPLE_SCENES, SAMPLE_TOURS


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_sample_library(capsys):
    code, out, _ = run(capsys, "validate", str(SAMPLE_LIBRARY))
    assert code == 0
    report = json.loads(out)
    assert report["ok"] is True
    assert report["counts"]["gestures"] == 42


def test_validate_dangling_ref_exit_1(capsys, tmp_path):
    library = tmp_path / "library"
    shutil.copytree(SAMPLE_LIBRARY, library)
    doc = json.loads((library / "visuals.json").read_text())
    doc["visuals"][0]["learning_point_id"] = "lp-ghost"
    (library / "visuals.json").write_text(json.dumps(doc))

    code, out, _ = run(capsys, "validate", str(library))
    assert code == 1
    report = json.loads(out)
    assert report["ok"] is False
    assert any("lp-ghost" in e["message"] for e in report["errors"])


def test_validate_missing_directory_exit_2(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", str(tmp_path / "nothing"))
    assert code == 2
    assert json.loads(out)["ok"] is False


def test_compile_writes_three_files_and_reports(capsys, tmp_path):
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "compile", str(SAMPLE_LIBRARY),
                       str(SAMPLE_TOURS / "intro-3.json"), "--out", str(out_dir))
    assert code == 0
    assert sorted(p.name for p in out_dir.iterdir()) == [
        "gestures.json", "narration.json", "visuals.json"]
    assert "total duration" in out
    assert "fdm-printer" in out
    assert "coverage: clean" in out


def test_compile_deterministic_bytes(capsys, tmp_path):
    for name in ("a", "b"):
        code, _, _ = run(capsys, "compile", str(SAMPLE_LIBRARY),
                         str(SAMPLE_TOURS / "intro-3.json"),
                         "--out", str(tmp_path / name))
        assert code == 0
    for name in ("narration.json", "visuals.json", "gestures.json"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()


def test_compile_zero_device_tour_fails(capsys, tmp_path):
    tour = tmp_path / "tour.json"
    tour.write_text(json.dumps({"devices": []}))
    code, _, err = run(capsys, "compile", str(SAMPLE_LIBRARY), str(tour),
                       "--out", str(tmp_path / "out"))
    assert code == 2
    assert "at least one device" in err
    assert not (tmp_path / "out").exists()


def test_compile_variant_selection(capsys, tmp_path):
    code, out, _ = run(capsys, "compile", str(SAMPLE_LIBRARY),
                       str(SAMPLE_TOURS / "intro-3.json"),
                       "--out", str(tmp_path / "v2"), "--variant", "v2")
    assert code == 0
    assert "variant 'v2'" in out
    narration = json.loads((tmp_path / "v2" / "narration.json").read_text())
    assert narration["variant"] == "v2"


def test_compile_unknown_variant(capsys, tmp_path):
    code, _, err = run(capsys, "compile", str(SAMPLE_LIBRARY),
                       str(SAMPLE_TOURS / "intro-3.json"),
                       "--out", str(tmp_path / "out"), "--variant", "v99")
    assert code == 1
    assert "no variant" in err


def test_simulate_zero_jitter_clean(capsys, tmp_path):
    out_dir = tmp_path / "out"
    run(capsys, "compile", str(SAMPLE_LIBRARY),
        str(SAMPLE_TOURS / "intro-3.json"), "--out", str(out_dir))
    code, out, _ = run(capsys, "simulate", str(out_dir),
                       "--out", str(tmp_path / "trace.json"))
    assert code == 0
    assert (tmp_path / "trace.json").exists()
    report = json.loads(out.split("\n", 1)[1])
    assert report["ok"] is True
    assert report["findings"] == []


def test_simulate_seeded_jitter_reproducible(capsys, tmp_path):
    out_dir = tmp_path / "out"
    run(capsys, "compile", str(SAMPLE_LIBRARY),
        str(SAMPLE_TOURS / "intro-3.json"), "--out", str(out_dir))
    for name in ("t1.json", "t2.json"):
        code, _, _ = run(capsys, "simulate", str(out_dir), "--seed", "9",
                         "--jitter", "40", "--out", str(tmp_path / name))
        assert code == 0
    assert (tmp_path / "t1.json").read_bytes() == (tmp_path / "t2.json").read_bytes()


def test_simulate_corrupted_timeline_fails_validation(capsys, tmp_path):
    out_dir = tmp_path / "out"
    run(capsys, "compile", str(SAMPLE_LIBRARY),
        str(SAMPLE_TOURS / "intro-3.json"), "--out", str(out_dir))
    doc = json.loads((out_dir / "narration.json").read_text())
    doc["events"][0]["pause_after_ms"] += 7
    (out_dir / "narration.json").write_text(json.dumps(doc))
    code, _, err = run(capsys, "simulate", str(out_dir))
    assert code == 1
    assert "pause-law" in err


def test_simulate_missing_timeline_dir(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", str(tmp_path / "nope"))
    assert code == 2
    assert "missing timeline file" in err


def test_place_feasible(capsys, tmp_path):
    result_file = tmp_path / "placement.json"
    code, out, _ = run(capsys, "place", str(SAMPLE_SCENES / "fdm-corner.json"),
                       "--out", str(result_file))
    assert code == 0
    payload = json.loads(out)
    assert payload["feasible"] is True
    assert payload["placement"]["surface_id"] == "wall-north"
    assert json.loads(result_file.read_text()) == payload


def test_place_infeasible_exit_1(capsys, tmp_path):
    scene = json.loads((SAMPLE_SCENES / "fdm-corner.json").read_text())
    scene["obstacles"] = [[[-1.0, 7.0], [15.0, 7.0], [15.0, 7.5], [-1.0, 7.5]]]
    scene["surfaces"] = [scene["surfaces"][0]]
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(scene))
    code, out, _ = run(capsys, "place", str(path))
    assert code == 1
    payload = json.loads(out)
    assert payload["feasible"] is False
    assert payload["rejections"]["projector_occlusion"] > 0


def test_place_bad_scene_exit_2(capsys, tmp_path):
    path = tmp_path / "scene.json"
    path.write_text("{}")
    code, _, err = run(capsys, "place", str(path))
    assert code == 2
    assert "malformed scene" in err


def test_unknown_config_key_fails_fast(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"base_pause": 100}))
    code, _, err = run(capsys, "compile", str(SAMPLE_LIBRARY),
                       str(SAMPLE_TOURS / "intro-3.json"),
                       "--out", str(tmp_path / "out"), "--config", str(config))
    assert code == 2
    assert "unknown keys" in err


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out = capsys.readouterr().out
    for command in ("validate", "compile", "simulate", "place", "serve"):
        assert command in out
