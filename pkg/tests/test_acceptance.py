"""Acceptance suite: one test per release criterion, each printing a verdict.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
Every tolerance and runtime bound is pinned here, not configurable.
"""

from __future__ import annotations

import json
import math
import random
import shutil
import time
from collections import Counter
from pathlib import Path

from fastapi.testclient import TestClient

from choreokit.align import align
from choreokit.checker import validate_timeline
from choreokit.cli import main
from choreokit.config import PlacementConfig
from choreokit.library import load_library
from choreokit.placement import gimbal_angles, solve_placement
from choreokit.server import build_app
from choreokit.sim import SimConfig, simulate, verify_trace
from choreokit.timeline import GESTURE, VISUAL, emit, parse_timeline
from conftest import SAMPLE_LIBRARY, SAMPLE_TOURS
from oracles import brute_force_placement, check_feasibility, random_scene, random_tour

TIMELINE_FILES = ("narration.json", "visuals.json", "gestures.json")


def verdict(number: int, label: str, elapsed: float) -> None:
    print(f"acceptance criterion {number} ({label}): PASS in {elapsed:.2f}s")


def compile_cli(out_dir: Path, library=SAMPLE_LIBRARY,
                tour=SAMPLE_TOURS / "intro-3.json") -> int:
    return main(["compile", str(library), str(tour), "--out", str(out_dir)])


def test_criterion_1_pipeline_fidelity(tmp_path):
    started = time.perf_counter()

    library = load_library(SAMPLE_LIBRARY)
    assert library.warnings == []
    assert len(library.devices) == 6
    assert len(library.gestures) == 42
    exemplars = Counter()
    for gesture in library.gestures.values():
        exemplars[gesture.kind.value] += len(gesture.exemplar_refs)
    assert exemplars == {"deictic": 18, "iconic": 15, "metaphoric": 12}

    first, second = tmp_path / "first", tmp_path / "second"
    assert compile_cli(first) == 0
    assert compile_cli(second) == 0
    for out_dir in (first, second):
        assert sorted(p.name for p in out_dir.iterdir()) == sorted(TIMELINE_FILES)
    for name in TIMELINE_FILES:
        assert (first / name).read_bytes() == (second / name).read_bytes()

    narration = json.loads((first / "narration.json").read_text())
    markers_per_device: dict[str, list[str]] = {}
    for event in narration["events"]:
        lp = event["learning_point_id"]
        assert lp is None or isinstance(lp, str)  # one learning point at most
        if lp:
            markers_per_device.setdefault(event["device_id"], []).append(lp)
    for device, markers in markers_per_device.items():
        assert len(markers) == len(set(markers)), device

    elapsed = time.perf_counter() - started
    assert elapsed < 5.0
    verdict(1, "pipeline fidelity", elapsed)


def test_criterion_2_alignment_laws():
    started = time.perf_counter()
    rng = random.Random(0xA11C)
    for _ in range(1000):
        segments, selections, config = random_tour(rng)
        timeline = align(segments, selections, config, tour_id="fuzz")
        report = validate_timeline(timeline)
        assert report.ok, report.violations

        # Independent re-derivation of the pause law from the raw inputs.
        gesture_totals = {
            s.id: sum(g.duration_ms for g in selections[s.id].gestures)
            for s in segments}
        for segment in segments:
            expected = config.base_pause_ms + max(
                0, gesture_totals[segment.id] - segment.duration_ms)
            assert timeline.pauses[segment.id] == expected

        # Span and partition laws straight from the event data.
        speech_spans = {e.segment_id: (e.start_ms, e.end_ms) for e in timeline.speech}
        by_segment: dict[str, list] = {}
        for event in timeline.visual:
            by_segment.setdefault(event.segment_id, []).append(event)
        for segment_id, events in by_segment.items():
            events.sort(key=lambda e: e.start_ms)
            start, end = speech_spans[segment_id]
            assert events[0].start_ms == start
            assert events[-1].end_ms == end
            for prev, nxt in zip(events, events[1:]):
                assert nxt.start_ms == prev.end_ms

        # Channel exclusivity without the checker's help.
        for channel in (timeline.speech, timeline.visual, timeline.gesture):
            ordered = sorted(channel, key=lambda e: e.start_ms)
            for prev, nxt in zip(ordered, ordered[1:]):
                assert nxt.start_ms >= prev.end_ms

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    verdict(2, "alignment laws on 1000 fuzzed tours", elapsed)


def test_criterion_3_simulator_exactness():
    started = time.perf_counter()
    rng = random.Random(0x51F7)

    for _ in range(25):
        segments, selections, config = random_tour(rng)
        timeline = align(segments, selections, config, tour_id="zero")
        trace = simulate(timeline, SimConfig(seed=rng.randint(0, 9999)))
        for record in trace.records:
            assert abs(record.start_deviation_ms) <= 1
            assert abs(record.end_deviation_ms) <= 1
            assert record.actual_start_ms == record.scheduled_start_ms
        assert verify_trace(trace, timeline, tolerance_ms=1).ok

    for _ in range(200):
        segments, selections, config = random_tour(rng)
        timeline = align(segments, selections, config, tour_id="jitter")
        sim_config = SimConfig(
            seed=rng.randint(0, 99999),
            jitter_speech_ms=rng.randint(0, 150),
            jitter_visual_ms=rng.randint(0, 150),
            jitter_gesture_ms=rng.randint(0, 150))
        tolerance = rng.choice([0, 1, 2, 10, 40])
        trace = simulate(timeline, sim_config)
        report = verify_trace(trace, timeline, tolerance_ms=tolerance)
        expected = {
            r.event_id for r in trace.records
            if max(abs(r.start_deviation_ms), abs(r.end_deviation_ms)) > tolerance}
        assert report.flagged_ids() == expected
        for channel in (VISUAL, GESTURE):
            rows = sorted((r for r in trace.records if r.channel == channel),
                          key=lambda r: r.actual_start_ms)
            for prev, nxt in zip(rows, rows[1:]):
                assert nxt.actual_start_ms >= prev.actual_end_ms

    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    verdict(3, "simulator exactness on 200 randomized runs", elapsed)


def test_criterion_4_placement_correctness():
    started = time.perf_counter()
    config = PlacementConfig()
    rng = random.Random(0xF1A)

    for _ in range(200):
        scene = random_scene(rng)
        result = solve_placement(scene, config)
        oracle = brute_force_placement(scene, config, step=0.01)
        assert oracle is not None
        assert result.surface_id == oracle[0]
        assert abs(result.along_m - oracle[1]) <= config.grid_step_m + 1e-9
        assert abs(result.height_m - oracle[2]) <= config.grid_step_m + 1e-9
        assert check_feasibility(scene, config, result.surface_id, result.point)

    for _ in range(1000):
        px, py = rng.uniform(-10, 10), rng.uniform(-10, 10)
        height = rng.uniform(0.5, 2.5)
        heading = rng.uniform(-7, 7)
        target = (rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(0, 3))
        pan, tilt = gimbal_angles((px, py), height, heading, target)
        dx, dy, dz = target[0] - px, target[1] - py, target[2] - height
        cos_h, sin_h = math.cos(-heading), math.sin(-heading)
        local_x = dx * cos_h - dy * sin_h
        local_y = dx * sin_h + dy * cos_h
        gap = abs(pan - math.atan2(local_y, local_x)) % (2 * math.pi)
        assert min(gap, 2 * math.pi - gap) < 1e-6
        assert abs(tilt - math.atan2(dz, math.hypot(dx, dy))) < 1e-6

    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    verdict(4, "placement matches 1 cm brute force on 200 scenes", elapsed)


def test_criterion_5_roundtrip_and_nudge_safety(tmp_path):
    started = time.perf_counter()

    rng = random.Random(0xBEEF)
    for i in range(25):
        segments, selections, config = random_tour(rng)
        timeline = align(segments, selections, config, tour_id=f"rt-{i}")
        emit(timeline, tmp_path / f"rt-{i}")
        assert parse_timeline(tmp_path / f"rt-{i}") == timeline

    out_dir = tmp_path / "studio"
    args = dict(
        library_dir=str(SAMPLE_LIBRARY),
        tour_file=str(SAMPLE_TOURS / "intro-3.json"),
        out_dir=str(out_dir),
    )
    with TestClient(build_app(**args)) as client:
        timeline = client.get("/api/timeline").json()
        event_ids = [e["event_id"]
                     for e in timeline["visuals"] + timeline["gestures"]]
        accepted = 0
        for _ in range(60):
            response = client.post("/api/nudge", json={
                "event_id": rng.choice(event_ids),
                "delta_ms": rng.choice([-450, -250, -80, 80, 250, 450])})
            assert response.status_code in (200, 409)
            accepted += response.status_code == 200
        assert accepted > 0
        state = client.app.state.studio
        assert validate_timeline(state.current_timeline()).ok
        nudged_view = client.get("/api/timeline").json()

    with TestClient(build_app(**args)) as reborn:
        assert reborn.get("/api/timeline").json() == nudged_view
        state = reborn.app.state.studio
        assert validate_timeline(state.current_timeline()).ok

    elapsed = time.perf_counter() - started
    verdict(5, "round-trip, nudge safety, override persistence", elapsed)


def test_criterion_6_coverage_warning_after_asset_deletion(tmp_path, capsys):
    started = time.perf_counter()

    library_dir = tmp_path / "library"
    shutil.copytree(SAMPLE_LIBRARY, library_dir)
    victim_lp = "lp-fdm-ams"
    doc = json.loads((library_dir / "visuals.json").read_text())
    remaining = [v for v in doc["visuals"] if v["learning_point_id"] != victim_lp]
    assert len(remaining) == len(doc["visuals"]) - 1  # it had exactly one visual
    doc["visuals"] = remaining
    (library_dir / "visuals.json").write_text(json.dumps(doc, indent=2))

    code = compile_cli(tmp_path / "out", library=library_dir)
    output = capsys.readouterr().out
    assert code == 0  # compilation still succeeds
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == \
        sorted(TIMELINE_FILES)
    warning_lines = [line for line in output.splitlines()
                     if "warning" in line and victim_lp in line]
    assert warning_lines, output

    elapsed = time.perf_counter() - started
    verdict(6, "coverage warning names the stripped learning point", elapsed)
