"""Command-line driver: validate, compile, simulate, place, serve.

Exit codes: 0 success, 1 the operation itself failed (integrity errors,
stage failure, infeasible placement), 2 unusable inputs (missing files or
directories, bad arguments).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checker import validate_timeline
from .config import load_config
from .errors import ChoreokitError, LibraryValidationError, PlacementError
from .library import load_library, load_tour_plan
from .pipeline import CompileError, compile_variants, pick_variant
from .placement import load_scene, solve_placement
from .sim import SimConfig, report_to_dict, simulate, verify_trace, write_trace
from .timeline import emit, parse_timeline


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))


def cmd_validate(args: argparse.Namespace) -> int:
    directory = Path(args.library)
    if not directory.is_dir():
        _print_json({"ok": False, "errors": [
            {"source": str(directory), "key": "", "message": "library directory does not exist"}
        ], "warnings": []})
        return 2
    try:
        library = load_library(directory)
    except LibraryValidationError as exc:
        _print_json({"ok": False, "errors": [
            {"source": f.source, "key": f.key, "message": f.message} for f in exc.findings
        ], "warnings": []})
        return 1
    _print_json({
        "ok": True,
        "errors": [],
        "warnings": library.warnings,
        "counts": {
            "learning_points": len(library.learning_points),
            "devices": len(library.devices),
            "visuals": len(library.visuals),
            "gestures": len(library.gestures),
            "surfaces": len(library.surfaces),
        },
    })
    return 0


def cmd_compile(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
        library = load_library(args.library)
        plan = load_tour_plan(args.tour, library)
    except ChoreokitError as exc:
        print(f"error: [load] {exc}", file=sys.stderr)
        return 2
    try:
        variants = compile_variants(library, plan, config)
        chosen = pick_variant(variants, args.variant or plan.variant)
    except CompileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    emit(chosen.timeline, args.out)

    total = chosen.total_duration_ms()
    print(f"compiled tour {plan.tour_id!r} variant {chosen.label!r} "
          f"-> {args.out} ({len(chosen.segments)} segments)")
    print(f"total duration: {total / 1000.0:.1f} s")
    for device_id, ms in chosen.device_durations_ms().items():
        print(f"  {device_id}: {ms / 1000.0:.1f} s")
    report = chosen.report
    if report is not None and report.warnings:
        print(f"coverage: {len(report.warnings)} warning(s)")
        for finding in report.warnings:
            print(f"  warning: {finding}")
    else:
        print("coverage: clean")
    for note in chosen.warnings:
        print(f"  note: {note}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        timeline = parse_timeline(args.timeline)
    except ChoreokitError as exc:
        print(f"error: [parse] {exc}", file=sys.stderr)
        return 2
    report = validate_timeline(timeline)
    if not report.ok:
        print("error: [validate] timeline is invalid:", file=sys.stderr)
        for finding in report.violations:
            print(f"  {finding}", file=sys.stderr)
        return 1
    sim_config = SimConfig(
        seed=args.seed,
        jitter_speech_ms=args.jitter,
        jitter_visual_ms=args.jitter,
        jitter_gesture_ms=args.jitter,
        tolerance_ms=args.tolerance,
    )
    trace = simulate(timeline, sim_config)
    trace_report = verify_trace(trace, timeline, args.tolerance)
    out = Path(args.out) if args.out else Path(args.timeline) / "trace.json"
    write_trace(trace, out)
    print(f"trace written to {out} ({len(trace.records)} records)")
    _print_json(report_to_dict(trace_report))
    return 0


def cmd_place(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
        scene = load_scene(args.scene)
    except ChoreokitError as exc:
        print(f"error: [load] {exc}", file=sys.stderr)
        return 2
    try:
        result = solve_placement(scene, config.placement)
    except PlacementError as exc:
        _print_json({
            "feasible": False,
            "message": str(exc),
            "samples": exc.samples,
            "rejections": exc.rejections,
        })
        return 1
    payload = {"feasible": True, "placement": result.to_dict()}
    if args.out:
        Path(args.out).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _print_json(payload)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import build_app

    try:
        app = build_app(
            library_dir=args.library,
            tour_file=args.tour,
            out_dir=args.out,
            config_path=args.config,
            scene_file=args.scene,
            ui_dir=args.ui,
        )
    except ChoreokitError as exc:
        print(f"error: [startup] {exc}", file=sys.stderr)
        return 2
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choreokit",
        description="Compile, simulate, and serve multimodal tour choreographies.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a library directory")
    p.add_argument("library")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("compile", help="compile a tour into timeline files")
    p.add_argument("library")
    p.add_argument("tour")
    p.add_argument("--out", required=True, help="output directory for the three files")
    p.add_argument("--config", default=None)
    p.add_argument("--variant", default=None, help="variant label to emit")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("simulate", help="replay a compiled timeline")
    p.add_argument("timeline", help="directory holding the three timeline files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter", type=int, default=0, help="dispatch jitter bound in ms")
    p.add_argument("--tolerance", type=float, default=1.0)
    p.add_argument("--out", default=None, help="trace file path")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("place", help="solve projection placement for a scene")
    p.add_argument("scene")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_place)

    p = sub.add_parser("serve", help="run the authoring service")
    p.add_argument("library")
    p.add_argument("tour")
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--scene", default=None)
    p.add_argument("--ui", default=None, help="directory with the studio bundle")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ChoreokitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
