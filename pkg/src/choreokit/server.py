"""Local authoring service: preview a compiled tour, nudge timings, pick variants.

State model: the compiler's output is immutable; educator edits live in a
separate overrides file layered on top, so recompiling never destroys them.
Mutations (nudge, select_variant) are serialized behind one lock and each
candidate timeline is re-validated before it replaces the current one.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .checker import validate_timeline
from .config import load_config
from .errors import PlacementError
from .library import load_library, load_tour_plan
from .pipeline import CompiledVariant, compile_variants
from .placement import Scene, load_scene, scene_to_dict, solve_placement
from .sim import SimConfig, report_to_dict, simulate, trace_to_dict, verify_trace
from .timeline import Timeline, emit, timeline_documents

log = logging.getLogger("choreokit.server")

MAX_NUDGE_MS = 5000
OVERRIDES_FILE = "overrides.json"


class NudgeRequest(BaseModel):
    event_id: str
    delta_ms: int


class VariantRequest(BaseModel):
    label: str


def apply_overrides(timeline: Timeline, nudges: dict[str, int]) -> Timeline:
    """A copy of the timeline with per-event offsets applied and recorded."""
    active = {k: v for k, v in nudges.items() if v != 0}

    def shift(events):
        return tuple(
            e.shifted(active[e.event_id]) if e.event_id in active else e
            for e in events)

    return replace(
        timeline,
        speech=shift(timeline.speech),
        visual=shift(timeline.visual),
        gesture=shift(timeline.gesture),
        pauses=dict(timeline.pauses),
        overrides=active,
    )


def timeline_payload(timeline: Timeline) -> dict:
    documents = timeline_documents(timeline)
    return {
        "schema_version": timeline.schema_version,
        "tour_id": timeline.tour_id,
        "variant": timeline.variant,
        "base_pause_ms": timeline.base_pause_ms,
        "end_ms": timeline.end_ms(),
        "overrides": dict(sorted(timeline.overrides.items())),
        "narration": documents["narration.json"]["events"],
        "visuals": documents["visuals.json"]["events"],
        "gestures": documents["gestures.json"]["events"],
    }


class Studio:
    """All mutable service state; one writer at a time."""

    def __init__(self, variants: list[CompiledVariant], out_dir: Path,
                 library, scene: Scene | None, placement_config):
        self.variants = {v.label: v for v in variants}
        self.library = library
        self.out_dir = out_dir
        self.scene = scene
        self.placement_config = placement_config
        self.lock = threading.Lock()
        self.selected = variants[0].label
        self.nudges: dict[str, dict[str, int]] = {v.label: {} for v in variants}
        self._load_state()
        emit(self.variants[self.selected].timeline, out_dir)

    # -- persistence ---------------------------------------------------------

    def _state_path(self) -> Path:
        return self.out_dir / OVERRIDES_FILE

    def _load_state(self) -> None:
        path = self._state_path()
        if not path.is_file():
            return
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            log.warning("ignoring unreadable overrides file: %s", exc)
            return
        selected = raw.get("selected_variant")
        if selected in self.variants:
            self.selected = selected
        for label, per_event in raw.get("nudges", {}).items():
            if label in self.nudges and isinstance(per_event, dict):
                self.nudges[label] = {
                    str(k): int(v) for k, v in per_event.items() if int(v) != 0}

    def _save_state(self) -> None:
        payload = {
            "schema_version": "1.0",
            "selected_variant": self.selected,
            "nudges": {label: dict(sorted(per.items()))
                       for label, per in sorted(self.nudges.items()) if per},
        }
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self._state_path().write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    # -- views -----------------------------------------------------------------

    def current_timeline(self) -> Timeline:
        variant = self.variants[self.selected]
        return apply_overrides(variant.timeline, self.nudges[self.selected])

    def variants_payload(self) -> dict:
        return {
            "selected": self.selected,
            "variants": [
                {
                    "label": v.label,
                    "segments": len(v.segments),
                    "total_duration_ms": v.total_duration_ms(),
                }
                for v in self.variants.values()
            ],
        }


def build_app(
    library_dir: str,
    tour_file: str,
    out_dir: str,
    config_path: str | None = None,
    scene_file: str | None = None,
    ui_dir: str | None = None,
) -> FastAPI:
    config = load_config(config_path)
    library = load_library(library_dir)
    plan = load_tour_plan(tour_file, library)
    variants = compile_variants(library, plan, config)
    scene = load_scene(scene_file) if scene_file else None
    studio = Studio(variants, Path(out_dir), library, scene, config.placement)

    app = FastAPI(title="choreokit studio service", version="1.0")
    app.state.studio = studio

    @app.get("/api/timeline")
    def get_timeline() -> dict:
        return timeline_payload(studio.current_timeline())

    @app.get("/api/variants")
    def get_variants() -> dict:
        return studio.variants_payload()

    @app.post("/api/select_variant")
    def select_variant(request: VariantRequest):
        with studio.lock:
            if request.label not in studio.variants:
                return JSONResponse(
                    {"error": f"unknown variant {request.label!r}"}, status_code=404)
            studio.selected = request.label
            studio._save_state()
            emit(studio.variants[studio.selected].timeline, studio.out_dir)
            return timeline_payload(studio.current_timeline())

    @app.post("/api/nudge")
    def nudge(request: NudgeRequest):
        if abs(request.delta_ms) > MAX_NUDGE_MS:
            return JSONResponse(
                {"accepted": False,
                 "error": f"|delta_ms| must be at most {MAX_NUDGE_MS}"},
                status_code=422)
        with studio.lock:
            variant = studio.variants[studio.selected]
            if variant.timeline.find_event(request.event_id) is None:
                return JSONResponse(
                    {"accepted": False,
                     "error": f"unknown event {request.event_id!r}"},
                    status_code=404)
            candidate = dict(studio.nudges[studio.selected])
            candidate[request.event_id] = \
                candidate.get(request.event_id, 0) + request.delta_ms
            trial = apply_overrides(variant.timeline, candidate)
            report = validate_timeline(trial)
            if not report.ok:
                return JSONResponse(
                    {"accepted": False,
                     "findings": [
                         {"code": f.code, "message": f.message, "event_id": f.event_id}
                         for f in report.violations
                     ]},
                    status_code=409)
            studio.nudges[studio.selected] = {
                k: v for k, v in candidate.items() if v != 0}
            studio._save_state()
            return {"accepted": True, "timeline": timeline_payload(trial)}

    @app.get("/api/trace")
    def get_trace(seed: int = 0, jitter: int = 0) -> dict:
        sim_config = SimConfig(
            seed=seed, jitter_speech_ms=jitter,
            jitter_visual_ms=jitter, jitter_gesture_ms=jitter)
        current = studio.current_timeline()
        trace = simulate(current, sim_config)
        report = verify_trace(trace, current, sim_config.tolerance_ms)
        return {"trace": trace_to_dict(trace), "report": report_to_dict(report)}

    @app.get("/api/scene")
    def get_scene():
        if studio.scene is None:
            return JSONResponse({"error": "no scene loaded"}, status_code=404)
        return scene_to_dict(studio.scene)

    @app.get("/api/placement")
    def get_placement():
        if studio.scene is None:
            return JSONResponse({"error": "no scene loaded"}, status_code=404)
        try:
            result = solve_placement(studio.scene, studio.placement_config)
        except PlacementError as exc:
            return {
                "feasible": False,
                "message": str(exc),
                "samples": exc.samples,
                "rejections": exc.rejections,
            }
        return {"feasible": True, "placement": result.to_dict()}

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="studio")

    return app
