"""Loading and validating asset library directories.

A library directory holds one JSON manifest per collection:

    learning_points.json, devices.json, visuals.json, gestures.json,
    surfaces.json

plus any media files the manifests reference.  Media references (image_ref,
motion_ref, audio_ref) are opaque relative paths; the toolkit never opens
them.  Loading is deterministic and order-independent: collections are
parsed independently, cross-checked afterwards, and stored sorted by id.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from . import geometry
from .errors import IntegrityFinding, LibraryValidationError
from .model import (
    AssetLibrary,
    DeviceInfo,
    GestureContext,
    GestureKind,
    GestureUnit,
    LearningCategory,
    LearningPoint,
    PlacementSpec,
    Pose,
    Surface,
    TourPlan,
    VisualAsset,
)

MANIFEST_FILES = {
    "learning_points": "learning_points.json",
    "devices": "devices.json",
    "visuals": "visuals.json",
    "gestures": "gestures.json",
    "surfaces": "surfaces.json",
}


class _Collector:
    """Accumulates findings with a fixed manifest source name."""

    def __init__(self, source: str):
        self.source = source
        self.findings: list[IntegrityFinding] = []

    def add(self, key: str, message: str) -> None:
        self.findings.append(IntegrityFinding(self.source, key, message))

    def req(self, obj: dict, key: str, kind: type, path: str) -> Any:
        if key not in obj:
            self.add(f"{path}.{key}", "missing required field")
            return None
        value = obj[key]
        if kind is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                self.add(f"{path}.{key}", f"expected a number, got {type(value).__name__}")
                return None
            return float(value)
        if kind is int and isinstance(value, bool):
            self.add(f"{path}.{key}", "expected an integer, got bool")
            return None
        if not isinstance(value, kind):
            self.add(f"{path}.{key}", f"expected {kind.__name__}, got {type(value).__name__}")
            return None
        return value


def _parse_manifest(directory: Path, name: str, collection_key: str,
                    findings: list[IntegrityFinding]) -> list[dict] | None:
    path = directory / name
    if not path.is_file():
        findings.append(IntegrityFinding(name, "", "missing manifest"))
        return None
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        findings.append(IntegrityFinding(name, "", f"unreadable manifest: {exc}"))
        return None
    if not isinstance(document, dict) or collection_key not in document:
        findings.append(
            IntegrityFinding(name, collection_key, "manifest must be an object with this key")
        )
        return None
    entries = document[collection_key]
    if not isinstance(entries, list):
        findings.append(IntegrityFinding(name, collection_key, "expected a list of entries"))
        return None
    return entries


def _parse_pose(col: _Collector, obj: dict, key: str, path: str) -> Pose | None:
    raw = col.req(obj, key, dict, path)
    if raw is None:
        return None
    x = col.req(raw, "x", float, f"{path}.{key}")
    y = col.req(raw, "y", float, f"{path}.{key}")
    heading = col.req(raw, "heading", float, f"{path}.{key}")
    if None in (x, y, heading):
        return None
    pose = Pose(x, y, heading)
    if not pose.is_finite():
        col.add(f"{path}.{key}", "pose must be finite")
        return None
    return pose


def _parse_point_list(col: _Collector, raw: Any, path: str) -> tuple | None:
    if not isinstance(raw, list):
        col.add(path, "expected a list of [x, y] points")
        return None
    points = []
    for i, entry in enumerate(raw):
        if (not isinstance(entry, list) or len(entry) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in entry)):
            col.add(f"{path}[{i}]", "expected [x, y] numbers")
            return None
        points.append((float(entry[0]), float(entry[1])))
    return tuple(points)


def _load_learning_points(entries: list, col: _Collector) -> dict[str, LearningPoint]:
    out: dict[str, LearningPoint] = {}
    categories = {c.value for c in LearningCategory}
    for i, obj in enumerate(entries):
        path = f"learning_points[{i}]"
        if not isinstance(obj, dict):
            col.add(path, "entry must be an object")
            continue
        lp_id = col.req(obj, "id", str, path)
        device_id = col.req(obj, "device_id", str, path)
        category = col.req(obj, "category", str, path)
        text = col.req(obj, "text", str, path)
        if None in (lp_id, device_id, category, text):
            continue
        if category not in categories:
            col.add(f"{path}.category", f"unknown category {category!r}")
            continue
        if not text.strip():
            col.add(f"{path}.text", "text must be non-empty")
            continue
        if lp_id in out:
            col.add(f"{path}.id", f"duplicate id {lp_id!r}")
            continue
        out[lp_id] = LearningPoint(lp_id, device_id, LearningCategory(category), text)
    return out


def _load_devices(entries: list, col: _Collector) -> dict[str, DeviceInfo]:
    out: dict[str, DeviceInfo] = {}
    for i, obj in enumerate(entries):
        path = f"devices[{i}]"
        if not isinstance(obj, dict):
            col.add(path, "entry must be an object")
            continue
        dev_id = col.req(obj, "id", str, path)
        name = col.req(obj, "name", str, path)
        description = col.req(obj, "description", str, path)
        pose = _parse_pose(col, obj, "pose", path)
        footprint = None
        if "footprint" in obj:
            footprint = _parse_point_list(col, obj["footprint"], f"{path}.footprint")
        else:
            col.add(f"{path}.footprint", "missing required field")
        if None in (dev_id, name, description, pose) or footprint is None:
            continue
        if len(footprint) < 3:
            col.add(f"{path}.footprint", "footprint needs at least 3 vertices")
            continue
        if not geometry.polygon_is_simple(footprint):
            col.add(f"{path}.footprint", "footprint must not self-intersect")
            continue
        if dev_id in out:
            col.add(f"{path}.id", f"duplicate id {dev_id!r}")
            continue
        out[dev_id] = DeviceInfo(dev_id, name, description, pose, footprint)
    return out


def _parse_placement(col: _Collector, obj: dict, path: str) -> PlacementSpec | None:
    raw = col.req(obj, "placement", dict, path)
    if raw is None:
        return None
    kind = col.req(raw, "kind", str, f"{path}.placement")
    if kind is None:
        return None
    if kind == PlacementSpec.ON_EQUIPMENT:
        device_id = col.req(raw, "device_id", str, f"{path}.placement")
        region = col.req(raw, "region", str, f"{path}.placement")
        if None in (device_id, region):
            return None
        return PlacementSpec(kind, device_id=device_id, region=region)
    if kind == PlacementSpec.NEARBY_SURFACE:
        surface_id = col.req(raw, "surface_id", str, f"{path}.placement")
        if surface_id is None:
            return None
        return PlacementSpec(kind, surface_id=surface_id)
    col.add(f"{path}.placement.kind", f"unknown placement kind {kind!r}")
    return None


def _load_visuals(entries: list, col: _Collector) -> dict[str, VisualAsset]:
    out: dict[str, VisualAsset] = {}
    for i, obj in enumerate(entries):
        path = f"visuals[{i}]"
        if not isinstance(obj, dict):
            col.add(path, "entry must be an object")
            continue
        vis_id = col.req(obj, "id", str, path)
        image_ref = col.req(obj, "image_ref", str, path)
        description = col.req(obj, "description", str, path)
        lp_id = col.req(obj, "learning_point_id", str, path)
        rank = col.req(obj, "sequence_rank", int, path) if "sequence_rank" in obj else 1
        placement = _parse_placement(col, obj, path)
        if None in (vis_id, image_ref, description, lp_id, rank) or placement is None:
            continue
        if vis_id in out:
            col.add(f"{path}.id", f"duplicate id {vis_id!r}")
            continue
        out[vis_id] = VisualAsset(vis_id, image_ref, description, lp_id, placement, rank)
    return out


def _load_gestures(entries: list, col: _Collector) -> dict[str, GestureUnit]:
    out: dict[str, GestureUnit] = {}
    kinds = {k.value for k in GestureKind}
    for i, obj in enumerate(entries):
        path = f"gestures[{i}]"
        if not isinstance(obj, dict):
            col.add(path, "entry must be an object")
            continue
        unit_id = col.req(obj, "id", str, path)
        kind = col.req(obj, "kind", str, path)
        motion_ref = col.req(obj, "motion_ref", str, path)
        duration_ms = col.req(obj, "duration_ms", int, path)
        robot_pose = _parse_pose(col, obj, "robot_pose", path)
        description = col.req(obj, "description", str, path)
        context_raw = col.req(obj, "context", dict, path)
        exemplar_refs: tuple[str, ...] = ()
        if "exemplar_refs" in obj:
            refs = obj["exemplar_refs"]
            if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
                col.add(f"{path}.exemplar_refs", "expected a list of strings")
                continue
            exemplar_refs = tuple(refs)
        if None in (unit_id, kind, motion_ref, duration_ms, description) \
                or robot_pose is None or context_raw is None:
            continue
        if kind not in kinds:
            col.add(f"{path}.kind", f"unknown gesture kind {kind!r}")
            continue
        if duration_ms <= 0:
            col.add(f"{path}.duration_ms", "duration must be positive")
            continue
        ctx_device = col.req(context_raw, "device_id", str, f"{path}.context")
        ctx_lp = col.req(context_raw, "learning_point_id", str, f"{path}.context")
        narration = context_raw.get("narration", "")
        if None in (ctx_device, ctx_lp) or not isinstance(narration, str):
            continue
        if unit_id in out:
            col.add(f"{path}.id", f"duplicate id {unit_id!r}")
            continue
        out[unit_id] = GestureUnit(
            unit_id, GestureKind(kind), motion_ref, duration_ms, robot_pose,
            description, GestureContext(ctx_device, ctx_lp, narration), exemplar_refs,
        )
    return out


def _load_surfaces(entries: list, col: _Collector) -> dict[str, Surface]:
    out: dict[str, Surface] = {}
    for i, obj in enumerate(entries):
        path = f"surfaces[{i}]"
        if not isinstance(obj, dict):
            col.add(path, "entry must be an object")
            continue
        surf_id = col.req(obj, "id", str, path)
        base = None
        if "base" in obj:
            base = _parse_point_list(col, obj["base"], f"{path}.base")
        else:
            col.add(f"{path}.base", "missing required field")
        height_range = None
        if "height_range" in obj:
            raw = obj["height_range"]
            if (isinstance(raw, list) and len(raw) == 2
                    and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)):
                height_range = (float(raw[0]), float(raw[1]))
            else:
                col.add(f"{path}.height_range", "expected [low, high] numbers")
        else:
            col.add(f"{path}.height_range", "missing required field")
        normal = None
        if "normal" in obj:
            pts = _parse_point_list(col, [obj["normal"]], f"{path}.normal")
            normal = pts[0] if pts else None
        else:
            col.add(f"{path}.normal", "missing required field")
        if surf_id is None or base is None or height_range is None or normal is None:
            continue
        if len(base) != 2 or base[0] == base[1]:
            col.add(f"{path}.base", "base must be two distinct [x, y] points")
            continue
        if not (0.0 <= height_range[0] < height_range[1]):
            col.add(f"{path}.height_range", "need 0 <= low < high")
            continue
        norm = geometry.distance((0.0, 0.0), normal)
        if norm == 0.0:
            col.add(f"{path}.normal", "normal must be non-zero")
            continue
        normal = (normal[0] / norm, normal[1] / norm)
        if surf_id in out:
            col.add(f"{path}.id", f"duplicate id {surf_id!r}")
            continue
        out[surf_id] = Surface(surf_id, (base[0], base[1]), height_range, normal)
    return out


def _cross_check(lib: AssetLibrary, findings: list[IntegrityFinding]) -> None:
    for lp in lib.learning_points.values():
        if lp.device_id not in lib.devices:
            findings.append(IntegrityFinding(
                MANIFEST_FILES["learning_points"], lp.id,
                f"dangling reference: unknown device {lp.device_id!r}"))
    ranks_seen: dict[tuple[str, int], str] = {}
    for visual in lib.visuals.values():
        src = MANIFEST_FILES["visuals"]
        if visual.learning_point_id not in lib.learning_points:
            findings.append(IntegrityFinding(
                src, visual.id,
                f"dangling reference: unknown learning point {visual.learning_point_id!r}"))
        placement = visual.placement
        if placement.kind == PlacementSpec.ON_EQUIPMENT \
                and placement.device_id not in lib.devices:
            findings.append(IntegrityFinding(
                src, visual.id,
                f"dangling reference: unknown device {placement.device_id!r}"))
        if placement.kind == PlacementSpec.NEARBY_SURFACE \
                and placement.surface_id not in lib.surfaces:
            findings.append(IntegrityFinding(
                src, visual.id,
                f"dangling reference: unknown surface {placement.surface_id!r}"))
        rank_key = (visual.learning_point_id, visual.sequence_rank)
        if rank_key in ranks_seen:
            findings.append(IntegrityFinding(
                src, visual.id,
                f"sequence_rank {visual.sequence_rank} already used by "
                f"{ranks_seen[rank_key]!r} for learning point {visual.learning_point_id!r}"))
        else:
            ranks_seen[rank_key] = visual.id
    for gesture in lib.gestures.values():
        src = MANIFEST_FILES["gestures"]
        ctx = gesture.context
        if ctx.device_id not in lib.devices:
            findings.append(IntegrityFinding(
                src, gesture.id,
                f"dangling reference: unknown device {ctx.device_id!r}"))
        if ctx.learning_point_id not in lib.learning_points:
            findings.append(IntegrityFinding(
                src, gesture.id,
                f"dangling reference: unknown learning point {ctx.learning_point_id!r}"))
        elif ctx.device_id in lib.devices:
            lp = lib.learning_points[ctx.learning_point_id]
            if lp.device_id != ctx.device_id:
                lib.warnings.append(
                    f"gesture {gesture.id!r} pairs learning point {lp.id!r} "
                    f"with device {ctx.device_id!r}, but the point belongs to "
                    f"{lp.device_id!r}")


def load_library(path: str | Path) -> AssetLibrary:
    """Load and validate a library directory.

    Raises LibraryValidationError carrying every finding; empty collections
    only produce warnings on the returned library.
    """
    directory = Path(path)
    findings: list[IntegrityFinding] = []
    if not directory.is_dir():
        raise LibraryValidationError(
            [IntegrityFinding(str(path), "", "library directory does not exist")])

    raw: dict[str, list | None] = {}
    for key, filename in MANIFEST_FILES.items():
        raw[key] = _parse_manifest(directory, filename, key, findings)

    lib = AssetLibrary()
    loaders = {
        "learning_points": _load_learning_points,
        "devices": _load_devices,
        "visuals": _load_visuals,
        "gestures": _load_gestures,
        "surfaces": _load_surfaces,
    }
    for key, loader in loaders.items():
        entries = raw[key]
        if entries is None:
            continue
        col = _Collector(MANIFEST_FILES[key])
        loaded = loader(entries, col)
        findings.extend(col.findings)
        setattr(lib, key, dict(sorted(loaded.items())))

    if not findings:
        _cross_check(lib, findings)
    if findings:
        raise LibraryValidationError(findings)

    for key in ("visuals", "gestures", "surfaces"):
        if not getattr(lib, key):
            lib.warnings.append(f"library has no {key}")
    return lib


def load_tour_plan(path: str | Path, library: AssetLibrary) -> TourPlan:
    """Load a tour file and check it against the library."""
    tour_path = Path(path)
    findings: list[IntegrityFinding] = []
    source = tour_path.name
    try:
        document = json.loads(tour_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LibraryValidationError(
            [IntegrityFinding(source, "", f"unreadable tour file: {exc}")])
    if not isinstance(document, dict) or not isinstance(document.get("devices"), list):
        raise LibraryValidationError(
            [IntegrityFinding(source, "devices", "tour file needs a device id list")])
    devices = document["devices"]
    if not devices:
        findings.append(IntegrityFinding(source, "devices", "a tour needs at least one device"))
    seen: set[str] = set()
    for i, dev in enumerate(devices):
        if not isinstance(dev, str):
            findings.append(IntegrityFinding(source, f"devices[{i}]", "expected a device id string"))
            continue
        if dev not in library.devices:
            findings.append(IntegrityFinding(
                source, f"devices[{i}]", f"dangling reference: unknown device {dev!r}"))
        if dev in seen:
            findings.append(IntegrityFinding(source, f"devices[{i}]", f"duplicate device {dev!r}"))
        seen.add(dev)
    if findings:
        raise LibraryValidationError(findings)
    tour_id = document.get("tour_id") or tour_path.stem
    variant = document.get("variant")
    return TourPlan(tuple(devices), tour_id=str(tour_id),
                    variant=str(variant) if variant is not None else None)
