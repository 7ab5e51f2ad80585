"""Projection placement: where on which surface to land, and at what angles.

The model is 2.5D: floor-plan geometry plus heights.  Obstacles occlude in
plan view as full-height prisms; surfaces are vertical wall bands over a
base segment.  A candidate point is feasible when the projector sees it,
every learner sees it, the beam hits at a legible incidence, and the gimbal
can reach it.  Among feasible points the solver maximizes

    w1 * exp(-distance to referent)
  + w2 * cos(incidence)
  + w3 * mean over learners of cos(viewing angle)

with ties broken toward the lower surface id, then the lower along-segment
coordinate, then the lower height.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .config import PlacementConfig
from .errors import IntegrityFinding, LibraryValidationError, PlacementError
from .geometry import (
    Point2,
    distance,
    occluded,
    point_along,
    polygon_is_simple,
    project_point_to_segment,
    wrap_angle,
)
from .model import Pose, Surface

# Filters are applied in this order; a sample is charged to the first one
# that rejects it.
REJECTION_FILTERS = (
    "projector_occlusion",
    "learner_occlusion",
    "incidence",
    "gimbal",
)


@dataclass(frozen=True)
class Learner:
    x: float
    y: float
    eye_height: float = 1.6


@dataclass(frozen=True)
class Scene:
    robot: Pose
    projector_height: float
    learners: tuple[Learner, ...]
    target_device_id: str
    referent: Point2
    obstacles: tuple[tuple[Point2, ...], ...]
    surfaces: tuple[Surface, ...]


@dataclass(frozen=True)
class ScoreBreakdown:
    referent_proximity: float
    incidence: float
    learner_visibility: float


@dataclass(frozen=True)
class PlacementResult:
    surface_id: str
    along_m: float
    height_m: float
    point: tuple[float, float, float]
    pan_rad: float
    tilt_rad: float
    incidence_rad: float
    score: float
    breakdown: ScoreBreakdown

    def to_dict(self) -> dict:
        return {
            "surface_id": self.surface_id,
            "along_m": self.along_m,
            "height_m": self.height_m,
            "point": list(self.point),
            "pan_rad": self.pan_rad,
            "tilt_rad": self.tilt_rad,
            "incidence_rad": self.incidence_rad,
            "score": self.score,
            "breakdown": {
                "referent_proximity": self.breakdown.referent_proximity,
                "incidence": self.breakdown.incidence,
                "learner_visibility": self.breakdown.learner_visibility,
            },
        }


def gimbal_angles(
    position: Point2,
    height: float,
    heading: float,
    target: tuple[float, float, float],
) -> tuple[float, float]:
    """Pan from the heading to the target bearing, tilt from horizontal."""
    dx = target[0] - position[0]
    dy = target[1] - position[1]
    dz = target[2] - height
    horizontal = math.hypot(dx, dy)
    if horizontal == 0.0 and dz == 0.0:
        raise ValueError("target coincides with the projector")
    pan = wrap_angle(math.atan2(dy, dx) - heading)
    tilt = math.atan2(dz, horizontal)
    return pan, tilt


def scene_problems(scene: Scene) -> list[str]:
    problems = []
    if not scene.learners:
        problems.append("scene needs at least one learner")
    if not scene.surfaces:
        problems.append("scene needs at least one candidate surface")
    if scene.projector_height <= 0:
        problems.append("projector height must be positive")
    for i, learner in enumerate(scene.learners):
        if learner.eye_height <= 0:
            problems.append(f"learners[{i}]: eye height must be positive")
    if not scene.robot.is_finite():
        problems.append("robot pose must be finite")
    for i, obstacle in enumerate(scene.obstacles):
        if len(obstacle) < 3 or not polygon_is_simple(obstacle):
            problems.append(f"obstacles[{i}]: must be a simple polygon")
    return problems


def solve_placement(scene: Scene, config: PlacementConfig) -> PlacementResult:
    """Grid-search every surface for the best feasible projection point."""
    problems = scene_problems(scene)
    if problems:
        raise PlacementError("invalid scene: " + "; ".join(problems))

    projector_xy: Point2 = (scene.robot.x, scene.robot.y)
    step = config.grid_step_m
    cos_max_incidence = math.cos(config.max_incidence_rad)
    rejections = {name: 0 for name in REJECTION_FILTERS}
    samples = 0
    best: PlacementResult | None = None

    for surface in sorted(scene.surfaces, key=lambda s: s.id):
        a, b = surface.base
        length = distance(a, b)
        z_low, z_high = surface.height_range
        n_u = int(math.floor(length / step))
        n_v = int(math.floor((z_high - z_low) / step))
        for i in range(n_u + 1):
            u = i * step
            xy = point_along(a, b, u)
            for j in range(n_v + 1):
                v = z_low + j * step
                samples += 1
                candidate = _evaluate(scene, config, surface, projector_xy,
                                      cos_max_incidence, u, xy, v, rejections)
                if candidate is not None and (best is None or candidate.score > best.score):
                    best = candidate

    if best is None:
        raise PlacementError(
            "no feasible projection point "
            f"({samples} samples rejected: "
            + ", ".join(f"{k}={v}" for k, v in rejections.items()) + ")",
            rejections=rejections, samples=samples)
    return best


def _evaluate(
    scene: Scene,
    config: PlacementConfig,
    surface: Surface,
    projector_xy: Point2,
    cos_max_incidence: float,
    u: float,
    xy: Point2,
    v: float,
    rejections: dict[str, int],
) -> PlacementResult | None:
    if occluded(projector_xy, xy, scene.obstacles):
        rejections["projector_occlusion"] += 1
        return None
    for learner in scene.learners:
        if occluded((learner.x, learner.y), xy, scene.obstacles):
            rejections["learner_occlusion"] += 1
            return None

    nx, ny = surface.normal
    dx = xy[0] - projector_xy[0]
    dy = xy[1] - projector_xy[1]
    dz = v - scene.projector_height
    ray_len = math.sqrt(dx * dx + dy * dy + dz * dz)
    if ray_len == 0.0:
        rejections["incidence"] += 1
        return None
    cos_incidence = -(dx * nx + dy * ny) / ray_len
    if cos_incidence < cos_max_incidence:
        rejections["incidence"] += 1
        return None
    incidence = math.acos(min(1.0, max(-1.0, cos_incidence)))

    pan, tilt = gimbal_angles(projector_xy, scene.projector_height,
                              scene.robot.heading, (xy[0], xy[1], v))
    pan_lo, pan_hi = config.pan_limits_rad
    tilt_lo, tilt_hi = config.tilt_limits_rad
    if not (pan_lo <= pan <= pan_hi and tilt_lo <= tilt <= tilt_hi):
        rejections["gimbal"] += 1
        return None

    proximity = math.exp(-distance(xy, scene.referent))
    visibility = 0.0
    for learner in scene.learners:
        lx = xy[0] - learner.x
        ly = xy[1] - learner.y
        lz = v - learner.eye_height
        gaze_len = math.sqrt(lx * lx + ly * ly + lz * lz)
        if gaze_len == 0.0:
            continue
        visibility += max(0.0, -(lx * nx + ly * ny) / gaze_len)
    visibility /= len(scene.learners)

    score = (config.weight_referent_proximity * proximity
             + config.weight_incidence * cos_incidence
             + config.weight_learner_visibility * visibility)
    return PlacementResult(
        surface_id=surface.id,
        along_m=u,
        height_m=v,
        point=(xy[0], xy[1], v),
        pan_rad=pan,
        tilt_rad=tilt,
        incidence_rad=incidence,
        score=score,
        breakdown=ScoreBreakdown(proximity, cos_incidence, visibility),
    )


def referent_wall_projection(scene: Scene, surface: Surface) -> tuple[float, Point2]:
    """Foot of the referent on a surface base, as (along, point)."""
    return project_point_to_segment(scene.referent, surface.base[0], surface.base[1])


# --- scene files --------------------------------------------------------------

def _fail(source: str, key: str, message: str):
    raise LibraryValidationError([IntegrityFinding(source, key, message)])


def load_scene(path: str | Path) -> Scene:
    """Read a scene JSON file (see README for the schema)."""
    scene_path = Path(path)
    source = scene_path.name
    try:
        raw = json.loads(scene_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        _fail(source, "", f"unreadable scene file: {exc}")
    if not isinstance(raw, dict):
        _fail(source, "", "scene file must hold a JSON object")
    try:
        robot = Pose(float(raw["robot"]["x"]), float(raw["robot"]["y"]),
                     float(raw["robot"]["heading"]))
        projector_height = float(raw["projector_height"])
        learners = tuple(
            Learner(float(l["x"]), float(l["y"]), float(l.get("eye_height", 1.6)))
            for l in raw["learners"])
        target_device_id = str(raw["target_device_id"])
        referent = (float(raw["referent"][0]), float(raw["referent"][1]))
        obstacles = tuple(
            tuple((float(p[0]), float(p[1])) for p in polygon)
            for polygon in raw.get("obstacles", []))
        surfaces = []
        for s in raw["surfaces"]:
            base = ((float(s["base"][0][0]), float(s["base"][0][1])),
                    (float(s["base"][1][0]), float(s["base"][1][1])))
            normal = (float(s["normal"][0]), float(s["normal"][1]))
            norm = math.hypot(*normal)
            if norm == 0.0:
                _fail(source, f"surfaces.{s.get('id')}", "normal must be non-zero")
            surfaces.append(Surface(
                str(s["id"]), base,
                (float(s["height_range"][0]), float(s["height_range"][1])),
                (normal[0] / norm, normal[1] / norm)))
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        _fail(source, "", f"malformed scene: {exc!r}")
    scene = Scene(robot, projector_height, learners, target_device_id,
                  referent, obstacles, tuple(surfaces))
    problems = scene_problems(scene)
    if problems:
        raise LibraryValidationError(
            [IntegrityFinding(source, "", p) for p in problems])
    return scene


def scene_to_dict(scene: Scene) -> dict:
    return {
        "robot": {"x": scene.robot.x, "y": scene.robot.y, "heading": scene.robot.heading},
        "projector_height": scene.projector_height,
        "learners": [
            {"x": l.x, "y": l.y, "eye_height": l.eye_height} for l in scene.learners
        ],
        "target_device_id": scene.target_device_id,
        "referent": list(scene.referent),
        "obstacles": [[list(p) for p in polygon] for polygon in scene.obstacles],
        "surfaces": [
            {
                "id": s.id,
                "base": [list(s.base[0]), list(s.base[1])],
                "height_range": list(s.height_range),
                "normal": list(s.normal),
            }
            for s in scene.surfaces
        ],
    }
