from __future__ import annotations

import json
import math
import random

import pytest

from choreokit.config import PlacementConfig
from choreokit.errors import LibraryValidationError, PlacementError
from choreokit.model import Pose, Surface
from choreokit.placement import (
    Learner,
    Scene,
    gimbal_angles,
    load_scene,
    referent_wall_projection,
    scene_to_dict,
    solve_placement,
)
from conftest import SAMPLE_SCENES
from oracles import brute_force_placement, check_feasibility, random_scene


# --- gimbal angles -------------------------------------------------------------

def test_gimbal_straight_ahead():
    assert gimbal_angles((0.0, 0.0), 1.0, 0.0, (1.0, 0.0, 1.0)) == (0.0, 0.0)


def test_gimbal_below():
    pan, tilt = gimbal_angles((0.0, 0.0), 1.0, 0.0, (1.0, 0.0, 0.0))
    assert pan == 0.0
    assert tilt == pytest.approx(-math.pi / 4)


def test_gimbal_directly_left():
    pan, tilt = gimbal_angles((0.0, 0.0), 1.0, 0.0, (0.0, 1.0, 1.0))
    assert pan == pytest.approx(math.pi / 2)
    assert tilt == 0.0


def test_gimbal_zero_offset_rejected():
    with pytest.raises(ValueError):
        gimbal_angles((2.0, 3.0), 1.5, 0.7, (2.0, 3.0, 1.5))


def angle_gap(a: float, b: float) -> float:
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def test_gimbal_matches_rotation_matrix_recomputation():
    """Independent path: rotate the offset into the robot frame, then atan2."""
    rng = random.Random(4242)
    for _ in range(1000):
        px, py = rng.uniform(-10, 10), rng.uniform(-10, 10)
        height = rng.uniform(0.5, 2.5)
        heading = rng.uniform(-7, 7)
        tx, ty = rng.uniform(-10, 10), rng.uniform(-10, 10)
        tz = rng.uniform(0.0, 3.0)
        if (tx, ty, tz) == (px, py, height):
            continue
        pan, tilt = gimbal_angles((px, py), height, heading, (tx, ty, tz))

        dx, dy, dz = tx - px, ty - py, tz - height
        cos_h, sin_h = math.cos(-heading), math.sin(-heading)
        local_x = dx * cos_h - dy * sin_h
        local_y = dx * sin_h + dy * cos_h
        expected_pan = math.atan2(local_y, local_x)
        expected_tilt = math.atan2(dz, math.hypot(local_x, local_y))
        assert angle_gap(pan, expected_pan) < 1e-6
        assert abs(tilt - expected_tilt) < 1e-6
        assert -math.pi <= pan <= math.pi


def test_rotation_equivariance():
    """Rotating the scene about the projector shifts pan linearly, not tilt."""
    rng = random.Random(11)
    for _ in range(200):
        px, py = rng.uniform(-5, 5), rng.uniform(-5, 5)
        height = rng.uniform(0.5, 2.0)
        heading = rng.uniform(-3, 3)
        tx, ty, tz = rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0, 3)
        if math.hypot(tx - px, ty - py) < 1e-6:
            continue
        theta = rng.uniform(-math.pi, math.pi)
        pan, tilt = gimbal_angles((px, py), height, heading, (tx, ty, tz))

        cos_t, sin_t = math.cos(-theta), math.sin(-theta)
        rx = px + (tx - px) * cos_t - (ty - py) * sin_t
        ry = py + (tx - px) * sin_t + (ty - py) * cos_t
        pan_rotated, tilt_rotated = gimbal_angles((px, py), height, heading,
                                                  (rx, ry, tz))
        assert abs(tilt_rotated - tilt) < 1e-9
        assert angle_gap(pan_rotated, pan - theta) < 1e-9
        # Turning only the head by theta shifts pan by exactly -theta.
        pan_heading, _ = gimbal_angles((px, py), height, heading + theta,
                                       (tx, ty, tz))
        assert angle_gap(pan_heading, pan - theta) < 1e-9


# --- solve_placement -------------------------------------------------------------

def canonical_scene() -> Scene:
    wall = Surface("wall-n", ((0.0, 5.0), (4.0, 5.0)), (0.8, 2.2), (0.0, -1.0))
    return Scene(
        robot=Pose(2.0, 2.0, math.pi / 2),
        projector_height=1.45,
        learners=(Learner(1.2, 1.8, 1.6), Learner(2.8, 1.7, 1.55)),
        target_device_id="target",
        referent=(2.0, 4.3),
        obstacles=(),
        surfaces=(wall,),
    )


def test_wall_behind_target_lands_near_referent_projection():
    scene = canonical_scene()
    config = PlacementConfig()
    result = solve_placement(scene, config)
    assert result.surface_id == "wall-n"

    along_star, _ = referent_wall_projection(scene, scene.surfaces[0])
    assert abs(result.along_m - along_star) <= config.grid_step_m + 1e-9

    oracle = brute_force_placement(scene, config, step=0.01)
    assert oracle is not None
    assert oracle[0] == result.surface_id
    assert abs(result.along_m - oracle[1]) <= config.grid_step_m + 1e-9
    assert abs(result.height_m - oracle[2]) <= config.grid_step_m + 1e-9


def test_agrees_with_brute_force_on_random_scenes():
    rng = random.Random(2025)
    config = PlacementConfig()
    for _ in range(20):
        scene = random_scene(rng)
        result = solve_placement(scene, config)
        oracle = brute_force_placement(scene, config, step=0.01)
        assert oracle is not None
        assert result.surface_id == oracle[0]
        assert abs(result.along_m - oracle[1]) <= config.grid_step_m + 1e-9
        assert abs(result.height_m - oracle[2]) <= config.grid_step_m + 1e-9


def test_returned_placement_passes_filters_independently():
    rng = random.Random(31)
    config = PlacementConfig()
    for _ in range(20):
        scene = random_scene(rng)
        result = solve_placement(scene, config)
        assert check_feasibility(scene, config, result.surface_id, result.point)
        assert result.incidence_rad <= config.max_incidence_rad + 1e-9
        z0, z1 = next(s for s in scene.surfaces
                      if s.id == result.surface_id).height_range
        assert z0 <= result.height_m <= z1


def test_fully_blocked_wall_reports_all_samples():
    scene = canonical_scene()
    blocked = Scene(
        robot=scene.robot,
        projector_height=scene.projector_height,
        learners=scene.learners,
        target_device_id=scene.target_device_id,
        referent=scene.referent,
        obstacles=(((-1.0, 3.0), (5.0, 3.0), (5.0, 3.6), (-1.0, 3.6)),),
        surfaces=scene.surfaces,
    )
    with pytest.raises(PlacementError) as excinfo:
        solve_placement(blocked, PlacementConfig())
    err = excinfo.value
    assert err.rejections["projector_occlusion"] == err.samples
    assert err.samples == 41 * 15  # 4 m / 0.1 plus one, 1.4 m / 0.1 plus one


def test_mirror_symmetric_tie_breaks_on_surface_id():
    left = Surface("wall-a", ((-3.0, -1.0), (-3.0, 5.0)), (0.8, 2.0), (1.0, 0.0))
    right = Surface("wall-b", ((3.0, -1.0), (3.0, 5.0)), (0.8, 2.0), (-1.0, 0.0))
    scene = Scene(
        robot=Pose(0.0, 0.0, math.pi / 2),
        projector_height=1.4,
        learners=(Learner(0.0, -1.0, 1.6),),
        target_device_id="target",
        referent=(0.0, 2.0),
        obstacles=(),
        surfaces=(right, left),
    )
    result = solve_placement(scene, PlacementConfig())
    assert result.surface_id == "wall-a"


def test_infeasible_scene_counts_filters_separately():
    scene = canonical_scene()
    tight = PlacementConfig()
    tight.max_incidence_rad = math.radians(0.01)
    with pytest.raises(PlacementError) as excinfo:
        solve_placement(scene, tight)
    assert excinfo.value.rejections["incidence"] == excinfo.value.samples


def test_invalid_scene_rejected():
    scene = canonical_scene()
    no_learners = Scene(
        robot=scene.robot, projector_height=scene.projector_height,
        learners=(), target_device_id="t", referent=scene.referent,
        obstacles=(), surfaces=scene.surfaces)
    with pytest.raises(PlacementError, match="at least one learner"):
        solve_placement(no_learners, PlacementConfig())


# --- scene files -------------------------------------------------------------------

def test_sample_scene_loads_and_solves():
    scene = load_scene(SAMPLE_SCENES / "fdm-corner.json")
    assert scene.target_device_id == "fdm-printer"
    result = solve_placement(scene, PlacementConfig())
    assert result.surface_id == "wall-north"
    # Optimum sits on the wall right behind the printer.
    assert abs(result.point[0] - 2.0) < 0.3
    assert result.point[1] == pytest.approx(9.0)


def test_scene_dict_roundtrip():
    scene = load_scene(SAMPLE_SCENES / "fdm-corner.json")
    payload = scene_to_dict(scene)
    assert payload["robot"]["x"] == scene.robot.x
    assert len(payload["surfaces"]) == len(scene.surfaces)


def test_scene_load_rejects_malformed(tmp_path):
    path = tmp_path / "scene.json"
    path.write_text(json.dumps({"robot": {"x": 0}}))
    with pytest.raises(LibraryValidationError):
        load_scene(path)


def test_scene_load_rejects_empty_learners(tmp_path):
    scene = json.loads((SAMPLE_SCENES / "fdm-corner.json").read_text())
    scene["learners"] = []
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(scene))
    with pytest.raises(LibraryValidationError, match="learner"):
        load_scene(path)
