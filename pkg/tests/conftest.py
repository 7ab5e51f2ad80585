from __future__ import annotations

import math
from pathlib import Path

import pytest

from choreokit.config import Config
from choreokit.library import load_library
from choreokit.model import (
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
    VisualAsset,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
SAMPLE_LIBRARY = REPO_ROOT / "sample_library"
SAMPLE_TOURS = REPO_ROOT / "sample_tours"
SAMPLE_SCENES = REPO_ROOT / "sample_scenes"


@pytest.fixture(scope="session")
def sample_library_path() -> Path:
    return SAMPLE_LIBRARY


@pytest.fixture(scope="session")
def sample_library() -> AssetLibrary:
    return load_library(SAMPLE_LIBRARY)


@pytest.fixture()
def config() -> Config:
    return Config()


def make_tiny_library() -> AssetLibrary:
    """One press device with three learning points and a handful of assets."""
    device = DeviceInfo(
        id="hot-press",
        name="hot press",
        description="A heated platen press for flattening laminates.",
        pose=Pose(1.0, 1.0, 0.0),
        footprint=((0.5, 0.5), (1.5, 0.5), (1.5, 1.5), (0.5, 1.5)),
    )
    points = {
        "lp-a-works": LearningPoint(
            "lp-a-works", "hot-press", LearningCategory.HOW_IT_WORKS,
            "Two heated plates squeeze the stack flat."),
        "lp-b-operate": LearningPoint(
            "lp-b-operate", "hot-press", LearningCategory.OPERATION,
            "Set the temperature, close the plates, and start the timer."),
        "lp-c-safety": LearningPoint(
            "lp-c-safety", "hot-press", LearningCategory.SAFETY,
            "Keep fingers clear of the closing plates."),
    }
    wall = Surface("wall-a", ((0.0, 3.0), (4.0, 3.0)), (0.8, 2.0), (0.0, -1.0))
    visuals = {
        "vis-1": VisualAsset(
            "vis-1", "img/press-steps-1.png", "Step one of pressing.",
            "lp-b-operate",
            PlacementSpec(PlacementSpec.ON_EQUIPMENT, device_id="hot-press", region="lid"),
            sequence_rank=1),
        "vis-2": VisualAsset(
            "vis-2", "img/press-steps-2.png", "Step two of pressing.",
            "lp-b-operate",
            PlacementSpec(PlacementSpec.ON_EQUIPMENT, device_id="hot-press", region="lid"),
            sequence_rank=2),
        "vis-3": VisualAsset(
            "vis-3", "img/press-diagram.png", "Press cross-section.",
            "lp-a-works",
            PlacementSpec(PlacementSpec.NEARBY_SURFACE, surface_id="wall-a"),
            sequence_rank=1),
    }
    gestures = {
        "g-1": GestureUnit(
            "g-1", GestureKind.DEICTIC, "motions/g-1.seq", 2000,
            Pose(1.0, 2.4, -math.pi / 2), "Point at the plates.",
            GestureContext("hot-press", "lp-a-works", "two heated plates")),
        "g-2": GestureUnit(
            "g-2", GestureKind.ICONIC, "motions/g-2.seq", 2600,
            Pose(1.0, 2.4, -math.pi / 2), "Mime the plates closing.",
            GestureContext("hot-press", "lp-a-works", "squeeze the stack flat")),
        "g-3": GestureUnit(
            "g-3", GestureKind.METAPHORIC, "motions/g-3.seq", 1800,
            Pose(1.0, 2.4, -math.pi / 2), "Pull hands back for caution.",
            GestureContext("hot-press", "lp-c-safety", "keep fingers clear")),
    }
    return AssetLibrary(
        learning_points=points,
        devices={"hot-press": device},
        visuals=visuals,
        gestures=gestures,
        surfaces={"wall-a": wall},
    )


@pytest.fixture()
def tiny_library() -> AssetLibrary:
    return make_tiny_library()
