"""Domain types for tour choreography: learning points, assets, scripts, segments.

All times are integer milliseconds, all distances meters, all angles radians.
Objects are immutable after construction; a loaded library is safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import UnknownIdError

Point2 = tuple[float, float]


class LearningCategory(str, Enum):
    HOW_IT_WORKS = "how_it_works"
    OPERATION = "operation"
    SAFETY = "safety"


class GestureKind(str, Enum):
    DEICTIC = "deictic"
    ICONIC = "iconic"
    METAPHORIC = "metaphoric"
    BEAT = "beat"


# Gesture choice order when several kinds compete for one slot: pointing
# first, then depictive, then abstract, then rhythmic.
GESTURE_KIND_PRIORITY: dict[GestureKind, int] = {
    GestureKind.DEICTIC: 0,
    GestureKind.ICONIC: 1,
    GestureKind.METAPHORIC: 2,
    GestureKind.BEAT: 3,
}


@dataclass(frozen=True)
class Pose:
    """2D position plus heading in the map frame (meters, radians)."""

    x: float
    y: float
    heading: float = 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.x, self.y, self.heading))


@dataclass(frozen=True)
class LearningPoint:
    id: str
    device_id: str
    category: LearningCategory
    text: str


@dataclass(frozen=True)
class DeviceInfo:
    id: str
    name: str
    description: str
    pose: Pose
    footprint: tuple[Point2, ...]


@dataclass(frozen=True)
class TourPlan:
    """Which devices to cover, in order."""

    devices: tuple[str, ...]
    tour_id: str = "tour"
    variant: str | None = None


@dataclass(frozen=True)
class ScriptBlock:
    """One narration block; a marked block states one learning point.

    marker_offset is the character offset in ``text`` where the learning
    point statement begins.  Segmentation uses it to decide which sentence
    carries the marker; None on a marked block means offset 0.
    """

    text: str
    learning_point_id: str | None = None
    marker_offset: int | None = None


@dataclass(frozen=True)
class DeviceSection:
    device_id: str
    blocks: tuple[ScriptBlock, ...]


@dataclass(frozen=True)
class AnnotatedScript:
    """Narration for a whole tour, one section per device, markers inline."""

    sections: tuple[DeviceSection, ...]
    variant: str = "v1"

    def full_text(self) -> str:
        return " ".join(
            block.text for section in self.sections for block in section.blocks
        )


@dataclass(frozen=True)
class SpeechSegment:
    """A synthesized narration unit carrying at most one learning point."""

    id: str
    device_id: str
    order_index: int
    text: str
    learning_point_id: str | None = None
    audio_ref: str | None = None
    duration_ms: int | None = None


@dataclass(frozen=True)
class PlacementSpec:
    """Intended projection location: on a device region or a nearby surface."""

    kind: str  # "on_equipment" | "nearby_surface"
    device_id: str | None = None
    region: str | None = None
    surface_id: str | None = None

    ON_EQUIPMENT = "on_equipment"
    NEARBY_SURFACE = "nearby_surface"


@dataclass(frozen=True)
class VisualAsset:
    id: str
    image_ref: str
    description: str
    learning_point_id: str
    placement: PlacementSpec
    sequence_rank: int = 1


@dataclass(frozen=True)
class GestureContext:
    """Which device and learning point a recorded gesture addresses."""

    device_id: str
    learning_point_id: str
    narration: str = ""


@dataclass(frozen=True)
class GestureUnit:
    id: str
    kind: GestureKind
    motion_ref: str
    duration_ms: int
    robot_pose: Pose
    description: str
    context: GestureContext
    # Recorded demonstrations this unit was derived from; merged near-duplicate
    # demonstrations give one unit several refs.
    exemplar_refs: tuple[str, ...] = ()


@dataclass(frozen=True)
class Surface:
    """A candidate projection surface: wall base segment plus height band."""

    id: str
    base: tuple[Point2, Point2]
    height_range: tuple[float, float]
    normal: Point2


@dataclass
class AssetLibrary:
    """All collections, fully cross-resolved; immutable by convention."""

    learning_points: dict[str, LearningPoint] = field(default_factory=dict)
    devices: dict[str, DeviceInfo] = field(default_factory=dict)
    visuals: dict[str, VisualAsset] = field(default_factory=dict)
    gestures: dict[str, GestureUnit] = field(default_factory=dict)
    surfaces: dict[str, Surface] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def learning_points_of(self, device_id: str) -> list[LearningPoint]:
        if device_id not in self.devices:
            raise UnknownIdError(f"unknown device id {device_id!r}")
        return sorted(
            (lp for lp in self.learning_points.values() if lp.device_id == device_id),
            key=lambda lp: lp.id,
        )


def query_visuals(library: AssetLibrary, learning_point_id: str) -> list[VisualAsset]:
    """Visual assets linked to a learning point, ordered by sequence rank."""
    if learning_point_id not in library.learning_points:
        raise UnknownIdError(f"unknown learning point id {learning_point_id!r}")
    linked = [
        v for v in library.visuals.values()
        if v.learning_point_id == learning_point_id
    ]
    return sorted(linked, key=lambda v: (v.sequence_rank, v.id))


def query_gestures(
    library: AssetLibrary, learning_point_id: str, device_id: str
) -> list[GestureUnit]:
    """Gesture units whose context matches both ids, ordered by unit id."""
    if learning_point_id not in library.learning_points:
        raise UnknownIdError(f"unknown learning point id {learning_point_id!r}")
    if device_id not in library.devices:
        raise UnknownIdError(f"unknown device id {device_id!r}")
    matched = [
        g for g in library.gestures.values()
        if g.context.learning_point_id == learning_point_id
        and g.context.device_id == device_id
    ]
    return sorted(matched, key=lambda g: g.id)
