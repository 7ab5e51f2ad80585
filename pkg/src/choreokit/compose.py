"""Per-segment selection of visuals and gestures.

The default composer is rule-based and deterministic.  An external composer
client (an LLM or anything else) can override the choice, but its output is
untrusted: every proposed asset is re-checked against the segment's learning
point before it is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from .errors import CompositionError
from .model import (
    GESTURE_KIND_PRIORITY,
    AssetLibrary,
    GestureUnit,
    SpeechSegment,
    VisualAsset,
    query_gestures,
    query_visuals,
)


@dataclass(frozen=True)
class Selection:
    segment_id: str
    visuals: tuple[VisualAsset, ...] = ()
    gestures: tuple[GestureUnit, ...] = ()
    rationale: str = ""


class ComposerClient(Protocol):
    def compose(
        self,
        segment: SpeechSegment,
        visual_candidates: list[VisualAsset],
        gesture_candidates: list[GestureUnit],
    ) -> Selection: ...


def compose(
    segment: SpeechSegment,
    library: AssetLibrary,
    composer_client: ComposerClient | None = None,
    max_gestures: int = 1,
) -> Selection:
    """Select assets for one segment.

    Segments without a learning point get an empty selection.  The default
    rule takes every linked visual in rank order and the highest-priority
    gestures (pointing beats depiction beats abstraction) up to max_gestures.
    """
    if segment.learning_point_id is None:
        return Selection(segment.id, rationale="no learning point to illustrate")
    visual_candidates = query_visuals(library, segment.learning_point_id)
    gesture_candidates = query_gestures(
        library, segment.learning_point_id, segment.device_id)

    if composer_client is not None:
        proposal = composer_client.compose(segment, visual_candidates, gesture_candidates)
        _check_linkage(proposal, segment, visual_candidates, gesture_candidates)
        return proposal

    ranked = sorted(
        gesture_candidates,
        key=lambda g: (GESTURE_KIND_PRIORITY[g.kind], g.id),
    )
    chosen = tuple(ranked[:max_gestures])
    return Selection(
        segment.id,
        visuals=tuple(visual_candidates),
        gestures=chosen,
        rationale=(
            f"rule-based: {len(visual_candidates)} visual(s) in rank order, "
            f"{len(chosen)} of {len(gesture_candidates)} gesture(s) by kind priority"
        ),
    )


def _check_linkage(
    proposal: Selection,
    segment: SpeechSegment,
    visual_candidates: list[VisualAsset],
    gesture_candidates: list[GestureUnit],
) -> None:
    allowed_visuals = {v.id for v in visual_candidates}
    allowed_gestures = {g.id for g in gesture_candidates}
    for visual in proposal.visuals:
        if visual.id not in allowed_visuals:
            raise CompositionError(
                f"composer proposed visual {visual.id!r} that is not linked to "
                f"learning point {segment.learning_point_id!r}")
    for gesture in proposal.gestures:
        if gesture.id not in allowed_gestures:
            raise CompositionError(
                f"composer proposed gesture {gesture.id!r} that is not linked to "
                f"learning point {segment.learning_point_id!r} on device "
                f"{segment.device_id!r}")
    if proposal.segment_id != segment.id:
        raise CompositionError(
            f"composer answered for segment {proposal.segment_id!r}, "
            f"expected {segment.id!r}")


def compose_all(
    segments: list[SpeechSegment],
    library: AssetLibrary,
    composer_client: ComposerClient | None = None,
    max_gestures: int = 1,
) -> dict[str, Selection]:
    return {
        segment.id: compose(segment, library, composer_client, max_gestures)
        for segment in segments
    }
