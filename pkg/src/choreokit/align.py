"""Rule-based temporal alignment of speech, visuals, and gestures.

Scheduling rules, applied per segment in tour order:

* Speech runs back to back; segment k starts where k-1 ended plus that
  segment's pause.  Every pause starts from base_pause_ms.
* A single selected visual stays up for the segment's whole span.
* Several visuals partition the segment span.  Image i is anchored at the
  character-offset fraction of its explained sentence (sentence i of the
  segment, clamped to the last sentence); the first image is pinned to the
  segment start and the last runs to the segment end.
* Gestures play sequentially from the segment start.  If they outrun the
  speech by some overshoot, the pause after the segment grows by exactly
  that overshoot so nothing spills into the next segment.

The output is deterministic: same segments, selections, and config mean an
identical timeline.
"""

from __future__ import annotations

from .compose import Selection
from .config import Config
from .errors import AlignmentError
from .model import SpeechSegment
from .scripting import split_sentences
from .timeline import GESTURE, SPEECH, VISUAL, ChannelEvent, Timeline


def align(
    segments: list[SpeechSegment],
    selections: dict[str, Selection],
    config: Config,
    tour_id: str = "tour",
    variant: str | None = None,
    warnings: list[str] | None = None,
) -> Timeline:
    if not segments:
        raise AlignmentError("cannot align an empty segment list")
    speech_events: list[ChannelEvent] = []
    visual_events: list[ChannelEvent] = []
    gesture_events: list[ChannelEvent] = []
    pauses: dict[str, int] = {}

    clock = 0
    for segment in segments:
        if segment.duration_ms is None:
            raise AlignmentError(f"segment {segment.id!r} was never synthesized")
        if segment.duration_ms <= 0:
            raise AlignmentError(f"segment {segment.id!r} has zero duration")
        start = clock
        end = start + segment.duration_ms
        speech_events.append(ChannelEvent(
            event_id=f"sp-{segment.id}",
            channel=SPEECH,
            ref=segment.id,
            start_ms=start,
            end_ms=end,
            segment_id=segment.id,
            learning_point_id=segment.learning_point_id,
            device_id=segment.device_id,
            text=segment.text,
            audio_ref=segment.audio_ref,
        ))

        selection = selections.get(segment.id) or Selection(segment.id)
        visual_events.extend(_visual_events(segment, selection, start, end, config))

        gesture_clock = start
        gesture_total = 0
        for unit in selection.gestures:
            gesture_events.append(ChannelEvent(
                event_id=f"ge-{segment.id}-{unit.id}",
                channel=GESTURE,
                ref=unit.id,
                start_ms=gesture_clock,
                end_ms=gesture_clock + unit.duration_ms,
                segment_id=segment.id,
                learning_point_id=segment.learning_point_id,
                media_ref=unit.motion_ref,
                kind=unit.kind.value,
            ))
            gesture_clock += unit.duration_ms
            gesture_total += unit.duration_ms

        overshoot = max(0, gesture_total - segment.duration_ms)
        if (overshoot > 0 and config.max_pause_extension_ms is not None
                and overshoot > config.max_pause_extension_ms and warnings is not None):
            warnings.append(
                f"segment {segment.id!r}: gestures overrun speech by {overshoot} ms, "
                f"beyond the configured bound of {config.max_pause_extension_ms} ms")
        pause = config.base_pause_ms + overshoot
        pauses[segment.id] = pause
        clock = end + pause

    return Timeline(
        tour_id=tour_id,
        speech=tuple(speech_events),
        visual=tuple(visual_events),
        gesture=tuple(gesture_events),
        pauses=pauses,
        variant=variant,
        base_pause_ms=config.base_pause_ms,
    )


def _visual_events(
    segment: SpeechSegment,
    selection: Selection,
    start: int,
    end: int,
    config: Config,
) -> list[ChannelEvent]:
    visuals = selection.visuals
    if not visuals:
        return []
    boundaries = _image_boundaries(
        segment.text, len(visuals), start, end, config.sentence_terminators)
    events = []
    for i, asset in enumerate(visuals):
        events.append(ChannelEvent(
            event_id=f"vi-{segment.id}-{asset.id}",
            channel=VISUAL,
            ref=asset.id,
            start_ms=boundaries[i],
            end_ms=boundaries[i + 1],
            segment_id=segment.id,
            learning_point_id=segment.learning_point_id,
            media_ref=asset.image_ref,
        ))
    return events


def _image_boundaries(
    text: str, n_images: int, start: int, end: int, terminators: str
) -> list[int]:
    """Start times for each image plus the closing segment end.

    Image i (0-based) anchors at the character fraction of sentence i's
    offset in the segment text; boundaries are clamped and forced strictly
    increasing so every image keeps at least one millisecond.
    """
    duration = end - start
    if n_images == 1:
        return [start, end]
    if duration < n_images:
        raise AlignmentError(
            f"segment of {duration} ms is too short for {n_images} images")
    sentences = split_sentences(text, terminators)
    offsets = [s[0] for s in sentences] or [0]
    total = max(1, len(text))
    boundaries = [start]
    for i in range(1, n_images):
        offset = offsets[min(i, len(offsets) - 1)]
        anchored = start + (duration * offset) // total
        # Leave room for the images still to come, then keep strict order.
        anchored = min(anchored, end - (n_images - i))
        boundaries.append(max(anchored, boundaries[-1] + 1))
    boundaries.append(end)
    return boundaries
