"""Timeline types and the three-file wire format.

A compiled tour is three JSON documents (narration, visuals, gestures)
sharing one clock that starts at 0.  All times are integer milliseconds.
Emission is byte-stable: the same timeline always serializes to the same
bytes, which is what makes recompilation reproducible and diffable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import TimelineFormatError

SCHEMA_VERSION = "1.0"

SPEECH = "speech"
VISUAL = "visual"
GESTURE = "gesture"
CHANNELS = (SPEECH, VISUAL, GESTURE)

_CHANNEL_FILES = {SPEECH: "narration.json", VISUAL: "visuals.json", GESTURE: "gestures.json"}
_CHANNEL_KEYS = {SPEECH: "narration", VISUAL: "visuals", GESTURE: "gestures"}


@dataclass(frozen=True)
class ChannelEvent:
    """One timed occurrence on a channel, anchored to a speech segment."""

    event_id: str
    channel: str
    ref: str
    start_ms: int
    end_ms: int
    segment_id: str
    learning_point_id: str | None = None
    device_id: str | None = None
    text: str | None = None
    audio_ref: str | None = None
    media_ref: str | None = None
    kind: str | None = None
    placement: dict | None = None

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms

    def shifted(self, delta_ms: int) -> "ChannelEvent":
        return replace(self, start_ms=self.start_ms + delta_ms,
                       end_ms=self.end_ms + delta_ms)


@dataclass
class Timeline:
    """Three exclusive channels on one clock plus the pause ledger."""

    tour_id: str
    speech: tuple[ChannelEvent, ...]
    visual: tuple[ChannelEvent, ...]
    gesture: tuple[ChannelEvent, ...]
    pauses: dict[str, int]
    variant: str | None = None
    base_pause_ms: int = 500
    # Manual per-event offsets already applied to the events above.
    overrides: dict[str, int] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def channel(self, name: str) -> tuple[ChannelEvent, ...]:
        return {SPEECH: self.speech, VISUAL: self.visual, GESTURE: self.gesture}[name]

    def all_events(self) -> list[ChannelEvent]:
        return [*self.speech, *self.visual, *self.gesture]

    def find_event(self, event_id: str) -> ChannelEvent | None:
        for event in self.all_events():
            if event.event_id == event_id:
                return event
        return None

    def end_ms(self) -> int:
        if not self.speech:
            return 0
        last = self.speech[-1]
        end = last.end_ms + self.pauses.get(last.segment_id, 0)
        for event in self.all_events():
            end = max(end, event.end_ms)
        return end


def _event_to_dict(event: ChannelEvent) -> dict:
    data: dict = {
        "event_id": event.event_id,
        "ref": event.ref,
        "segment_id": event.segment_id,
        "learning_point_id": event.learning_point_id,
        "start_ms": event.start_ms,
        "end_ms": event.end_ms,
    }
    if event.channel == SPEECH:
        data["device_id"] = event.device_id
        data["text"] = event.text
        data["audio_ref"] = event.audio_ref
    elif event.channel == VISUAL:
        data["image_ref"] = event.media_ref
        data["placement"] = event.placement
    else:
        data["motion_ref"] = event.media_ref
        data["kind"] = event.kind
    return data


def _header(timeline: Timeline, channel: str) -> dict:
    return {
        "schema_version": timeline.schema_version,
        "tour_id": timeline.tour_id,
        "variant": timeline.variant,
        "channel": _CHANNEL_KEYS[channel],
        "clock_origin_ms": 0,
        "base_pause_ms": timeline.base_pause_ms,
    }


def timeline_documents(timeline: Timeline) -> dict[str, dict]:
    """The three wire documents, keyed by file name."""
    documents: dict[str, dict] = {}
    for channel in CHANNELS:
        doc = _header(timeline, channel)
        events = []
        for event in timeline.channel(channel):
            data = _event_to_dict(event)
            if channel == SPEECH:
                data["pause_after_ms"] = timeline.pauses.get(event.segment_id, 0)
            events.append(data)
        doc["events"] = events
        if channel == SPEECH:
            doc["overrides"] = dict(sorted(timeline.overrides.items()))
        documents[_CHANNEL_FILES[channel]] = doc
    return documents


def dump_document(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit(timeline: Timeline, out_dir: str | Path) -> list[Path]:
    """Write the three timeline files; returns their paths."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for filename, document in timeline_documents(timeline).items():
        path = directory / filename
        path.write_text(dump_document(document), encoding="utf-8")
        written.append(path)
    return written


def _event_from_dict(data: dict, channel: str, where: str) -> ChannelEvent:
    try:
        common = {
            "event_id": data["event_id"],
            "channel": channel,
            "ref": data["ref"],
            "start_ms": int(data["start_ms"]),
            "end_ms": int(data["end_ms"]),
            "segment_id": data["segment_id"],
            "learning_point_id": data.get("learning_point_id"),
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise TimelineFormatError(f"{where}: bad event: {exc}")
    if channel == SPEECH:
        return ChannelEvent(**common, device_id=data.get("device_id"),
                            text=data.get("text"), audio_ref=data.get("audio_ref"))
    if channel == VISUAL:
        return ChannelEvent(**common, media_ref=data.get("image_ref"),
                            placement=data.get("placement"))
    return ChannelEvent(**common, media_ref=data.get("motion_ref"),
                        kind=data.get("kind"))


def parse_timeline(directory: str | Path) -> Timeline:
    """Read the three timeline files back into a Timeline."""
    base = Path(directory)
    docs: dict[str, dict] = {}
    for channel, filename in _CHANNEL_FILES.items():
        path = base / filename
        if not path.is_file():
            raise TimelineFormatError(f"missing timeline file {filename}")
        try:
            docs[channel] = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise TimelineFormatError(f"{filename}: {exc}")
    narration = docs[SPEECH]
    tour_id = narration.get("tour_id")
    if not isinstance(tour_id, str):
        raise TimelineFormatError("narration.json: missing tour_id")
    for channel in CHANNELS:
        if docs[channel].get("tour_id") != tour_id:
            raise TimelineFormatError("timeline files disagree on tour_id")
        if not isinstance(docs[channel].get("events"), list):
            raise TimelineFormatError(f"{_CHANNEL_FILES[channel]}: missing events list")

    channels: dict[str, tuple[ChannelEvent, ...]] = {}
    pauses: dict[str, int] = {}
    for channel in CHANNELS:
        events = []
        for data in docs[channel]["events"]:
            event = _event_from_dict(data, channel, _CHANNEL_FILES[channel])
            events.append(event)
            if channel == SPEECH:
                pauses[event.segment_id] = int(data.get("pause_after_ms", 0))
        channels[channel] = tuple(events)

    overrides_raw = narration.get("overrides", {})
    if not isinstance(overrides_raw, dict):
        raise TimelineFormatError("narration.json: overrides must be an object")
    return Timeline(
        tour_id=tour_id,
        speech=channels[SPEECH],
        visual=channels[VISUAL],
        gesture=channels[GESTURE],
        pauses=pauses,
        variant=narration.get("variant"),
        base_pause_ms=int(narration.get("base_pause_ms", 500)),
        overrides={k: int(v) for k, v in overrides_raw.items()},
        schema_version=str(narration.get("schema_version", SCHEMA_VERSION)),
    )
