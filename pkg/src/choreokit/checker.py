"""Independent timeline checker.

Re-derives every scheduling law from the timeline data alone, sharing no
code with the aligner, so it can serve as an oracle over fuzzed tours and
as the gatekeeper for manual edits.

Events that carry a manual override are held to the hard invariants only
(ordering, bounds, channel exclusivity); the exact span and contiguity laws
describe the untouched compiler schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import AssetLibrary
from .timeline import CHANNELS, GESTURE, SPEECH, VISUAL, ChannelEvent, Timeline


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    event_id: str | None = None

    def __str__(self) -> str:
        suffix = f" [{self.event_id}]" if self.event_id else ""
        return f"{self.code}: {self.message}{suffix}"


@dataclass
class ValidationReport:
    violations: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [f.code for f in self.violations]


def validate_timeline(
    timeline: Timeline, library: AssetLibrary | None = None
) -> ValidationReport:
    """Check every law; pass a library to also get coverage warnings."""
    report = ValidationReport()
    overridden = set(timeline.overrides)

    _check_structure(timeline, report)
    _check_exclusivity(timeline, report)
    _check_speech_contiguity(timeline, report, overridden)
    _check_anchors(timeline, report, overridden)
    _check_pause_law(timeline, report)
    if library is not None:
        _check_coverage(timeline, library, report)
    return report


def _check_structure(timeline: Timeline, report: ValidationReport) -> None:
    seen: set[str] = set()
    for event in timeline.all_events():
        if event.event_id in seen:
            report.violations.append(Finding(
                "duplicate-event-id", f"event id {event.event_id!r} appears twice",
                event.event_id))
        seen.add(event.event_id)
        if event.start_ms < 0:
            report.violations.append(Finding(
                "negative-time", f"event starts at {event.start_ms} ms", event.event_id))
        if event.start_ms >= event.end_ms:
            report.violations.append(Finding(
                "empty-span",
                f"event spans [{event.start_ms}, {event.end_ms})", event.event_id))


def _check_exclusivity(timeline: Timeline, report: ValidationReport) -> None:
    for channel in CHANNELS:
        events = sorted(timeline.channel(channel), key=lambda e: (e.start_ms, e.event_id))
        for prev, nxt in zip(events, events[1:]):
            if nxt.start_ms < prev.end_ms:
                report.violations.append(Finding(
                    "channel-overlap",
                    f"{channel} events {prev.event_id!r} and {nxt.event_id!r} overlap "
                    f"({prev.end_ms} > {nxt.start_ms})",
                    nxt.event_id))


def _check_speech_contiguity(
    timeline: Timeline, report: ValidationReport, overridden: set[str]
) -> None:
    speech = timeline.speech
    for prev, nxt in zip(speech, speech[1:]):
        if nxt.start_ms < prev.start_ms:
            report.violations.append(Finding(
                "speech-order",
                f"speech event {nxt.event_id!r} starts before {prev.event_id!r}",
                nxt.event_id))
        if prev.event_id in overridden or nxt.event_id in overridden:
            continue
        pause = timeline.pauses.get(prev.segment_id)
        if pause is None:
            report.violations.append(Finding(
                "missing-pause", f"no pause recorded after {prev.segment_id!r}",
                prev.event_id))
            continue
        expected = prev.end_ms + pause
        if nxt.start_ms != expected:
            report.violations.append(Finding(
                "speech-gap",
                f"speech event {nxt.event_id!r} starts at {nxt.start_ms}, "
                f"expected {expected}",
                nxt.event_id))
    if speech and speech[0].event_id not in overridden and speech[0].start_ms != 0:
        report.violations.append(Finding(
            "speech-gap", f"first speech event starts at {speech[0].start_ms}, expected 0",
            speech[0].event_id))


def _segment_windows(timeline: Timeline) -> dict[str, tuple[int, int, int]]:
    """segment_id -> (start, end, window_end); window runs to the next start."""
    windows: dict[str, tuple[int, int, int]] = {}
    for event in timeline.speech:
        pause = timeline.pauses.get(event.segment_id, 0)
        windows[event.segment_id] = (event.start_ms, event.end_ms, event.end_ms + pause)
    return windows


def _check_anchors(
    timeline: Timeline, report: ValidationReport, overridden: set[str]
) -> None:
    windows = _segment_windows(timeline)
    by_segment: dict[str, list[ChannelEvent]] = {}
    for event in timeline.visual:
        by_segment.setdefault(event.segment_id, []).append(event)

    for channel in (VISUAL, GESTURE):
        for event in timeline.channel(channel):
            if event.segment_id not in windows:
                report.violations.append(Finding(
                    "unknown-anchor",
                    f"{channel} event cites unknown segment {event.segment_id!r}",
                    event.event_id))
                continue
            if event.event_id in overridden:
                continue
            seg_start, _seg_end, window_end = windows[event.segment_id]
            if event.start_ms < seg_start or event.end_ms > window_end:
                report.violations.append(Finding(
                    "anchor-outside-window",
                    f"{channel} event spans [{event.start_ms}, {event.end_ms}) outside "
                    f"its segment window [{seg_start}, {window_end})",
                    event.event_id))

    # Visual span laws: a lone visual covers its whole segment; several
    # visuals tile it exactly.
    for segment_id, events in sorted(by_segment.items()):
        if segment_id not in windows:
            continue
        if any(e.event_id in overridden for e in events):
            continue
        seg_start, seg_end, _ = windows[segment_id]
        events = sorted(events, key=lambda e: e.start_ms)
        if events[0].start_ms != seg_start:
            report.violations.append(Finding(
                "visual-span",
                f"first visual for {segment_id!r} starts at {events[0].start_ms}, "
                f"segment starts at {seg_start}",
                events[0].event_id))
        if events[-1].end_ms != seg_end:
            report.violations.append(Finding(
                "visual-span",
                f"last visual for {segment_id!r} ends at {events[-1].end_ms}, "
                f"segment ends at {seg_end}",
                events[-1].event_id))
        for prev, nxt in zip(events, events[1:]):
            if nxt.start_ms != prev.end_ms:
                report.violations.append(Finding(
                    "visual-partition",
                    f"visuals for {segment_id!r} leave [{prev.end_ms}, {nxt.start_ms})",
                    nxt.event_id))


def _check_pause_law(timeline: Timeline, report: ValidationReport) -> None:
    gesture_total: dict[str, int] = {}
    for event in timeline.gesture:
        gesture_total[event.segment_id] = (
            gesture_total.get(event.segment_id, 0) + (event.end_ms - event.start_ms))
    for event in timeline.speech:
        pause = timeline.pauses.get(event.segment_id)
        if pause is None:
            continue
        duration = event.end_ms - event.start_ms
        expected = timeline.base_pause_ms + max(
            0, gesture_total.get(event.segment_id, 0) - duration)
        if pause != expected:
            report.violations.append(Finding(
                "pause-law",
                f"pause after {event.segment_id!r} is {pause} ms, expected {expected}",
                event.event_id))


def _check_coverage(
    timeline: Timeline, library: AssetLibrary, report: ValidationReport
) -> None:
    visuals_by_lp: dict[str, int] = {}
    for visual in library.visuals.values():
        visuals_by_lp[visual.learning_point_id] = \
            visuals_by_lp.get(visual.learning_point_id, 0) + 1
    gestures_by_key: dict[tuple[str, str], int] = {}
    for gesture in library.gestures.values():
        key = (gesture.context.learning_point_id, gesture.context.device_id)
        gestures_by_key[key] = gestures_by_key.get(key, 0) + 1

    scheduled_visuals = {e.segment_id for e in timeline.visual}
    scheduled_gestures = {e.segment_id for e in timeline.gesture}

    for event in timeline.speech:
        lp_id = event.learning_point_id
        if lp_id is None:
            continue
        if event.segment_id not in scheduled_visuals:
            if visuals_by_lp.get(lp_id, 0) > 0:
                report.warnings.append(Finding(
                    "coverage-unscheduled-visuals",
                    f"learning point {lp_id!r} has visual assets in the library "
                    f"but none scheduled",
                    event.event_id))
            else:
                report.warnings.append(Finding(
                    "coverage-no-visual-asset",
                    f"learning point {lp_id!r} has no visual asset in the library",
                    event.event_id))
        if event.segment_id not in scheduled_gestures \
                and gestures_by_key.get((lp_id, event.device_id or ""), 0) > 0:
            report.warnings.append(Finding(
                "coverage-unscheduled-gestures",
                f"learning point {lp_id!r} has matching gesture units but none scheduled",
                event.event_id))
