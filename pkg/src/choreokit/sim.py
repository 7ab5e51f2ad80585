"""Virtual-clock replay of a timeline against a simulated robot.

The simulator never touches the wall clock: dispatch jitter is drawn from a
seeded generator, so a (timeline, config) pair always produces the same
trace.  The gesture actuators and the projector are exclusive resources; an
event arriving late on one of those channels is delayed behind its
predecessor, never overlapped.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .checker import validate_timeline
from .errors import SimulationError, TraceMismatchError
from .timeline import GESTURE, SPEECH, VISUAL, Timeline

# Channels that model a physical resource: one body, one projector beam.
EXCLUSIVE_CHANNELS = (VISUAL, GESTURE)

_CHANNEL_ORDER = {SPEECH: 0, VISUAL: 1, GESTURE: 2}


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    jitter_speech_ms: int = 0
    jitter_visual_ms: int = 0
    jitter_gesture_ms: int = 0
    tolerance_ms: float = 1.0

    def jitter_for(self, channel: str) -> int:
        return {
            SPEECH: self.jitter_speech_ms,
            VISUAL: self.jitter_visual_ms,
            GESTURE: self.jitter_gesture_ms,
        }[channel]

    def check(self) -> None:
        if min(self.jitter_speech_ms, self.jitter_visual_ms, self.jitter_gesture_ms) < 0:
            raise SimulationError("jitter bounds must be non-negative")
        if self.tolerance_ms < 0:
            raise SimulationError("tolerance must be non-negative")


@dataclass(frozen=True)
class TraceRecord:
    event_id: str
    channel: str
    ref: str
    scheduled_start_ms: int
    scheduled_end_ms: int
    actual_start_ms: int
    actual_end_ms: int

    @property
    def start_deviation_ms(self) -> int:
        return self.actual_start_ms - self.scheduled_start_ms

    @property
    def end_deviation_ms(self) -> int:
        return self.actual_end_ms - self.scheduled_end_ms


@dataclass
class ExecutionTrace:
    tour_id: str
    seed: int
    records: tuple[TraceRecord, ...]


@dataclass(frozen=True)
class TraceFinding:
    code: str  # "deviation" | "overlap"
    event_id: str
    message: str


@dataclass
class TraceReport:
    findings: list[TraceFinding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def flagged_ids(self) -> set[str]:
        return {f.event_id for f in self.findings if f.code == "deviation"}


def simulate(timeline: Timeline, config: SimConfig) -> ExecutionTrace:
    """Replay the timeline on a virtual clock starting at 0."""
    config.check()
    report = validate_timeline(timeline)
    if not report.ok:
        raise SimulationError(
            "timeline fails validation: " + "; ".join(str(f) for f in report.violations))

    events = sorted(
        timeline.all_events(),
        key=lambda e: (e.start_ms, _CHANNEL_ORDER[e.channel], e.event_id))
    rng = random.Random(config.seed)
    jitter = {}
    for event in events:
        bound = config.jitter_for(event.channel)
        jitter[event.event_id] = rng.randint(-bound, bound) if bound else 0

    records: list[TraceRecord] = []
    resource_free: dict[str, int] = {channel: 0 for channel in EXCLUSIVE_CHANNELS}
    for event in events:
        arrival = max(0, event.start_ms + jitter[event.event_id])
        if event.channel in resource_free:
            arrival = max(arrival, resource_free[event.channel])
        duration = event.end_ms - event.start_ms
        record = TraceRecord(
            event_id=event.event_id,
            channel=event.channel,
            ref=event.ref,
            scheduled_start_ms=event.start_ms,
            scheduled_end_ms=event.end_ms,
            actual_start_ms=arrival,
            actual_end_ms=arrival + duration,
        )
        records.append(record)
        if event.channel in resource_free:
            resource_free[event.channel] = record.actual_end_ms

    records.sort(key=lambda r: (r.actual_start_ms, _CHANNEL_ORDER[r.channel], r.event_id))
    return ExecutionTrace(timeline.tour_id, config.seed, tuple(records))


def verify_trace(
    trace: ExecutionTrace, timeline: Timeline, tolerance_ms: float = 1.0
) -> TraceReport:
    """Flag records drifting beyond tolerance and any resource overlap."""
    scheduled = {e.event_id: e for e in timeline.all_events()}
    seen: set[str] = set()
    for record in trace.records:
        event = scheduled.get(record.event_id)
        if event is None:
            raise TraceMismatchError(
                f"trace record {record.event_id!r} has no timeline event")
        if record.event_id in seen:
            raise TraceMismatchError(
                f"trace holds duplicate records for {record.event_id!r}")
        seen.add(record.event_id)
        if (record.scheduled_start_ms, record.scheduled_end_ms) != \
                (event.start_ms, event.end_ms):
            raise TraceMismatchError(
                f"record {record.event_id!r} disagrees with the timeline schedule")
    missing = set(scheduled) - seen
    if missing:
        raise TraceMismatchError(
            f"trace is missing records for {sorted(missing)}")

    report = TraceReport()
    if not math.isinf(tolerance_ms):
        for record in trace.records:
            deviation = max(abs(record.start_deviation_ms), abs(record.end_deviation_ms))
            if deviation > tolerance_ms:
                report.findings.append(TraceFinding(
                    "deviation", record.event_id,
                    f"drifted {deviation} ms beyond tolerance {tolerance_ms}"))
    for channel in EXCLUSIVE_CHANNELS:
        rows = sorted(
            (r for r in trace.records if r.channel == channel),
            key=lambda r: (r.actual_start_ms, r.event_id))
        for prev, nxt in zip(rows, rows[1:]):
            if nxt.actual_start_ms < prev.actual_end_ms:
                report.findings.append(TraceFinding(
                    "overlap", nxt.event_id,
                    f"{channel} resource overlap with {prev.event_id!r}"))
    return report


# --- trace files --------------------------------------------------------------

def trace_to_dict(trace: ExecutionTrace) -> dict:
    return {
        "schema_version": "1.0",
        "tour_id": trace.tour_id,
        "seed": trace.seed,
        "records": [
            {
                "event_id": r.event_id,
                "channel": r.channel,
                "ref": r.ref,
                "scheduled_start_ms": r.scheduled_start_ms,
                "scheduled_end_ms": r.scheduled_end_ms,
                "actual_start_ms": r.actual_start_ms,
                "actual_end_ms": r.actual_end_ms,
            }
            for r in trace.records
        ],
    }


def write_trace(trace: ExecutionTrace, path: str | Path) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(
        json.dumps(trace_to_dict(trace), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    return out


def report_to_dict(report: TraceReport) -> dict:
    return {
        "ok": report.ok,
        "findings": [
            {"code": f.code, "event_id": f.event_id, "message": f.message}
            for f in report.findings
        ],
    }
