// View model mirroring /api/timeline. The only arithmetic allowed here is
// display scaling (milliseconds to lane fractions); every scheduling verdict
// stays on the server.

import type { TimelinePayload, TraceRecord } from "./api";

export type LaneName = "speech" | "visual" | "gesture";

export const LANE_ORDER: LaneName[] = ["speech", "visual", "gesture"];

export interface LaneBlock {
  eventId: string;
  ref: string;
  segmentId: string;
  label: string;
  startMs: number;
  endMs: number;
  learningPointId: string | null;
  kind: string | null;
  detail: string;
}

export interface Lane {
  name: LaneName;
  blocks: LaneBlock[];
}

export interface TimelineViewModel {
  tourId: string;
  variant: string | null;
  endMs: number;
  lanes: Lane[];
  overrides: Record<string, number>;
  playheadMs: number;
  selectedEventId: string | null;
}

function truncate(text: string, max = 60): string {
  return text.length <= max ? text : text.slice(0, max - 1) + "…";
}

export function buildViewModel(
  payload: TimelinePayload,
  playheadMs = 0,
  selectedEventId: string | null = null,
): TimelineViewModel {
  const speech: LaneBlock[] = payload.narration.map((event) => ({
    eventId: event.event_id,
    ref: event.ref,
    segmentId: event.segment_id,
    label: truncate(event.text ?? event.ref),
    startMs: event.start_ms,
    endMs: event.end_ms,
    learningPointId: event.learning_point_id,
    kind: null,
    detail:
      `${event.event_id}\n${event.start_ms}–${event.end_ms} ms` +
      `\npause after: ${event.pause_after_ms} ms` +
      (event.learning_point_id ? `\nlearning point: ${event.learning_point_id}` : ""),
  }));
  const visual: LaneBlock[] = payload.visuals.map((event) => ({
    eventId: event.event_id,
    ref: event.ref,
    segmentId: event.segment_id,
    label: event.ref,
    startMs: event.start_ms,
    endMs: event.end_ms,
    learningPointId: event.learning_point_id,
    kind: null,
    detail:
      `${event.event_id}\n${event.start_ms}–${event.end_ms} ms` +
      (event.image_ref ? `\nimage: ${event.image_ref}` : "") +
      (event.learning_point_id ? `\nlearning point: ${event.learning_point_id}` : ""),
  }));
  const gesture: LaneBlock[] = payload.gestures.map((event) => ({
    eventId: event.event_id,
    ref: event.ref,
    segmentId: event.segment_id,
    label: event.kind ? `${event.ref} (${event.kind})` : event.ref,
    startMs: event.start_ms,
    endMs: event.end_ms,
    learningPointId: event.learning_point_id,
    kind: event.kind,
    detail:
      `${event.event_id}\n${event.start_ms}–${event.end_ms} ms` +
      (event.kind ? `\nkind: ${event.kind}` : "") +
      (event.learning_point_id ? `\nlearning point: ${event.learning_point_id}` : ""),
  }));
  const vm: TimelineViewModel = {
    tourId: payload.tour_id,
    variant: payload.variant,
    endMs: payload.end_ms,
    lanes: [
      { name: "speech", blocks: speech },
      { name: "visual", blocks: visual },
      { name: "gesture", blocks: gesture },
    ],
    overrides: { ...payload.overrides },
    playheadMs: 0,
    selectedEventId,
  };
  vm.playheadMs = clampPlayhead(vm, playheadMs);
  return vm;
}

export function clampPlayhead(vm: TimelineViewModel, ms: number): number {
  return Math.min(Math.max(0, ms), vm.endMs);
}

/** Fraction of the tour used for positioning; display scaling only. */
export function laneFraction(vm: TimelineViewModel, ms: number): number {
  return vm.endMs > 0 ? ms / vm.endMs : 0;
}

export function activeEventIds(vm: TimelineViewModel, ms: number): Set<string> {
  const active = new Set<string>();
  for (const lane of vm.lanes) {
    for (const block of lane.blocks) {
      if (block.startMs <= ms && ms < block.endMs) {
        active.add(block.eventId);
      }
    }
  }
  return active;
}

export function findBlock(vm: TimelineViewModel, eventId: string): LaneBlock | null {
  for (const lane of vm.lanes) {
    for (const block of lane.blocks) {
      if (block.eventId === eventId) {
        return block;
      }
    }
  }
  return null;
}

/** Scheduled-versus-actual overlay spans from a simulation trace. */
export function actualSpans(records: TraceRecord[]): Map<string, [number, number]> {
  const spans = new Map<string, [number, number]>();
  for (const record of records) {
    spans.set(record.event_id, [record.actual_start_ms, record.actual_end_ms]);
  }
  return spans;
}
