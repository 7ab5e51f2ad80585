import { describe, expect, it } from "vitest";

import {
  activeEventIds,
  buildViewModel,
  clampPlayhead,
  findBlock,
  laneFraction,
  LANE_ORDER,
} from "../src/viewmodel";
import { multiImageTimeline, threeEventTimeline } from "./fixtures";

describe("buildViewModel", () => {
  it("mirrors the API payload exactly", () => {
    const vm = buildViewModel(threeEventTimeline());
    expect(vm.tourId).toBe("demo");
    expect(vm.endMs).toBe(4500);
    expect(vm.lanes.map((l) => l.name)).toEqual(LANE_ORDER);
    const spans = vm.lanes.map((lane) =>
      lane.blocks.map((b) => [b.eventId, b.startMs, b.endMs]));
    expect(spans).toMatchSnapshot();
  });

  it("keeps every event and its span", () => {
    const payload = multiImageTimeline();
    const vm = buildViewModel(payload);
    for (const event of [...payload.narration, ...payload.visuals, ...payload.gestures]) {
      const block = findBlock(vm, event.event_id);
      expect(block, event.event_id).not.toBeNull();
      expect([block!.startMs, block!.endMs]).toEqual([event.start_ms, event.end_ms]);
    }
  });

  it("scales spans proportionally", () => {
    const vm = buildViewModel(threeEventTimeline());
    const gesture = findBlock(vm, "ge-dev-s000-g1")!;
    const speech = findBlock(vm, "sp-dev-s000")!;
    const gestureWidth = laneFraction(vm, gesture.endMs - gesture.startMs);
    const speechWidth = laneFraction(vm, speech.endMs - speech.startMs);
    expect(gestureWidth / speechWidth).toBeCloseTo(2000 / 4000, 10);
    expect(laneFraction(vm, vm.endMs)).toBe(1);
  });
});

describe("playhead", () => {
  it("clamps into [0, tour end]", () => {
    const vm = buildViewModel(threeEventTimeline());
    expect(clampPlayhead(vm, -10)).toBe(0);
    expect(clampPlayhead(vm, 99999)).toBe(4500);
    expect(clampPlayhead(vm, 1234)).toBe(1234);
    expect(buildViewModel(threeEventTimeline(), -50).playheadMs).toBe(0);
  });

  it("reports the active events at a time", () => {
    const vm = buildViewModel(threeEventTimeline());
    expect(activeEventIds(vm, 1000)).toEqual(
      new Set(["sp-dev-s000", "vi-dev-s000-v1", "ge-dev-s000-g1"]));
    expect(activeEventIds(vm, 3000)).toEqual(
      new Set(["sp-dev-s000", "vi-dev-s000-v1"]));
    expect(activeEventIds(vm, 4400).size).toBe(0);
  });
});
