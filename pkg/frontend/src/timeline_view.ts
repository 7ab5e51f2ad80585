// Three-lane timeline renderer with a scrubber and a nudge panel.
// Blocks are positioned purely by lane fraction; widths are proportional to
// event spans by construction.

import { MAX_NUDGE_MS } from "./api";
import {
  activeEventIds,
  clampPlayhead,
  findBlock,
  laneFraction,
  LANE_ORDER,
  type TimelineViewModel,
} from "./viewmodel";

export interface TimelineCallbacks {
  onNudge(eventId: string, deltaMs: number): void;
  onScrub?(ms: number): void;
  onSelect?(eventId: string): void;
}

export class TimelineView {
  readonly root: HTMLElement;
  private vm: TimelineViewModel | null = null;
  private lanesEl: HTMLElement;
  private scrubber: HTMLInputElement;
  private readout: HTMLElement;
  private nudgePanel: HTMLElement;
  private deltaInput: HTMLInputElement;
  private applyButton: HTMLButtonElement;
  private selectionLabel: HTMLElement;
  private noticeEl: HTMLElement;

  constructor(container: HTMLElement, private readonly callbacks: TimelineCallbacks) {
    this.root = document.createElement("section");
    this.root.className = "timeline";
    container.appendChild(this.root);

    this.lanesEl = document.createElement("div");
    this.lanesEl.className = "lanes";
    this.root.appendChild(this.lanesEl);

    const scrubRow = document.createElement("div");
    scrubRow.className = "scrub-row";
    this.scrubber = document.createElement("input");
    this.scrubber.type = "range";
    this.scrubber.min = "0";
    this.scrubber.value = "0";
    this.scrubber.className = "scrubber";
    this.scrubber.addEventListener("input", () => {
      this.setPlayhead(Number(this.scrubber.value));
      this.callbacks.onScrub?.(Number(this.scrubber.value));
    });
    this.readout = document.createElement("span");
    this.readout.className = "readout";
    scrubRow.append(this.scrubber, this.readout);
    this.root.appendChild(scrubRow);

    this.nudgePanel = document.createElement("div");
    this.nudgePanel.className = "nudge-panel";
    this.selectionLabel = document.createElement("span");
    this.selectionLabel.className = "selection";
    this.selectionLabel.textContent = "select an event to nudge";
    this.deltaInput = document.createElement("input");
    this.deltaInput.type = "number";
    this.deltaInput.step = "50";
    this.deltaInput.value = "250";
    this.deltaInput.className = "delta";
    this.applyButton = document.createElement("button");
    this.applyButton.textContent = "nudge";
    this.applyButton.disabled = true;
    this.applyButton.addEventListener("click", () => this.submitNudge());
    this.noticeEl = document.createElement("div");
    this.noticeEl.className = "notice";
    this.nudgePanel.append(this.selectionLabel, this.deltaInput, this.applyButton);
    this.root.append(this.nudgePanel, this.noticeEl);
  }

  render(vm: TimelineViewModel): void {
    this.vm = vm;
    this.lanesEl.textContent = "";
    const empty = vm.lanes.every((lane) => lane.blocks.length === 0);
    if (empty) {
      const emptyEl = document.createElement("p");
      emptyEl.className = "empty-state";
      emptyEl.textContent = "Nothing compiled yet: the timeline is empty.";
      this.lanesEl.appendChild(emptyEl);
      this.scrubber.max = "0";
      this.applyButton.disabled = true;
      return;
    }
    for (const name of LANE_ORDER) {
      const lane = vm.lanes.find((l) => l.name === name)!;
      const laneEl = document.createElement("div");
      laneEl.className = `lane lane-${name}`;
      laneEl.dataset.lane = name;
      const labelEl = document.createElement("span");
      labelEl.className = "lane-label";
      labelEl.textContent = name;
      laneEl.appendChild(labelEl);
      const track = document.createElement("div");
      track.className = "track";
      for (const block of lane.blocks) {
        const blockEl = document.createElement("div");
        blockEl.className = "block";
        blockEl.dataset.eventId = block.eventId;
        blockEl.style.left = `${laneFraction(vm, block.startMs) * 100}%`;
        blockEl.style.width =
          `${laneFraction(vm, block.endMs - block.startMs) * 100}%`;
        blockEl.title = block.detail;
        blockEl.textContent = block.label;
        if (vm.overrides[block.eventId]) {
          blockEl.classList.add("nudged");
        }
        if (block.eventId === vm.selectedEventId) {
          blockEl.classList.add("selected");
        }
        blockEl.addEventListener("click", () => this.select(block.eventId));
        track.appendChild(blockEl);
      }
      laneEl.appendChild(track);
      this.lanesEl.appendChild(laneEl);
    }
    this.scrubber.max = String(vm.endMs);
    this.scrubber.value = String(vm.playheadMs);
    this.updateSelectionUi();
    this.highlightActive();
  }

  setPlayhead(ms: number): void {
    if (!this.vm) return;
    this.vm.playheadMs = clampPlayhead(this.vm, ms);
    this.scrubber.value = String(this.vm.playheadMs);
    this.highlightActive();
  }

  select(eventId: string): void {
    if (!this.vm) return;
    this.vm.selectedEventId = eventId;
    for (const el of this.blockElements()) {
      el.classList.toggle("selected", el.dataset.eventId === eventId);
    }
    this.updateSelectionUi();
    this.callbacks.onSelect?.(eventId);
  }

  showNotice(text: string, kind: "info" | "error" | "warning" = "info"): void {
    this.noticeEl.textContent = text;
    this.noticeEl.dataset.kind = kind;
  }

  clearNotice(): void {
    this.noticeEl.textContent = "";
    delete this.noticeEl.dataset.kind;
  }

  private submitNudge(): void {
    if (!this.vm?.selectedEventId) return;
    const delta = Number(this.deltaInput.value);
    if (!Number.isFinite(delta) || !Number.isInteger(delta)) {
      this.showNotice("the nudge delta must be a whole number of milliseconds", "warning");
      return;
    }
    if (Math.abs(delta) > MAX_NUDGE_MS) {
      // Bound check happens client-side before anything is sent.
      this.showNotice(
        `a single nudge is limited to ±${MAX_NUDGE_MS} ms; ${delta} is out of range`,
        "warning");
      return;
    }
    this.clearNotice();
    this.callbacks.onNudge(this.vm.selectedEventId, delta);
  }

  private updateSelectionUi(): void {
    const selected = this.vm?.selectedEventId ?? null;
    this.applyButton.disabled = selected === null;
    if (!selected || !this.vm) {
      this.selectionLabel.textContent = "select an event to nudge";
      return;
    }
    const block = findBlock(this.vm, selected);
    this.selectionLabel.textContent = block
      ? `${selected} [${block.startMs}–${block.endMs} ms]`
      : selected;
  }

  private highlightActive(): void {
    if (!this.vm) return;
    const active = activeEventIds(this.vm, this.vm.playheadMs);
    for (const el of this.blockElements()) {
      el.classList.toggle("active", active.has(el.dataset.eventId ?? ""));
    }
    this.readout.textContent = `${(this.vm.playheadMs / 1000).toFixed(1)} s / ` +
      `${(this.vm.endMs / 1000).toFixed(1)} s`;
  }

  private blockElements(): HTMLElement[] {
    return Array.from(this.lanesEl.querySelectorAll<HTMLElement>(".block"));
  }
}
