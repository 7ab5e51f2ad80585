import { ApiClient, type TimelinePayload } from "./api";
import { SceneView } from "./scene_view";
import { TimelineView } from "./timeline_view";
import { actualSpans, buildViewModel } from "./viewmodel";
import "./style.css";

export class StudioApp {
  private timelineView: TimelineView;
  private sceneView: SceneView;
  private banner: HTMLElement;
  private variantBar: HTMLElement;
  private header: HTMLElement;
  private payload: TimelinePayload | null = null;
  private playheadMs = 0;
  private selectedEventId: string | null = null;

  constructor(root: HTMLElement, private readonly api: ApiClient) {
    this.banner = document.createElement("div");
    this.banner.className = "banner";
    this.header = document.createElement("header");
    this.header.innerHTML = "<h1>choreography studio</h1>";
    this.variantBar = document.createElement("div");
    this.variantBar.className = "variants";
    root.append(this.banner, this.header, this.variantBar);
    this.timelineView = new TimelineView(root, {
      onNudge: (eventId, deltaMs) => void this.nudge(eventId, deltaMs),
      onScrub: (ms) => {
        this.playheadMs = ms;
      },
      onSelect: (eventId) => {
        this.selectedEventId = eventId;
      },
    });
    const traceButton = document.createElement("button");
    traceButton.textContent = "overlay simulated trace (seed 1, jitter 60)";
    traceButton.className = "trace-button";
    traceButton.addEventListener("click", () => void this.overlayTrace());
    root.appendChild(traceButton);
    this.sceneView = new SceneView(root);
  }

  async start(): Promise<void> {
    await this.refreshTimeline();
    await this.refreshVariants();
    await this.refreshScene();
  }

  private setBanner(text: string, retry: (() => void) | null = null): void {
    this.banner.textContent = text;
    this.banner.classList.toggle("visible", text.length > 0);
    if (retry) {
      const button = document.createElement("button");
      button.textContent = "retry";
      button.addEventListener("click", retry);
      this.banner.appendChild(button);
    }
  }

  async refreshTimeline(): Promise<void> {
    try {
      this.payload = await this.api.getTimeline();
      this.setBanner("");
    } catch (err) {
      this.setBanner(`could not load the timeline: ${String(err)}`,
        () => void this.refreshTimeline());
      return;
    }
    this.renderTimeline();
  }

  private renderTimeline(): void {
    if (!this.payload) return;
    const vm = buildViewModel(this.payload, this.playheadMs, this.selectedEventId);
    this.timelineView.render(vm);
    const h1 = this.header.querySelector("h1");
    if (h1) {
      h1.textContent =
        `choreography studio — ${this.payload.tour_id}` +
        (this.payload.variant ? ` (${this.payload.variant})` : "");
    }
  }

  async nudge(eventId: string, deltaMs: number): Promise<void> {
    let result;
    try {
      result = await this.api.nudge(eventId, deltaMs);
    } catch (err) {
      this.timelineView.showNotice(`nudge failed: ${String(err)}`, "error");
      this.setBanner(`the service is unreachable: ${String(err)}`,
        () => void this.nudge(eventId, deltaMs));
      return;
    }
    if (result.accepted) {
      this.payload = result.timeline;
      this.renderTimeline();
      this.timelineView.showNotice(
        `nudged ${eventId} by ${deltaMs} ms`, "info");
      return;
    }
    const findings = result.findings
      ?.map((f) => `${f.code}: ${f.message}`)
      .join("\n");
    this.timelineView.showNotice(
      findings ?? result.error ?? "the service rejected the nudge", "error");
  }

  async refreshVariants(): Promise<void> {
    let payload;
    try {
      payload = await this.api.getVariants();
    } catch {
      return; // variants are optional decoration over the timeline
    }
    this.variantBar.textContent = "variants: ";
    for (const variant of payload.variants) {
      const button = document.createElement("button");
      button.textContent =
        `${variant.label} (${(variant.total_duration_ms / 60000).toFixed(1)} min)`;
      button.disabled = variant.label === payload.selected;
      button.addEventListener("click", () => void this.selectVariant(variant.label));
      this.variantBar.appendChild(button);
    }
  }

  private async selectVariant(label: string): Promise<void> {
    try {
      this.payload = await this.api.selectVariant(label);
    } catch (err) {
      this.setBanner(`variant switch failed: ${String(err)}`);
      return;
    }
    this.selectedEventId = null;
    this.renderTimeline();
    await this.refreshVariants();
  }

  private async overlayTrace(): Promise<void> {
    try {
      const payload = await this.api.getTrace(1, 60);
      const spans = actualSpans(payload.trace.records);
      const scale = this.payload?.end_ms ?? 1;
      for (const el of document.querySelectorAll<HTMLElement>(".block")) {
        const span = spans.get(el.dataset.eventId ?? "");
        if (!span) continue;
        let overlay = el.querySelector<HTMLElement>(".actual");
        if (!overlay) {
          overlay = document.createElement("div");
          overlay.className = "actual";
          el.appendChild(overlay);
        }
        const [start, end] = span;
        const blockStart = Number(el.style.left.replace("%", "")) / 100 * scale;
        const blockWidth = Number(el.style.width.replace("%", "")) / 100 * scale;
        if (blockWidth <= 0) continue;
        overlay.style.left = `${((start - blockStart) / blockWidth) * 100}%`;
        overlay.style.width = `${((end - start) / blockWidth) * 100}%`;
        overlay.title = `actual: ${start}–${end} ms`;
      }
      this.timelineView.showNotice(
        payload.report.ok
          ? "trace overlay: replay matches the schedule"
          : `trace overlay: ${payload.report.findings.length} drift finding(s)`,
        "info");
    } catch (err) {
      this.timelineView.showNotice(`trace failed: ${String(err)}`, "error");
    }
  }

  async refreshScene(): Promise<void> {
    let scene;
    try {
      scene = await this.api.getScene();
    } catch {
      this.sceneView.renderEmpty();
      return;
    }
    let placement = null;
    try {
      placement = await this.api.getPlacement();
    } catch {
      placement = null;
    }
    this.sceneView.render(scene, placement);
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new StudioApp(document.getElementById("app")!, new ApiClient(""));
  void app.start();
}
