// Typed client for the authoring service. All validation verdicts come from
// the server; this layer only moves JSON and serializes mutations so two
// edits can never race each other.

export interface NarrationEvent {
  event_id: string;
  ref: string;
  segment_id: string;
  device_id: string | null;
  learning_point_id: string | null;
  text: string | null;
  audio_ref: string | null;
  start_ms: number;
  end_ms: number;
  pause_after_ms: number;
}

export interface VisualEvent {
  event_id: string;
  ref: string;
  segment_id: string;
  learning_point_id: string | null;
  image_ref: string | null;
  placement: Record<string, unknown> | null;
  start_ms: number;
  end_ms: number;
}

export interface GestureEvent {
  event_id: string;
  ref: string;
  segment_id: string;
  learning_point_id: string | null;
  motion_ref: string | null;
  kind: string | null;
  start_ms: number;
  end_ms: number;
}

export interface TimelinePayload {
  schema_version: string;
  tour_id: string;
  variant: string | null;
  base_pause_ms: number;
  end_ms: number;
  overrides: Record<string, number>;
  narration: NarrationEvent[];
  visuals: VisualEvent[];
  gestures: GestureEvent[];
}

export interface ValidatorFinding {
  code: string;
  message: string;
  event_id: string | null;
}

export type NudgeResult =
  | { accepted: true; timeline: TimelinePayload }
  | { accepted: false; findings?: ValidatorFinding[]; error?: string };

export interface VariantInfo {
  label: string;
  segments: number;
  total_duration_ms: number;
}

export interface VariantsPayload {
  selected: string;
  variants: VariantInfo[];
}

export interface TraceRecord {
  event_id: string;
  channel: string;
  ref: string;
  scheduled_start_ms: number;
  scheduled_end_ms: number;
  actual_start_ms: number;
  actual_end_ms: number;
}

export interface TracePayload {
  trace: { tour_id: string; seed: number; records: TraceRecord[] };
  report: { ok: boolean; findings: { code: string; event_id: string; message: string }[] };
}

export interface ScenePayload {
  robot: { x: number; y: number; heading: number };
  projector_height: number;
  learners: { x: number; y: number; eye_height: number }[];
  target_device_id: string;
  referent: [number, number];
  obstacles: [number, number][][];
  surfaces: {
    id: string;
    base: [[number, number], [number, number]];
    height_range: [number, number];
    normal: [number, number];
  }[];
}

export type PlacementPayload =
  | {
      feasible: true;
      placement: {
        surface_id: string;
        along_m: number;
        height_m: number;
        point: [number, number, number];
        pan_rad: number;
        tilt_rad: number;
        incidence_rad: number;
        score: number;
        breakdown: Record<string, number>;
      };
    }
  | { feasible: false; message: string; samples: number; rejections: Record<string, number> };

export const MAX_NUDGE_MS = 5000;

export class ApiError extends Error {
  constructor(message: string, readonly status: number | null = null) {
    super(message);
  }
}

export class ApiClient {
  // Mutations chain on this promise so they reach the server one at a time.
  private mutationQueue: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path);
    } catch (err) {
      throw new ApiError(`network failure fetching ${path}: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`GET ${path} failed with ${response.status}`, response.status);
    }
    return (await response.json()) as T;
  }

  getTimeline(): Promise<TimelinePayload> {
    return this.getJson("/api/timeline");
  }

  getVariants(): Promise<VariantsPayload> {
    return this.getJson("/api/variants");
  }

  getTrace(seed: number, jitter: number): Promise<TracePayload> {
    return this.getJson(`/api/trace?seed=${seed}&jitter=${jitter}`);
  }

  getScene(): Promise<ScenePayload> {
    return this.getJson("/api/scene");
  }

  getPlacement(): Promise<PlacementPayload> {
    return this.getJson("/api/placement");
  }

  nudge(eventId: string, deltaMs: number): Promise<NudgeResult> {
    return this.enqueue(async () => {
      let response: Response;
      try {
        response = await this.fetchImpl(this.baseUrl + "/api/nudge", {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: JSON.stringify({ event_id: eventId, delta_ms: deltaMs }),
        });
      } catch (err) {
        throw new ApiError(`network failure during nudge: ${String(err)}`);
      }
      const body = (await response.json()) as NudgeResult & { error?: string };
      if (response.ok || response.status === 409) {
        return body;
      }
      return { accepted: false, error: body.error ?? `HTTP ${response.status}` };
    });
  }

  selectVariant(label: string): Promise<TimelinePayload> {
    return this.enqueue(async () => {
      const response = await this.fetchImpl(this.baseUrl + "/api/select_variant", {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ label }),
      });
      if (!response.ok) {
        throw new ApiError(`variant selection failed with ${response.status}`, response.status);
      }
      return (await response.json()) as TimelinePayload;
    });
  }

  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.mutationQueue.then(task, task);
    this.mutationQueue = next.catch(() => undefined);
    return next;
  }
}
