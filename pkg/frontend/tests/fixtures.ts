import type { ScenePayload, TimelinePayload } from "../src/api";

export function threeEventTimeline(): TimelinePayload {
  return {
    schema_version: "1.0",
    tour_id: "demo",
    variant: "v1",
    base_pause_ms: 500,
    end_ms: 4500,
    overrides: {},
    narration: [
      {
        event_id: "sp-dev-s000",
        ref: "dev-s000",
        segment_id: "dev-s000",
        device_id: "dev",
        learning_point_id: "lp-1",
        text: "One speech segment.",
        audio_ref: "audio/x.wav",
        start_ms: 0,
        end_ms: 4000,
        pause_after_ms: 500,
      },
    ],
    visuals: [
      {
        event_id: "vi-dev-s000-v1",
        ref: "v1",
        segment_id: "dev-s000",
        learning_point_id: "lp-1",
        image_ref: "img/v1.png",
        placement: null,
        start_ms: 0,
        end_ms: 4000,
      },
    ],
    gestures: [
      {
        event_id: "ge-dev-s000-g1",
        ref: "g1",
        segment_id: "dev-s000",
        learning_point_id: "lp-1",
        motion_ref: "motions/g1.seq",
        kind: "deictic",
        start_ms: 0,
        end_ms: 2000,
      },
    ],
  };
}

/** Two visuals tiling one segment; nudging the second one left overlaps. */
export function multiImageTimeline(): TimelinePayload {
  const base = threeEventTimeline();
  base.visuals = [
    {
      event_id: "vi-dev-s000-v1",
      ref: "v1",
      segment_id: "dev-s000",
      learning_point_id: "lp-1",
      image_ref: "img/v1.png",
      placement: null,
      start_ms: 0,
      end_ms: 2400,
    },
    {
      event_id: "vi-dev-s000-v2",
      ref: "v2",
      segment_id: "dev-s000",
      learning_point_id: "lp-1",
      image_ref: "img/v2.png",
      placement: null,
      start_ms: 2400,
      end_ms: 4000,
    },
  ];
  return base;
}

export function emptyTimeline(): TimelinePayload {
  return {
    schema_version: "1.0",
    tour_id: "empty",
    variant: null,
    base_pause_ms: 500,
    end_ms: 0,
    overrides: {},
    narration: [],
    visuals: [],
    gestures: [],
  };
}

export function sampleScene(): ScenePayload {
  return {
    robot: { x: 2, y: 2, heading: Math.PI / 2 },
    projector_height: 1.45,
    learners: [{ x: 1.2, y: 1.6, eye_height: 1.6 }],
    target_device_id: "press",
    referent: [2, 4.2],
    obstacles: [
      [
        [3.4, 3.0],
        [4.0, 3.0],
        [4.0, 3.6],
        [3.4, 3.6],
      ],
    ],
    surfaces: [
      {
        id: "wall-n",
        base: [
          [0, 5],
          [4, 5],
        ],
        height_range: [0.8, 2.2],
        normal: [0, -1],
      },
    ],
  };
}
