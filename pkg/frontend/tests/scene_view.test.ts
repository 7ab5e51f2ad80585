import { beforeEach, describe, expect, it } from "vitest";

import type { PlacementPayload } from "../src/api";
import { SceneView } from "../src/scene_view";
import { sampleScene } from "./fixtures";

function feasiblePlacement(): PlacementPayload {
  return {
    feasible: true,
    placement: {
      surface_id: "wall-n",
      along_m: 2.0,
      height_m: 1.5,
      point: [2.0, 5.0, 1.5],
      pan_rad: 0.0,
      tilt_rad: 0.017,
      incidence_rad: 0.02,
      score: 0.64,
      breakdown: { referent_proximity: 0.45, incidence: 1.0, learner_visibility: 0.95 },
    },
  };
}

describe("SceneView", () => {
  let container: HTMLElement;
  let view: SceneView;

  beforeEach(() => {
    document.body.innerHTML = "";
    container = document.createElement("div");
    document.body.appendChild(container);
    view = new SceneView(container);
  });

  it("draws the scene with the projection point on its wall", () => {
    view.render(sampleScene(), feasiblePlacement());
    const svg = container.querySelector("svg")!;
    expect(svg.querySelectorAll(".surface")).toHaveLength(1);
    expect(svg.querySelectorAll(".obstacle")).toHaveLength(1);
    expect(svg.querySelectorAll(".learner")).toHaveLength(1);
    expect(svg.querySelector(".robot")).not.toBeNull();

    const point = svg.querySelector<SVGCircleElement>(".projection-point")!;
    expect(point.getAttribute("cx")).toBe("2");
    expect(point.getAttribute("cy")).toBe("5"); // on the wall base line
    expect(point.getAttribute("data-surface-id")).toBe("wall-n");
    // Sight lines: one from the robot plus one per learner.
    expect(svg.querySelectorAll(".sight-line")).toHaveLength(2);
    expect(container.querySelector(".scene-caption")!.textContent)
      .toContain("wall-n");
  });

  it("shows the rejection summary for infeasible placements", () => {
    view.render(sampleScene(), {
      feasible: false,
      message: "no feasible projection point",
      samples: 615,
      rejections: { projector_occlusion: 615, learner_occlusion: 0, incidence: 0, gimbal: 0 },
    });
    const caption = container.querySelector<HTMLElement>(".rejection-summary")!;
    expect(caption.textContent).toContain("615 samples rejected");
    expect(caption.textContent).toContain("projector_occlusion: 615");
    expect(container.querySelector(".projection-point")).toBeNull();
  });

  it("shows an empty state without a scene", () => {
    view.renderEmpty();
    expect(container.querySelector(".empty-state")!.textContent)
      .toContain("No scene loaded");
  });
});
