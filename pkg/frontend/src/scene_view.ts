// Top-down plan rendering of a placement scene: robot, learners, obstacles,
// candidate surfaces, the solved projection point, and the sight lines to it.

import type { PlacementPayload, ScenePayload } from "./api";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof SVGElementTagNameMap>(
  tag: K, attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function bounds(scene: ScenePayload): [number, number, number, number] {
  const xs: number[] = [scene.robot.x, scene.referent[0]];
  const ys: number[] = [scene.robot.y, scene.referent[1]];
  for (const learner of scene.learners) {
    xs.push(learner.x);
    ys.push(learner.y);
  }
  for (const polygon of scene.obstacles) {
    for (const [x, y] of polygon) {
      xs.push(x);
      ys.push(y);
    }
  }
  for (const surface of scene.surfaces) {
    for (const [x, y] of surface.base) {
      xs.push(x);
      ys.push(y);
    }
  }
  const pad = 0.8;
  const minX = Math.min(...xs) - pad;
  const minY = Math.min(...ys) - pad;
  return [minX, minY, Math.max(...xs) + pad - minX, Math.max(...ys) + pad - minY];
}

export class SceneView {
  readonly root: HTMLElement;

  constructor(container: HTMLElement) {
    this.root = document.createElement("section");
    this.root.className = "scene";
    container.appendChild(this.root);
  }

  renderEmpty(): void {
    this.root.textContent = "";
    const p = document.createElement("p");
    p.className = "empty-state";
    p.textContent = "No scene loaded; start the service with --scene to preview placement.";
    this.root.appendChild(p);
  }

  render(scene: ScenePayload, placement: PlacementPayload | null): void {
    this.root.textContent = "";
    const [minX, minY, width, height] = bounds(scene);
    const svg = el("svg", {
      viewBox: `${minX} ${minY} ${width} ${height}`,
      class: "scene-svg",
      // Flip y so the plan reads like a floor plan, +y up.
      transform: "scale(1,-1)",
    });

    for (const surface of scene.surfaces) {
      svg.appendChild(el("line", {
        x1: surface.base[0][0], y1: surface.base[0][1],
        x2: surface.base[1][0], y2: surface.base[1][1],
        class: "surface", "stroke-width": 0.12,
        "data-surface-id": surface.id,
      }));
    }
    for (const polygon of scene.obstacles) {
      svg.appendChild(el("polygon", {
        points: polygon.map(([x, y]) => `${x},${y}`).join(" "),
        class: "obstacle",
      }));
    }

    svg.appendChild(el("circle", {
      cx: scene.referent[0], cy: scene.referent[1], r: 0.12, class: "referent",
    }));
    const robot = el("g", { class: "robot" });
    robot.appendChild(el("circle", { cx: scene.robot.x, cy: scene.robot.y, r: 0.25 }));
    robot.appendChild(el("line", {
      x1: scene.robot.x, y1: scene.robot.y,
      x2: scene.robot.x + 0.45 * Math.cos(scene.robot.heading),
      y2: scene.robot.y + 0.45 * Math.sin(scene.robot.heading),
      "stroke-width": 0.06,
    }));
    svg.appendChild(robot);
    for (const learner of scene.learners) {
      svg.appendChild(el("circle", {
        cx: learner.x, cy: learner.y, r: 0.16, class: "learner",
      }));
    }

    if (placement?.feasible) {
      const [px, py] = placement.placement.point;
      svg.appendChild(el("line", {
        x1: scene.robot.x, y1: scene.robot.y, x2: px, y2: py,
        class: "sight-line projector-line", "stroke-width": 0.04,
      }));
      for (const learner of scene.learners) {
        svg.appendChild(el("line", {
          x1: learner.x, y1: learner.y, x2: px, y2: py,
          class: "sight-line", "stroke-width": 0.03,
        }));
      }
      svg.appendChild(el("circle", {
        cx: px, cy: py, r: 0.14, class: "projection-point",
        "data-surface-id": placement.placement.surface_id,
      }));
    }
    this.root.appendChild(svg);

    const caption = document.createElement("p");
    caption.className = "scene-caption";
    if (placement == null) {
      caption.textContent = `target: ${scene.target_device_id}`;
    } else if (placement.feasible) {
      const p = placement.placement;
      caption.textContent =
        `projecting on ${p.surface_id} at ${p.along_m.toFixed(2)} m along, ` +
        `${p.height_m.toFixed(2)} m high ` +
        `(pan ${p.pan_rad.toFixed(3)} rad, tilt ${p.tilt_rad.toFixed(3)} rad)`;
    } else {
      const counts = Object.entries(placement.rejections)
        .map(([name, n]) => `${name}: ${n}`)
        .join(", ");
      caption.textContent =
        `no feasible projection point (${placement.samples} samples rejected; ${counts})`;
      caption.classList.add("rejection-summary");
    }
    this.root.appendChild(caption);
  }
}
