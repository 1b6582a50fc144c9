/**
 * Pure scene construction: view state + map geometry in, a flat list of
 * world-coordinate draw primitives out.  Keeping this free of canvas
 * calls makes the rendering decisions testable without a DOM.
 *
 * World coordinates are cm, x-right / y-up, headings in degrees that
 * increase clockwise; heading 0 points along +x.
 */
import type { ViewState } from "./store";
import type { MapGeometry } from "./types";

export interface Transform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export type SceneItem =
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number; color: string; width: number }
  | { kind: "circle"; x: number; y: number; r: number; color: string; fill: boolean }
  | { kind: "polygon"; points: [number, number][]; color: string }
  | { kind: "polyline"; points: [number, number][]; color: string; width: number }
  | { kind: "marker"; x: number; y: number; heading: number; radius: number; color: string }
  | { kind: "ray"; x: number; y: number; angle: number; length: number; color: string; label: string };

export interface Scene {
  transform: Transform;
  items: SceneItem[];
}

// render-side mirrors of the robot's stock sensor layout
export const SONAR_OFFSETS: [string, number][] = [
  ["L", -65],
  ["F", 0],
  ["R", 60],
];
export const BODY_RADIUS_CM = 18;
const NO_ECHO = 255;

export function headingVector(headingDeg: number): [number, number] {
  const r = (headingDeg * Math.PI) / 180;
  return [Math.cos(r), -Math.sin(r)];
}

/** Fit the map's bounding box into a canvas, y flipped, with a margin. */
export function fitTransform(
  map: MapGeometry,
  width: number,
  height: number,
  marginPx = 20,
): Transform {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const [x1, y1, x2, y2] of map.walls) {
    xs.push(x1, x2);
    ys.push(y1, y2);
  }
  for (const [cx, cy, r] of map.circles) {
    xs.push(cx - r, cx + r);
    ys.push(cy - r, cy + r);
  }
  if (xs.length === 0) {
    xs.push(0, 1000);
    ys.push(0, 1000);
  }
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const scale = Math.min(
    (width - 2 * marginPx) / Math.max(maxX - minX, 1),
    (height - 2 * marginPx) / Math.max(maxY - minY, 1),
  );
  return {
    scale,
    offsetX: marginPx - minX * scale,
    offsetY: marginPx + maxY * scale, // y flip: world up is canvas up
  };
}

export function toCanvas(t: Transform, x: number, y: number): [number, number] {
  return [x * t.scale + t.offsetX, t.offsetY - y * t.scale];
}

export function buildScene(
  view: ViewState,
  map: MapGeometry,
  width: number,
  height: number,
): Scene {
  const items: SceneItem[] = [];
  for (const [x1, y1, x2, y2] of map.walls) {
    items.push({ kind: "line", x1, y1, x2, y2, color: "#334", width: 3 });
  }
  for (const [cx, cy, r] of map.circles) {
    items.push({ kind: "circle", x: cx, y: cy, r, color: "#845", fill: true });
  }
  for (const points of map.polygons) {
    items.push({ kind: "polygon", points: points.slice() as [number, number][], color: "#845" });
  }
  if (map.start) {
    items.push({
      kind: "circle", x: map.start[0], y: map.start[1], r: 10,
      color: "#2a7", fill: false,
    });
  }
  if (view.trail.length > 1) {
    items.push({
      kind: "polyline",
      points: view.trail.map((p) => [p.x, p.y]),
      color: "#4a90d9",
      width: 1.5,
    });
  }
  const latest = view.latest;
  if (latest) {
    const readings: Record<string, number> = {
      L: latest.sonar_left,
      F: latest.sonar_front,
      R: latest.sonar_right,
    };
    for (const [label, offset] of SONAR_OFFSETS) {
      const value = readings[label];
      const echo = value < NO_ECHO;
      items.push({
        kind: "ray",
        x: latest.x,
        y: latest.y,
        angle: latest.heading + offset,
        length: echo ? BODY_RADIUS_CM + value : BODY_RADIUS_CM + 60,
        color: echo ? "#d98c4a" : "#bbb",
        label: echo ? `${label} ${value.toFixed(0)}` : `${label} —`,
      });
    }
    items.push({
      kind: "marker",
      x: latest.x,
      y: latest.y,
      heading: latest.heading,
      radius: BODY_RADIUS_CM,
      color: view.controlMode === "MANUAL" ? "#c9a227" : "#2a7",
    });
  }
  return { transform: fitTransform(map, width, height), items };
}
