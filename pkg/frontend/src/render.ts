/** Canvas painting of a Scene plus the camera-stub test pattern. */
import { headingVector, toCanvas, type Scene } from "./scene";

export function drawScene(ctx: CanvasRenderingContext2D, scene: Scene): void {
  const t = scene.transform;
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  for (const item of scene.items) {
    switch (item.kind) {
      case "line": {
        const [x1, y1] = toCanvas(t, item.x1, item.y1);
        const [x2, y2] = toCanvas(t, item.x2, item.y2);
        ctx.strokeStyle = item.color;
        ctx.lineWidth = item.width;
        ctx.beginPath();
        ctx.moveTo(x1, y1);
        ctx.lineTo(x2, y2);
        ctx.stroke();
        break;
      }
      case "circle": {
        const [cx, cy] = toCanvas(t, item.x, item.y);
        ctx.beginPath();
        ctx.arc(cx, cy, item.r * t.scale, 0, Math.PI * 2);
        if (item.fill) {
          ctx.fillStyle = item.color;
          ctx.fill();
        } else {
          ctx.strokeStyle = item.color;
          ctx.lineWidth = 2;
          ctx.stroke();
        }
        break;
      }
      case "polygon": {
        ctx.fillStyle = item.color;
        ctx.beginPath();
        item.points.forEach(([x, y], i) => {
          const [cx, cy] = toCanvas(t, x, y);
          if (i === 0) ctx.moveTo(cx, cy);
          else ctx.lineTo(cx, cy);
        });
        ctx.closePath();
        ctx.fill();
        break;
      }
      case "polyline": {
        ctx.strokeStyle = item.color;
        ctx.lineWidth = item.width;
        ctx.beginPath();
        item.points.forEach(([x, y], i) => {
          const [cx, cy] = toCanvas(t, x, y);
          if (i === 0) ctx.moveTo(cx, cy);
          else ctx.lineTo(cx, cy);
        });
        ctx.stroke();
        break;
      }
      case "ray": {
        const [dx, dy] = headingVector(item.angle);
        const [x1, y1] = toCanvas(t, item.x, item.y);
        const [x2, y2] = toCanvas(
          t,
          item.x + dx * item.length,
          item.y + dy * item.length,
        );
        ctx.strokeStyle = item.color;
        ctx.lineWidth = 1;
        ctx.setLineDash([4, 3]);
        ctx.beginPath();
        ctx.moveTo(x1, y1);
        ctx.lineTo(x2, y2);
        ctx.stroke();
        ctx.setLineDash([]);
        ctx.fillStyle = item.color;
        ctx.font = "10px sans-serif";
        ctx.fillText(item.label, x2 + 3, y2);
        break;
      }
      case "marker": {
        const [cx, cy] = toCanvas(t, item.x, item.y);
        const [dx, dy] = headingVector(item.heading);
        const r = Math.max(item.radius * t.scale, 5);
        ctx.fillStyle = item.color;
        ctx.beginPath();
        ctx.arc(cx, cy, r, 0, Math.PI * 2);
        ctx.fill();
        ctx.strokeStyle = "#fff";
        ctx.lineWidth = 2;
        ctx.beginPath();
        ctx.moveTo(cx, cy);
        // world delta (dx, dy) maps to canvas delta (dx, -dy)
        ctx.lineTo(cx + dx * r * 1.6, cy - dy * r * 1.6);
        ctx.stroke();
        break;
      }
    }
  }
}

/**
 * Camera pane stand-in: no real imagery exists, so the payload seq drives
 * a deterministic test pattern with a seq/time overlay.
 */
export function drawTestPattern(
  ctx: CanvasRenderingContext2D,
  seq: number | null,
  tSim: number | null,
): void {
  const { width, height } = ctx.canvas;
  const cols = 8;
  const rows = 6;
  const cw = width / cols;
  const ch = height / rows;
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      const s = seq ?? 0;
      const hue = ((s * 31 + r * 53 + c * 97) % 360 + 360) % 360;
      ctx.fillStyle = `hsl(${hue}, 45%, ${30 + ((r + c + s) % 3) * 12}%)`;
      ctx.fillRect(c * cw, r * ch, cw + 1, ch + 1);
    }
  }
  ctx.fillStyle = "rgba(0,0,0,0.6)";
  ctx.fillRect(0, height - 22, width, 22);
  ctx.fillStyle = "#fff";
  ctx.font = "12px monospace";
  const label = seq === null
    ? "camera stub: no frames yet"
    : `camera stub  seq=${seq}  t=${(tSim ?? 0).toFixed(1)}s`;
  ctx.fillText(label, 6, height - 7);
}
