// Canvas drawing. Kept thin: all geometry comes from skeleton.ts and
// timeline.ts so it can be tested without a canvas.

import { Projected } from "./skeleton.js";
import { Marker } from "./timeline.js";

type Ctx = CanvasRenderingContext2D;

export function drawSkeleton(ctx: Ctx, projected: Projected,
                             color = "#2b6cb0"): void {
  ctx.lineWidth = 3;
  ctx.lineCap = "round";
  ctx.strokeStyle = color;
  for (const [a, b] of projected.bones) {
    ctx.beginPath();
    ctx.moveTo(projected.points[a].x, projected.points[a].y);
    ctx.lineTo(projected.points[b].x, projected.points[b].y);
    ctx.stroke();
  }
  ctx.fillStyle = color;
  for (const p of projected.points) {
    ctx.beginPath();
    ctx.arc(p.x, p.y, 4, 0, Math.PI * 2);
    ctx.fill();
  }
}

const MARKER_STYLE: Record<Marker["kind"],
                           { color: string; y0: number; y1: number }> = {
  sentence: { color: "#e2e8f0", y0: 0, y1: 40 },
  entry: { color: "#68d391", y0: 8, y1: 32 },
  keyword: { color: "#4a5568", y0: 0, y1: 40 },
  apex: { color: "#e53e3e", y0: 4, y1: 36 },
};

export function drawTimeline(ctx: Ctx, markers: Marker[], widthPx: number,
                             cursorX: number | null): void {
  ctx.clearRect(0, 0, widthPx, 40);
  for (const m of markers) {
    const style = MARKER_STYLE[m.kind];
    if (m.kind === "sentence" || m.kind === "entry") {
      ctx.fillStyle = style.color;
      ctx.fillRect(m.x0, style.y0, Math.max(m.x1 - m.x0, 1),
                   style.y1 - style.y0);
    } else {
      ctx.strokeStyle = m.clamped ? "#dd6b20" : style.color;
      ctx.setLineDash(m.kind === "keyword" ? [3, 3] : []);
      ctx.beginPath();
      ctx.moveTo(m.x0, style.y0);
      ctx.lineTo(m.x0, style.y1);
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }
  if (cursorX !== null) {
    ctx.strokeStyle = "#000";
    ctx.beginPath();
    ctx.moveTo(cursorX, 0);
    ctx.lineTo(cursorX, 40);
    ctx.stroke();
  }
}
