// Canvas drawing. Works against the subset of CanvasRenderingContext2D we
// actually use, so tests can pass a recording fake instead of a real canvas.

import type { SceneSnapshot } from "./types.js";

export interface Canvas2D {
  canvas: { width: number; height: number };
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
}

export function validateSnapshot(snapshot: SceneSnapshot): void {
  if (
    !snapshot ||
    !Array.isArray(snapshot.frame) ||
    snapshot.frame.length !== 2 ||
    typeof snapshot.objects !== "object" ||
    snapshot.objects === null ||
    !Array.isArray(snapshot.effector)
  ) {
    throw new Error("malformed scene snapshot");
  }
  for (const [label, box] of Object.entries(snapshot.objects)) {
    if (!Array.isArray(box) || box.length !== 4) {
      throw new Error(`malformed box for ${label}`);
    }
  }
}

// Uniform scale mapping scene pixels onto the canvas, preserving aspect.
export function sceneScale(snapshot: SceneSnapshot, ctx: Canvas2D): number {
  return Math.min(
    ctx.canvas.width / snapshot.frame[0],
    ctx.canvas.height / snapshot.frame[1],
  );
}

export function renderScene(
  ctx: Canvas2D,
  snapshot: SceneSnapshot,
  trajectory: { x: number; y: number }[],
): void {
  validateSnapshot(snapshot);
  const s = sceneScale(snapshot, ctx);
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.fillStyle = "#11161d";
  ctx.fillRect(0, 0, snapshot.frame[0] * s, snapshot.frame[1] * s);

  ctx.font = "12px sans-serif";
  for (const [label, [x0, y0, x1, y1]] of Object.entries(snapshot.objects)) {
    ctx.strokeStyle = label === snapshot.held ? "#f0c674" : "#5f89c9";
    ctx.lineWidth = label === snapshot.held ? 2 : 1;
    ctx.strokeRect(x0 * s, y0 * s, (x1 - x0) * s, (y1 - y0) * s);
    ctx.fillStyle = "#c9d3df";
    ctx.fillText(label, x0 * s, y0 * s - 3);
  }

  if (trajectory.length > 1) {
    ctx.strokeStyle = "#d65f5f";
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(trajectory[0].x * s, trajectory[0].y * s);
    for (const p of trajectory.slice(1)) {
      ctx.lineTo(p.x * s, p.y * s);
    }
    ctx.stroke();
  }

  // Effector crosshair drawn last so it stays visible.
  const [ex, ey] = snapshot.effector;
  ctx.strokeStyle = "#7bc98f";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(ex * s, ey * s, 6, 0, Math.PI * 2);
  ctx.stroke();
  ctx.beginPath();
  ctx.moveTo(ex * s - 10, ey * s);
  ctx.lineTo(ex * s + 10, ey * s);
  ctx.moveTo(ex * s, ey * s - 10);
  ctx.lineTo(ex * s, ey * s + 10);
  ctx.stroke();
}
