import { describe, expect, it } from "vitest";

import { Canvas2D, renderScene, sceneScale, validateSnapshot } from "../src/render.js";
import { applyEvent, initialState } from "../src/store.js";
import type { GatewayEvent, SceneSnapshot } from "../src/types.js";

// Recording fake standing in for CanvasRenderingContext2D.
class FakeContext implements Canvas2D {
  canvas = { width: 960, height: 540 };
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 1;
  font = "";
  ops: { op: string; args: unknown[] }[] = [];

  private record(op: string, ...args: unknown[]) {
    this.ops.push({ op, args });
  }
  clearRect(...args: number[]) { this.record("clearRect", ...args); }
  fillRect(...args: number[]) { this.record("fillRect", ...args); }
  strokeRect(...args: number[]) { this.record("strokeRect", ...args); }
  fillText(text: string, x: number, y: number) { this.record("fillText", text, x, y); }
  beginPath() { this.record("beginPath"); }
  moveTo(...args: number[]) { this.record("moveTo", ...args); }
  lineTo(...args: number[]) { this.record("lineTo", ...args); }
  arc(...args: number[]) { this.record("arc", ...args); }
  stroke() { this.record("stroke"); }
  fill() { this.record("fill"); }

  count(op: string): number {
    return this.ops.filter((o) => o.op === op).length;
  }
  texts(): string[] {
    return this.ops.filter((o) => o.op === "fillText").map((o) => o.args[0] as string);
  }
}

const threeObjects: SceneSnapshot = {
  frame: [1280, 720],
  objects: {
    apple: [200, 300, 260, 360],
    orange: [640, 430, 700, 490],
    lemon: [950, 200, 1000, 250],
  },
  effector: [640, 120],
  held: null,
};

describe("renderScene", () => {
  it("draws a labeled box per object", () => {
    const ctx = new FakeContext();
    renderScene(ctx, threeObjects, []);
    expect(ctx.count("strokeRect")).toBe(3);
    expect(ctx.texts().sort()).toEqual(["apple", "lemon", "orange"]);
  });

  it("empty scene still shows the effector marker", () => {
    const ctx = new FakeContext();
    renderScene(ctx, { ...threeObjects, objects: {} }, []);
    expect(ctx.count("strokeRect")).toBe(0);
    expect(ctx.count("arc")).toBe(1); // crosshair circle
  });

  it("maps scene pixels with a uniform scale", () => {
    const ctx = new FakeContext();
    expect(sceneScale(threeObjects, ctx)).toBeCloseTo(960 / 1280);
    renderScene(ctx, threeObjects, []);
    const box = ctx.ops.find((o) => o.op === "strokeRect");
    expect(box?.args[0]).toBeCloseTo(200 * 0.75);
  });

  it("rejects malformed snapshots", () => {
    expect(() => validateSnapshot({} as SceneSnapshot)).toThrow("malformed");
    const bad = { ...threeObjects, objects: { apple: [1, 2, 3] } };
    expect(() => renderScene(new FakeContext(), bad as unknown as SceneSnapshot, []))
      .toThrow("malformed box");
  });

  it("renders a polyline that grows monotonically across replayed events", () => {
    // Scripted event-replay fixture: each trajectory event adds one vertex.
    const events: GatewayEvent[] = [
      { type: "turn", status: "started", trial_id: "t" },
      { type: "scene", snapshot: threeObjects },
      ...[0, 1, 2, 3, 4].map((i) => ({
        type: "trajectory" as const,
        iteration: i,
        x: 640 - 40 * i,
        y: 120 + 30 * i,
      })),
    ];
    let state = initialState();
    let lastSegments = 0;
    for (const event of events) {
      state = applyEvent(state, event);
      if (state.scene === null) {
        continue;
      }
      const ctx = new FakeContext();
      renderScene(ctx, state.scene, state.trajectory);
      const segments = ctx.count("lineTo") - 2; // crosshair draws 2 lineTo calls
      expect(segments).toBeGreaterThanOrEqual(lastSegments);
      lastSegments = Math.max(lastSegments, segments);
    }
    expect(lastSegments).toBe(4); // five points -> four segments
  });

  it("highlights the held object", () => {
    const ctx = new FakeContext();
    renderScene(ctx, { ...threeObjects, held: "apple" }, []);
    // At least one stroke drawn with the held-object color.
    const colors = ctx.ops.length > 0 ? [ctx.strokeStyle] : [];
    expect(ctx.count("strokeRect")).toBe(3);
    expect(colors.length).toBeGreaterThan(0);
  });
});
