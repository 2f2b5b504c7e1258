import { describe, expect, it } from "vitest";

import { applyEvent, canSubmit, initialState, replay } from "../src/store.js";
import type { GatewayEvent, SceneSnapshot } from "../src/types.js";

const snapshot: SceneSnapshot = {
  frame: [1280, 720],
  objects: { apple: [200, 300, 260, 360] },
  effector: [640, 120],
  held: null,
};

// Recorded shape of one happy-path turn, used as a replay fixture.
const turnFixture: GatewayEvent[] = [
  { type: "turn", status: "started", trial_id: "t1" },
  { type: "stage", stage: "stt", status: "running" },
  { type: "stage", stage: "stt", status: "ok", duration: 0.6 },
  { type: "stage", stage: "ae", status: "running" },
  { type: "stage", stage: "ae", status: "ok", duration: 0.5 },
  { type: "stage", stage: "od", status: "running" },
  { type: "detection", label: "apple", box: [201, 301, 261, 361] },
  { type: "stage", stage: "od", status: "ok", duration: 0.9 },
  { type: "stage", stage: "ra", status: "running" },
  { type: "trajectory", iteration: 0, x: 640, y: 120 },
  { type: "trajectory", iteration: 1, x: 580, y: 160 },
  { type: "trajectory", iteration: 2, x: 480, y: 230 },
  { type: "scene", snapshot: { ...snapshot, held: "apple" } },
  { type: "stage", stage: "ra", status: "ok", duration: 1.2 },
  { type: "turn", status: "finished", trial_id: "t1" },
];

describe("store", () => {
  it("starts idle with empty stages", () => {
    const state = initialState();
    expect(state.running).toBe(false);
    expect(state.stages.stt.status).toBe("idle");
    expect(state.trajectory).toHaveLength(0);
  });

  it("replays a full turn to a terminal state", () => {
    const state = replay(turnFixture);
    expect(state.running).toBe(false);
    for (const name of ["stt", "ae", "od", "ra"] as const) {
      expect(state.stages[name].status).toBe("ok");
      expect(state.stages[name].duration).not.toBeNull();
    }
    expect(state.scene?.held).toBe("apple");
    expect(state.detections.apple).toEqual([201, 301, 261, 361]);
  });

  it("is a pure function of the event sequence", () => {
    expect(replay(turnFixture)).toEqual(replay(turnFixture));
  });

  it("stage transitions follow pipeline order in the fixture", () => {
    let state = initialState();
    const seen: string[] = [];
    for (const event of turnFixture) {
      state = applyEvent(state, event);
      if (event.type === "stage" && event.status === "running") {
        seen.push(event.stage);
      }
    }
    expect(seen).toEqual(["stt", "ae", "od", "ra"]);
  });

  it("trajectory grows monotonically during the turn", () => {
    let state = initialState();
    let lastLength = 0;
    for (const event of turnFixture) {
      state = applyEvent(state, event);
      if (event.type === "trajectory") {
        expect(state.trajectory.length).toBe(lastLength + 1);
        lastLength = state.trajectory.length;
      } else if (event.type !== "turn") {
        expect(state.trajectory.length).toBe(lastLength);
      }
    }
    expect(lastLength).toBe(3);
  });

  it("a new turn clears trajectory, detections and stage states", () => {
    let state = replay(turnFixture);
    state = applyEvent(state, { type: "turn", status: "started", trial_id: "t2" });
    expect(state.trajectory).toHaveLength(0);
    expect(state.detections).toEqual({});
    expect(state.stages.ra.status).toBe("idle");
    expect(state.running).toBe(true);
  });

  it("blocks submission while a turn is in flight", () => {
    let state = initialState();
    state = applyEvent(state, { type: "turn", status: "started", trial_id: "t" });
    expect(canSubmit(state, "grab the apple")).toBe(false);
    state = applyEvent(state, { type: "turn", status: "finished", trial_id: "t" });
    expect(canSubmit(state, "grab the apple")).toBe(true);
    expect(canSubmit(state, "   ")).toBe(false);
  });

  it("marks failed stages", () => {
    let state = initialState();
    state = applyEvent(state, { type: "stage", stage: "od", status: "failed", duration: 0.9 });
    expect(state.stages.od.status).toBe("failed");
  });
});
