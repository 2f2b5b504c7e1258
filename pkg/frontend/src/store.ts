// Single state store driven purely by gateway responses and events, so any
// recorded event sequence replays to the same UI state.

import type {
  GatewayEvent,
  SceneSnapshot,
  StageName,
  StageState,
} from "./types.js";

export interface UiState {
  scene: SceneSnapshot | null;
  stages: Record<StageName, StageState>;
  trajectory: { x: number; y: number }[];
  detections: Record<string, [number, number, number, number]>;
  running: boolean; // a pipeline turn is in flight: submit disabled
  lastError: string | null;
}

export const STAGE_ORDER: StageName[] = ["stt", "ae", "od", "ra"];

export function initialState(): UiState {
  const stages = {} as Record<StageName, StageState>;
  for (const name of STAGE_ORDER) {
    stages[name] = { status: "idle", duration: null };
  }
  return {
    scene: null,
    stages,
    trajectory: [],
    detections: {},
    running: false,
    lastError: null,
  };
}

export function applyEvent(state: UiState, event: GatewayEvent): UiState {
  switch (event.type) {
    case "turn": {
      if (event.status === "started") {
        const stages = {} as Record<StageName, StageState>;
        for (const name of STAGE_ORDER) {
          stages[name] = { status: "idle", duration: null };
        }
        return {
          ...state,
          stages,
          trajectory: [],
          detections: {},
          running: true,
          lastError: null,
        };
      }
      return { ...state, running: false };
    }
    case "stage": {
      const stages = { ...state.stages };
      stages[event.stage] = {
        status: event.status,
        duration: event.duration ?? stages[event.stage].duration,
      };
      return { ...state, stages };
    }
    case "trajectory":
      return {
        ...state,
        trajectory: [...state.trajectory, { x: event.x, y: event.y }],
      };
    case "detection":
      return {
        ...state,
        detections: { ...state.detections, [event.label]: event.box },
      };
    case "scene":
      return { ...state, scene: event.snapshot };
    default:
      return state;
  }
}

export function replay(events: GatewayEvent[], from?: UiState): UiState {
  let state = from ?? initialState();
  for (const event of events) {
    state = applyEvent(state, event);
  }
  return state;
}

export function canSubmit(state: UiState, text: string): boolean {
  return !state.running && text.trim().length > 0;
}
