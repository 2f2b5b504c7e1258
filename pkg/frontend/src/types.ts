// Payload shapes mirroring the gateway API. Snapshots are read-only on the
// client; all mutation happens server-side.

export interface SceneSnapshot {
  frame: [number, number];
  objects: Record<string, [number, number, number, number]>;
  effector: [number, number];
  held: string | null;
}

export type StageName = "stt" | "ae" | "od" | "ra";
export type StageStatus = "idle" | "running" | "ok" | "failed";

export interface StageState {
  status: StageStatus;
  duration: number | null; // seconds, last completed run
}

export interface TurnEvent {
  type: "turn";
  status: "started" | "finished";
  trial_id: string;
  record?: Record<string, unknown>;
}

export interface StageEvent {
  type: "stage";
  stage: StageName;
  status: "running" | "ok" | "failed";
  duration?: number;
}

export interface DetectionEvent {
  type: "detection";
  label: string;
  box: [number, number, number, number];
}

export interface TrajectoryEvent {
  type: "trajectory";
  iteration: number;
  x: number;
  y: number;
}

export interface SceneEvent {
  type: "scene";
  snapshot: SceneSnapshot;
}

export type GatewayEvent =
  | TurnEvent
  | StageEvent
  | DetectionEvent
  | TrajectoryEvent
  | SceneEvent;

export interface CommandResponse {
  record: { a_total: number; t_total: number };
  transcript: string;
  actions: { method: string; args: string[] }[];
  scene: SceneSnapshot;
  action_error?: string;
  failures?: { method: string; reason: string }[];
}
