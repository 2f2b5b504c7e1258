// Stage panel rendering into plain DOM nodes.

import { STAGE_ORDER, UiState } from "./store.js";

const STAGE_LABELS: Record<string, string> = {
  stt: "Speech-to-Text",
  ae: "Action Extraction",
  od: "Object Detection",
  ra: "Robot Actions",
};

export function renderPanel(root: HTMLElement, state: UiState): void {
  root.innerHTML = "";
  for (const name of STAGE_ORDER) {
    const stage = state.stages[name];
    const row = document.createElement("div");
    row.className = `stage stage-${stage.status}`;
    const label = document.createElement("span");
    label.textContent = STAGE_LABELS[name];
    const status = document.createElement("span");
    status.className = "stage-status";
    status.textContent =
      stage.duration !== null && stage.status !== "running"
        ? `${stage.status} (${stage.duration.toFixed(2)}s)`
        : stage.status;
    row.append(label, status);
    root.append(row);
  }
}
