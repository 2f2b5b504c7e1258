// Console wiring: fetch the snapshot, follow the event stream, submit
// commands, keep the canvas and stage panel in sync with the store.

import { renderPanel } from "./panel.js";
import { Canvas2D, renderScene } from "./render.js";
import { subscribeEvents } from "./sse.js";
import { applyEvent, canSubmit, initialState, UiState } from "./store.js";
import type { CommandResponse, GatewayEvent, SceneSnapshot } from "./types.js";

const base = location.origin;

let state: UiState = initialState();
let lastGoodScene: SceneSnapshot | null = null;

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d") as unknown as Canvas2D;
const panel = document.getElementById("stages") as HTMLElement;
const input = document.getElementById("command") as HTMLInputElement;
const submit = document.getElementById("submit") as HTMLButtonElement;
const banner = document.getElementById("banner") as HTMLElement;

function showBanner(message: string | null): void {
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

function redraw(): void {
  renderPanel(panel, state);
  submit.disabled = !canSubmit(state, input.value);
  const scene = state.scene ?? lastGoodScene;
  if (scene === null) {
    return;
  }
  try {
    renderScene(ctx, scene, state.trajectory);
    lastGoodScene = scene;
  } catch (err) {
    // Keep the last good frame on a malformed snapshot.
    showBanner(`render error: ${String(err)}`);
    if (lastGoodScene !== null && scene !== lastGoodScene) {
      renderScene(ctx, lastGoodScene, state.trajectory);
    }
  }
}

function handleEvent(event: unknown): void {
  state = applyEvent(state, event as GatewayEvent);
  redraw();
}

async function loadScene(): Promise<void> {
  const response = await fetch(`${base}/scene`);
  const snapshot = (await response.json()) as SceneSnapshot;
  state = { ...state, scene: snapshot };
  redraw();
}

function follow(): void {
  subscribeEvents(`${base}/events`, handleEvent, () => {
    showBanner("event stream lost; reconnecting...");
    // Resume from the latest snapshot rather than replaying history.
    setTimeout(() => {
      loadScene()
        .then(() => {
          showBanner(null);
          follow();
        })
        .catch(() => {
          setTimeout(follow, 2000);
        });
    }, 1000);
  });
}

async function sendCommand(): Promise<void> {
  const text = input.value;
  if (!canSubmit(state, text)) {
    return;
  }
  submit.disabled = true;
  showBanner(null);
  try {
    const response = await fetch(`${base}/command`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
    const body = await response.json();
    if (!response.ok) {
      const detail = body?.detail ?? body;
      const offset = detail?.offset !== undefined ? ` (offset ${detail.offset})` : "";
      showBanner(`rejected: ${detail?.error ?? response.statusText}${offset}`);
      return;
    }
    const result = body as CommandResponse;
    state = { ...state, scene: result.scene };
    if (result.action_error) {
      showBanner(`action error: ${result.action_error}`);
    } else if (result.failures?.length) {
      showBanner(result.failures.map((f) => `${f.method}: ${f.reason}`).join("; "));
    }
    input.value = "";
  } catch (err) {
    showBanner(`gateway unreachable: ${String(err)}; retry when it is back`);
  } finally {
    redraw();
  }
}

submit.addEventListener("click", () => void sendCommand());
input.addEventListener("keydown", (ev) => {
  if (ev.key === "Enter") {
    void sendCommand();
  }
});
input.addEventListener("input", redraw);

loadScene()
  .then(follow)
  .catch((err) => showBanner(`cannot reach gateway: ${String(err)}`));
