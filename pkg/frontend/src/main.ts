/**
 * Browser entry point: wires the session, keyboard input, and render loop.
 *
 * Connects to the gateway WebSocket (host/port from query parameters),
 * sends controls at 20 Hz while input is active, and renders at the display
 * rate with interpolation between 10 Hz states.
 */

import {
  CLUTCH_KEYS,
  CONTROL_HZ,
  InputState,
  PWM_TOGGLE_KEY,
  togglePwm,
} from "./input.js";
import { interpolateState, renderScene } from "./render.js";
import { ClientSession } from "./session.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

function text(id: string): string {
  return (document.getElementById(id) as HTMLInputElement).value;
}

function setBanner(message: string | null): void {
  const banner = document.getElementById("banner")!;
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

export function start(): void {
  const canvas = document.getElementById("scene") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const view = { width: canvas.width, height: canvas.height };

  const url = `ws://${param("host", "127.0.0.1")}:${param("port", "8787")}`;
  const socket = new WebSocket(url);
  const session = new ClientSession(socket);
  let input: InputState = { held: new Set(), pwmTarget: 0 };
  let lastStateAt = performance.now();

  socket.addEventListener("message", (event) => {
    const msg = session.onFrame(String(event.data));
    if (msg?.type === "state") lastStateAt = performance.now();
    setBanner(session.lastError);
  });

  document.getElementById("connect")!.addEventListener("click", () => {
    session.lastError = null;
    session.hello(text("collector"), text("task") || undefined, text("case") || undefined);
  });
  document.getElementById("record")!.addEventListener("click", () => session.recordStart());
  document.getElementById("stop")!.addEventListener("click", () => session.recordStop());
  document.getElementById("save")!.addEventListener("click", () => {
    const outcome = (document.getElementById("outcome") as HTMLInputElement).checked;
    if (session.save(outcome)) setBanner(null);
    else setBanner(session.lastError);
  });
  document.getElementById("discard")!.addEventListener("click", () => session.discard());

  window.addEventListener("keydown", (e) => {
    if (e.code === PWM_TOGGLE_KEY) {
      if (!e.repeat) input = togglePwm(input);
      e.preventDefault();
      return;
    }
    input.held.add(e.code);
    if (CLUTCH_KEYS.includes(e.code)) e.preventDefault();
  });
  window.addEventListener("keyup", (e) => input.held.delete(e.code));

  setInterval(() => {
    if (session.connected && !session.shouldSkipTick(input)) {
      session.sendControl(input);
    }
  }, 1000 / CONTROL_HZ);

  const frame = () => {
    const { lastState, prevState } = session;
    if (lastState && prevState) {
      const dt = lastState.time - prevState.time || 1;
      const alpha = Math.min(1, (performance.now() - lastStateAt) / 1000 / dt);
      renderScene(ctx, interpolateState(prevState, lastState, alpha), view);
    } else if (lastState) {
      renderScene(ctx, lastState, view);
    }
    const ids = session.savedEpisodeIds;
    document.getElementById("saved")!.textContent =
      ids.length > 0 ? `saved: ${ids[ids.length - 1]}` : "";
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.addEventListener("DOMContentLoaded", start);
}
