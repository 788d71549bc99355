/**
 * Canvas scene renderer: draws the last state message, nothing else.
 *
 * Everything on screen derives from one state message (optionally linearly
 * interpolated between two consecutive ones); the client never extrapolates
 * or fabricates state.
 */

import type { ObjectState, StateMessage } from "./wire.js";
import { validateServerMessage } from "./wire.js";

/** Fixed palette indexed by color, matching the simulator's rasterizer. */
export const PALETTE = [
  "#e61a1a", // 0 red
  "#1acc1a", // 1 green
  "#264de6", // 2 blue
  "#e6d91a", // 3 yellow
  "#b326cc", // 4 magenta
  "#1acccc", // 5 cyan
  "#ffffff", // 6 white
  "#808080", // 7 gray
] as const;

export const RECEPTACLE_COLOR = PALETTE[7];
export const ARM_COLOR = PALETTE[6];
export const ARM_MARKER_SIZE = 0.03;

export const SHAPE_SQUARE = 0;
export const SHAPE_DISC = 1;
export const SHAPE_TRIANGLE = 2;

/** Subset of CanvasRenderingContext2D the renderer needs (testable in node). */
export interface Context2D {
  fillStyle: string | unknown;
  strokeStyle: string | unknown;
  font: string;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Viewport {
  width: number;
  height: number;
}

/** Workspace [0,1]^2 to pixels; workspace y points up, canvas y points down. */
export function worldToPixel(
  x: number,
  y: number,
  view: Viewport,
): { px: number; py: number } {
  return { px: x * view.width, py: (1 - y) * view.height };
}

/** Scales a workspace length to pixels along the x axis. */
export function scaleLength(len: number, view: Viewport): number {
  return len * view.width;
}

function lerp(a: number, b: number, alpha: number): number {
  return a + (b - a) * alpha;
}

/**
 * Linear interpolation between two consecutive 10 Hz states for 60 fps
 * rendering; alpha in [0, 1]. Discrete fields come from the newer state.
 */
export function interpolateState(
  prev: StateMessage,
  next: StateMessage,
  alpha: number,
): StateMessage {
  if (!prev.arm || !next.arm || !prev.objects || !next.objects) {
    return next;
  }
  const a = Math.min(1, Math.max(0, alpha));
  const byId = new Map(prev.objects.map((o) => [o.id, o]));
  return {
    ...next,
    time: lerp(prev.time, next.time, a),
    arm: {
      x: lerp(prev.arm.x, next.arm.x, a),
      y: lerp(prev.arm.y, next.arm.y, a),
      yaw: lerp(prev.arm.yaw, next.arm.yaw, a),
    },
    objects: next.objects.map((o) => {
      const p = byId.get(o.id);
      return p ? { ...o, x: lerp(p.x, o.x, a), y: lerp(p.y, o.y, a) } : o;
    }),
  };
}

function drawObject(ctx: Context2D, obj: ObjectState, view: Viewport): void {
  const { px, py } = worldToPixel(obj.x, obj.y, view);
  const s = scaleLength(obj.size, view);
  ctx.fillStyle = PALETTE[obj.color % PALETTE.length];
  if (obj.shape === SHAPE_SQUARE) {
    ctx.fillRect(px - s / 2, py - s / 2, s, s);
  } else if (obj.shape === SHAPE_DISC) {
    ctx.beginPath();
    ctx.arc(px, py, s / 2, 0, 2 * Math.PI);
    ctx.fill();
  } else {
    // upward triangle: full width at the base, apex on top
    ctx.beginPath();
    ctx.moveTo(px, py - s / 2);
    ctx.lineTo(px - s / 2, py + s / 2);
    ctx.lineTo(px + s / 2, py + s / 2);
    ctx.closePath();
    ctx.fill();
  }
}

/**
 * Draws one frame from a state message. Returns false (and draws nothing
 * beyond the background) for malformed or unbound states.
 */
export function renderScene(
  ctx: Context2D,
  state: unknown,
  view: Viewport,
): boolean {
  ctx.fillStyle = "#000000";
  ctx.fillRect(0, 0, view.width, view.height);
  if (validateServerMessage(state) !== null) {
    return false;
  }
  const s = state as StateMessage;
  if (s.type !== "state" || s.bound === false || !s.arm) {
    return false;
  }
  for (const rec of s.receptacles ?? []) {
    const { px, py } = worldToPixel(rec.x, rec.y, view);
    ctx.strokeStyle = RECEPTACLE_COLOR;
    ctx.beginPath();
    ctx.arc(px, py, scaleLength(rec.radius, view), 0, 2 * Math.PI);
    ctx.stroke();
    if (rec.stack.length > 0) {
      ctx.fillStyle = RECEPTACLE_COLOR;
      ctx.fillText(`${rec.stack.length}`, px, py);
    }
  }
  for (const obj of s.objects ?? []) {
    drawObject(ctx, obj, view);
  }
  const arm = worldToPixel(s.arm.x, s.arm.y, view);
  ctx.fillStyle = ARM_COLOR;
  ctx.beginPath();
  ctx.arc(arm.px, arm.py, scaleLength(ARM_MARKER_SIZE, view) / 2, 0, 2 * Math.PI);
  ctx.fill();
  // status indicators: recording dot (red) and clutch dot (green)
  if (s.recording) {
    ctx.fillStyle = PALETTE[0];
    ctx.beginPath();
    ctx.arc(12, 12, 6, 0, 2 * Math.PI);
    ctx.fill();
  }
  if (s.clutch) {
    ctx.fillStyle = PALETTE[1];
    ctx.beginPath();
    ctx.arc(30, 12, 6, 0, 2 * Math.PI);
    ctx.fill();
  }
  return true;
}
