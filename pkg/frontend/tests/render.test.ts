import { describe, expect, it } from "vitest";

import {
  ARM_COLOR,
  Context2D,
  interpolateState,
  PALETTE,
  renderScene,
  worldToPixel,
} from "../src/render.js";
import type { StateMessage } from "../src/wire.js";

interface Op {
  kind: string;
  style: string;
  args: number[];
}

class FakeCtx implements Context2D {
  fillStyle = "";
  strokeStyle = "";
  font = "";
  ops: Op[] = [];
  private record(kind: string, stroke: boolean, ...args: number[]) {
    this.ops.push({ kind, style: stroke ? this.strokeStyle : this.fillStyle, args });
  }
  fillRect(x: number, y: number, w: number, h: number) {
    this.record("fillRect", false, x, y, w, h);
  }
  beginPath() {}
  arc(x: number, y: number, r: number) {
    this.record("arc", false, x, y, r);
  }
  moveTo(x: number, y: number) {
    this.record("moveTo", false, x, y);
  }
  lineTo(x: number, y: number) {
    this.record("lineTo", false, x, y);
  }
  closePath() {}
  fill() {
    this.record("fill", false);
  }
  stroke() {
    this.record("stroke", true);
  }
  fillText(text: string, x: number, y: number) {
    this.record("fillText", false, x, y);
  }
}

const VIEW = { width: 600, height: 600 };

const baseState = (): StateMessage => ({
  type: "state",
  seq: 1,
  time: 0.1,
  arm: { x: 0.5, y: 0.1, yaw: 0 },
  pwm: 0,
  recording: false,
  clutch: false,
  objects: [{ id: 0, x: 0.25, y: 0.75, size: 0.04, color: 0, shape: 0 }],
  receptacles: [{ id: 0, x: 0.5, y: 0.3, radius: 0.06, stack: [] }],
});

describe("worldToPixel", () => {
  it("scales workspace coordinates with y flipped", () => {
    expect(worldToPixel(0, 0, VIEW)).toEqual({ px: 0, py: 600 });
    expect(worldToPixel(1, 1, VIEW)).toEqual({ px: 600, py: 0 });
    expect(worldToPixel(0.25, 0.75, VIEW)).toEqual({ px: 150, py: 150 });
  });
});

describe("renderScene", () => {
  it("draws a red square object within one pixel of its scaled position", () => {
    const ctx = new FakeCtx();
    expect(renderScene(ctx, baseState(), VIEW)).toBe(true);
    const rects = ctx.ops.filter((o) => o.kind === "fillRect" && o.style === PALETTE[0]);
    expect(rects).toHaveLength(1);
    const [x, y, w, h] = rects[0].args;
    const { px, py } = worldToPixel(0.25, 0.75, VIEW);
    expect(Math.abs(x + w / 2 - px)).toBeLessThanOrEqual(1);
    expect(Math.abs(y + h / 2 - py)).toBeLessThanOrEqual(1);
    expect(w).toBeCloseTo(0.04 * VIEW.width, 6);
  });

  it("draws the arm marker and receptacle ring at scaled positions", () => {
    const ctx = new FakeCtx();
    renderScene(ctx, baseState(), VIEW);
    const armArcs = ctx.ops.filter((o) => o.kind === "arc" && o.style === ARM_COLOR);
    expect(armArcs).toHaveLength(1);
    const arm = worldToPixel(0.5, 0.1, VIEW);
    expect(Math.abs(armArcs[0].args[0] - arm.px)).toBeLessThanOrEqual(1);
    expect(Math.abs(armArcs[0].args[1] - arm.py)).toBeLessThanOrEqual(1);
    expect(ctx.ops.some((o) => o.kind === "stroke")).toBe(true);
  });

  it("draws disc and triangle shapes with the palette color", () => {
    const state = baseState();
    state.objects = [
      { id: 0, x: 0.5, y: 0.5, size: 0.05, color: 2, shape: 1 },
      { id: 1, x: 0.7, y: 0.5, size: 0.05, color: 3, shape: 2 },
    ];
    const ctx = new FakeCtx();
    renderScene(ctx, state, VIEW);
    expect(ctx.ops.some((o) => o.kind === "arc" && o.style === PALETTE[2])).toBe(true);
    expect(ctx.ops.some((o) => o.kind === "lineTo" && o.style === PALETTE[3])).toBe(true);
  });

  it("shows the recording indicator only while recording", () => {
    const off = new FakeCtx();
    renderScene(off, baseState(), VIEW);
    const dotCount = (ctx: FakeCtx) =>
      ctx.ops.filter((o) => o.kind === "arc" && o.args[0] === 12 && o.args[1] === 12).length;
    expect(dotCount(off)).toBe(0);
    const on = new FakeCtx();
    renderScene(on, { ...baseState(), recording: true }, VIEW);
    expect(dotCount(on)).toBe(1);
  });

  it("skips malformed or unbound frames after clearing the background", () => {
    for (const bad of [null, { type: "state", seq: 1 }, { type: "state", seq: 1, time: 0, bound: false }]) {
      const ctx = new FakeCtx();
      expect(renderScene(ctx, bad, VIEW)).toBe(false);
      expect(ctx.ops.filter((o) => o.kind !== "fillRect")).toHaveLength(0);
      expect(ctx.ops).toHaveLength(1); // background only
    }
  });

  it("draws a stack badge when a receptacle holds objects", () => {
    const state = baseState();
    state.receptacles![0].stack = [0];
    const ctx = new FakeCtx();
    renderScene(ctx, state, VIEW);
    expect(ctx.ops.some((o) => o.kind === "fillText")).toBe(true);
  });
});

describe("interpolateState", () => {
  it("keeps interpolated positions on the segment between states", () => {
    const a = baseState();
    const b = baseState();
    b.seq = 2;
    b.time = 0.2;
    b.arm = { x: 0.6, y: 0.3, yaw: 1.0 };
    b.objects = [{ id: 0, x: 0.35, y: 0.65, size: 0.04, color: 0, shape: 0 }];
    for (const alpha of [0, 0.25, 0.5, 0.75, 1]) {
      const mid = interpolateState(a, b, alpha);
      expect(mid.arm!.x).toBeCloseTo(0.5 + alpha * 0.1, 12);
      expect(mid.arm!.y).toBeCloseTo(0.1 + alpha * 0.2, 12);
      expect(mid.objects![0].x).toBeCloseTo(0.25 + alpha * 0.1, 12);
    }
  });

  it("clamps alpha and falls back to the newer state when shapes differ", () => {
    const a = baseState();
    const b = { ...baseState(), seq: 2, time: 0.2 };
    expect(interpolateState(a, b, 5).arm!.x).toBe(b.arm!.x);
    const unbound: StateMessage = { type: "state", seq: 3, time: 0, bound: false };
    expect(interpolateState(unbound, b, 0.5)).toBe(b);
  });
});
