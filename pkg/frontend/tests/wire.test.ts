import { describe, expect, it } from "vitest";

import {
  validateClientMessage,
  validateServerMessage,
  WIRE_SCHEMA,
} from "../src/wire.js";

const control = (over: Record<string, unknown> = {}) => ({
  type: "control",
  seq: 1,
  vx: 0.1,
  vy: 0,
  vyaw: 0,
  pwm_target: 0,
  clutch: true,
  ...over,
});

describe("wire schema", () => {
  it("names the shared schema version", () => {
    expect(WIRE_SCHEMA).toBe("imlw-wire-1");
  });

  it("accepts well-formed client messages", () => {
    expect(validateClientMessage({ type: "hello", seq: 1 })).toBeNull();
    expect(validateClientMessage(control())).toBeNull();
    expect(validateClientMessage({ type: "save", seq: 2, outcome: false })).toBeNull();
    expect(validateClientMessage({ type: "record_start", seq: 3 })).toBeNull();
  });

  it("rejects malformed client messages", () => {
    expect(validateClientMessage("nope")).not.toBeNull();
    expect(validateClientMessage(null)).not.toBeNull();
    expect(validateClientMessage({ type: "warp", seq: 1 })).not.toBeNull();
    expect(validateClientMessage({ type: "hello" })).not.toBeNull();
    expect(validateClientMessage({ type: "hello", seq: 1.5 })).not.toBeNull();
    expect(validateClientMessage(control({ vx: Number.NaN }))).not.toBeNull();
    expect(validateClientMessage(control({ vy: "fast" }))).not.toBeNull();
    expect(validateClientMessage(control({ clutch: 1 }))).not.toBeNull();
    expect(validateClientMessage({ type: "save", seq: 1 })).not.toBeNull();
  });

  it("accepts well-formed server messages", () => {
    expect(
      validateServerMessage({ type: "hello", seq: 1, schema: WIRE_SCHEMA }),
    ).toBeNull();
    expect(validateServerMessage({ type: "ack", seq: 2 })).toBeNull();
    expect(validateServerMessage({ type: "error", seq: 3, error: "boom" })).toBeNull();
    expect(
      validateServerMessage({
        type: "state",
        seq: 4,
        time: 0.1,
        arm: { x: 0.5, y: 0.1, yaw: 0 },
        pwm: 0,
        recording: false,
        clutch: false,
        objects: [],
        receptacles: [],
      }),
    ).toBeNull();
    expect(validateServerMessage({ type: "state", seq: 5, time: 0, bound: false })).toBeNull();
  });

  it("rejects malformed server messages", () => {
    expect(validateServerMessage({ type: "telemetry", seq: 1 })).not.toBeNull();
    expect(validateServerMessage({ type: "error", seq: 1 })).not.toBeNull();
    expect(validateServerMessage({ type: "state", seq: 1 })).not.toBeNull();
    expect(
      validateServerMessage({ type: "state", seq: 1, time: 0.1, arm: { x: 0.5 } }),
    ).not.toBeNull();
  });
});
