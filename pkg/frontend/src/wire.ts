/**
 * Wire schema "imlw-wire-1": JSON text frames with a per-message seq counter.
 *
 * Mirrors the gateway's validation rules so the client can check its own
 * outbound traffic and reject malformed inbound frames before rendering.
 */

export const WIRE_SCHEMA = "imlw-wire-1";

export const CLIENT_TYPES = [
  "hello",
  "control",
  "record_start",
  "record_stop",
  "save",
  "discard",
  "list_tasks",
] as const;

export const SERVER_TYPES = ["hello", "state", "error", "ack", "list_tasks"] as const;

export type ClientType = (typeof CLIENT_TYPES)[number];
export type ServerType = (typeof SERVER_TYPES)[number];

export interface ControlMessage {
  type: "control";
  seq: number;
  vx: number;
  vy: number;
  vyaw: number;
  pwm_target: number;
  clutch: boolean;
}

export interface HelloMessage {
  type: "hello";
  seq: number;
  collector?: string;
  task?: string;
  case?: string;
}

export interface SaveMessage {
  type: "save";
  seq: number;
  outcome: boolean;
}

export interface SimpleMessage {
  type: "record_start" | "record_stop" | "discard" | "list_tasks";
  seq: number;
}

export type ClientMessage = ControlMessage | HelloMessage | SaveMessage | SimpleMessage;

export interface ArmState {
  x: number;
  y: number;
  yaw: number;
}

export interface ObjectState {
  id: number;
  x: number;
  y: number;
  size: number;
  color: number;
  shape: number;
}

export interface ReceptacleState {
  id: number;
  x: number;
  y: number;
  radius: number;
  stack: number[];
}

export interface StateMessage {
  type: "state";
  seq: number;
  time: number;
  bound?: boolean;
  arm?: ArmState;
  pwm?: number;
  recording?: boolean;
  clutch?: boolean;
  objects?: ObjectState[];
  receptacles?: ReceptacleState[];
}

export type ServerMessage =
  | StateMessage
  | { type: "hello"; seq: number; schema: string }
  | { type: "error"; seq: number; error: string }
  | { type: "ack"; seq: number; episode_id?: string }
  | { type: "list_tasks"; seq: number; tasks: unknown[] };

const CONTROL_FIELDS = ["vx", "vy", "vyaw", "pwm_target"] as const;

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Returns an error string for malformed client messages, null when valid. */
export function validateClientMessage(msg: unknown): string | null {
  if (typeof msg !== "object" || msg === null || Array.isArray(msg)) {
    return "message must be a JSON object";
  }
  const m = msg as Record<string, unknown>;
  if (!CLIENT_TYPES.includes(m.type as ClientType)) {
    return `unknown message type: ${JSON.stringify(m.type)}`;
  }
  if (!Number.isInteger(m.seq)) {
    return "missing integer seq";
  }
  if (m.type === "control") {
    for (const name of CONTROL_FIELDS) {
      if (!isFiniteNumber(m[name])) {
        return `control field ${name} must be a finite number`;
      }
    }
    if (typeof m.clutch !== "boolean") {
      return "control field clutch must be a boolean";
    }
  }
  if (m.type === "save" && typeof m.outcome !== "boolean") {
    return "save requires boolean outcome";
  }
  return null;
}

/** Returns an error string for malformed server messages, null when valid. */
export function validateServerMessage(msg: unknown): string | null {
  if (typeof msg !== "object" || msg === null || Array.isArray(msg)) {
    return "message must be a JSON object";
  }
  const m = msg as Record<string, unknown>;
  if (!SERVER_TYPES.includes(m.type as ServerType)) {
    return `unknown message type: ${JSON.stringify(m.type)}`;
  }
  if (!Number.isInteger(m.seq)) {
    return "missing integer seq";
  }
  if (m.type === "error" && typeof m.error !== "string") {
    return "error message requires an error string";
  }
  if (m.type === "state") {
    if (!isFiniteNumber(m.time)) {
      return "state requires a finite time";
    }
    if (m.bound !== false) {
      const arm = m.arm as Record<string, unknown> | undefined;
      if (
        typeof arm !== "object" ||
        arm === null ||
        !isFiniteNumber(arm.x) ||
        !isFiniteNumber(arm.y) ||
        !isFiniteNumber(arm.yaw)
      ) {
        return "state requires arm {x, y, yaw}";
      }
      if (!Array.isArray(m.objects) || !Array.isArray(m.receptacles)) {
        return "state requires objects and receptacles arrays";
      }
    }
  }
  return null;
}
