/**
 * Keyboard-first control mapping: held keys become one 20 Hz control message.
 *
 * Arrow keys / WASD drive planar velocity at the arm's full limit, Q/E drive
 * yaw rate, space toggles the gripper PWM target between 0 and 1, and the
 * clutch key (Shift) must be held for motion to apply.
 */

import type { ControlMessage } from "./wire.js";

export const V_MAX = 0.5; // m/s, matches the simulator's planar limit
export const VYAW_MAX = 2.0; // rad/s
export const CONTROL_HZ = 20;

export interface InputState {
  /** Currently held key codes (KeyboardEvent.code values). */
  held: Set<string>;
  /** Latched by the space key: 1 commands a close, 0 an open. */
  pwmTarget: 0 | 1;
}

export const LEFT_KEYS = ["ArrowLeft", "KeyA"];
export const RIGHT_KEYS = ["ArrowRight", "KeyD"];
export const UP_KEYS = ["ArrowUp", "KeyW"];
export const DOWN_KEYS = ["ArrowDown", "KeyS"];
export const YAW_CCW_KEYS = ["KeyQ"];
export const YAW_CW_KEYS = ["KeyE"];
export const CLUTCH_KEYS = ["ShiftLeft", "ShiftRight"];
export const PWM_TOGGLE_KEY = "Space";

function anyHeld(held: Set<string>, keys: string[]): boolean {
  return keys.some((k) => held.has(k));
}

function axis(held: Set<string>, positive: string[], negative: string[]): number {
  return (anyHeld(held, positive) ? 1 : 0) - (anyHeld(held, negative) ? 1 : 0);
}

/** True when any control-relevant key is held (idle clients stay silent). */
export function anyInputActive(input: InputState): boolean {
  const all = [
    ...LEFT_KEYS,
    ...RIGHT_KEYS,
    ...UP_KEYS,
    ...DOWN_KEYS,
    ...YAW_CCW_KEYS,
    ...YAW_CW_KEYS,
    ...CLUTCH_KEYS,
  ];
  return anyHeld(input.held, all);
}

/** Applies the space-toggle edge; call on keydown only, not on repeat. */
export function togglePwm(input: InputState): InputState {
  return { ...input, pwmTarget: input.pwmTarget === 1 ? 0 : 1 };
}

export function inputToControl(input: InputState, seq: number): ControlMessage {
  return {
    type: "control",
    seq,
    vx: axis(input.held, RIGHT_KEYS, LEFT_KEYS) * V_MAX,
    vy: axis(input.held, UP_KEYS, DOWN_KEYS) * V_MAX,
    vyaw: axis(input.held, YAW_CCW_KEYS, YAW_CW_KEYS) * VYAW_MAX,
    pwm_target: input.pwmTarget,
    clutch: anyHeld(input.held, CLUTCH_KEYS),
  };
}
