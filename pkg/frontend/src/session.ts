/**
 * Client session state machine: connection, seq counter, recording lifecycle.
 *
 * The session owns every outbound message so the seq counter is strictly
 * increasing and every frame is schema-checked before it reaches the wire.
 */

import { anyInputActive, InputState, inputToControl } from "./input.js";
import {
  ClientMessage,
  ServerMessage,
  StateMessage,
  validateClientMessage,
  validateServerMessage,
} from "./wire.js";

export interface SocketLike {
  send(data: string): void;
}

/** One 20 Hz snapshot of the operator's input, suitable for logging/replay. */
export interface KeyFrame {
  held: string[];
  pwmTarget: 0 | 1;
}

export class ClientSession {
  collector = "";
  taskName: string | null = null;
  caseId: string | null = null;
  connected = false;
  recording = false;
  lastError: string | null = null;
  lastState: StateMessage | null = null;
  prevState: StateMessage | null = null;
  savedEpisodeIds: string[] = [];
  /** Every message sent, in order (conformance checks and replay oracles). */
  readonly outbox: ClientMessage[] = [];

  private seq = 0;
  private pendingKind = new Map<number, string>();

  constructor(private socket: SocketLike) {}

  private send(msg: ClientMessage): ClientMessage {
    const problem = validateClientMessage(msg);
    if (problem !== null) {
      throw new Error(`refusing to send malformed message: ${problem}`);
    }
    if (this.outbox.length > 0 && msg.seq <= this.outbox[this.outbox.length - 1].seq) {
      throw new Error("seq must be strictly increasing");
    }
    this.outbox.push(msg);
    this.socket.send(JSON.stringify(msg));
    return msg;
  }

  private nextSeq(): number {
    this.seq += 1;
    return this.seq;
  }

  hello(collector: string, task?: string, caseId?: string): void {
    this.collector = collector;
    this.taskName = task ?? null;
    this.caseId = caseId ?? null;
    const msg: ClientMessage = { type: "hello", seq: this.nextSeq(), collector };
    if (task !== undefined) (msg as { task?: string }).task = task;
    if (caseId !== undefined) (msg as { case?: string }).case = caseId;
    this.send(msg);
  }

  /** Sends one control for the current input; idle input sends zero velocity. */
  sendControl(input: InputState): ClientMessage {
    return this.send(inputToControl(input, this.nextSeq()));
  }

  /** Replays a recorded 20 Hz key log; deterministic message sequence. */
  replayKeyLog(frames: KeyFrame[]): ClientMessage[] {
    return frames.map((f) =>
      this.sendControl({ held: new Set(f.held), pwmTarget: f.pwmTarget }),
    );
  }

  /** True when the idle client should stay silent this tick. */
  shouldSkipTick(input: InputState): boolean {
    return !anyInputActive(input);
  }

  recordStart(): void {
    const seq = this.nextSeq();
    this.pendingKind.set(seq, "record_start");
    this.send({ type: "record_start", seq });
  }

  recordStop(): void {
    const seq = this.nextSeq();
    this.pendingKind.set(seq, "record_stop");
    this.send({ type: "record_stop", seq });
  }

  /**
   * Saves the recording with the collector's success judgment. Blocked
   * client-side (returns false, nothing sent) without a collector name.
   */
  save(outcome: boolean): boolean {
    if (this.collector.trim() === "") {
      this.lastError = "enter a collector name before saving";
      return false;
    }
    this.send({ type: "save", seq: this.nextSeq(), outcome });
    return true;
  }

  discard(): void {
    const seq = this.nextSeq();
    this.pendingKind.set(seq, "discard");
    this.send({ type: "discard", seq });
    this.recording = false;
  }

  /** Handles one inbound frame; returns the parsed message or null if bad. */
  onFrame(raw: string): ServerMessage | null {
    let msg: unknown;
    try {
      msg = JSON.parse(raw);
    } catch {
      this.lastError = "invalid JSON from server";
      return null;
    }
    const problem = validateServerMessage(msg);
    if (problem !== null) {
      this.lastError = problem;
      return null;
    }
    const m = msg as ServerMessage;
    switch (m.type) {
      case "hello":
        this.connected = true;
        break;
      case "state":
        this.prevState = this.lastState;
        this.lastState = m;
        if (m.recording !== undefined) this.recording = m.recording;
        break;
      case "error":
        this.lastError = m.error; // surfaced verbatim
        break;
      case "ack": {
        const kind = this.pendingKind.get(m.seq);
        this.pendingKind.delete(m.seq);
        if (kind === "record_start") this.recording = true;
        if (kind === "record_stop") this.recording = false;
        if (m.episode_id !== undefined) this.savedEpisodeIds.push(m.episode_id);
        break;
      }
    }
    return m;
  }
}
