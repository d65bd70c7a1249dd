/**
 * Wire types for the session service, plus a validating parser.
 *
 * One JSON object per websocket message; the field-by-field schema lives
 * in the server's service module. Parsing is strict: a message that does
 * not match the schema throws, so a malformed server never silently
 * corrupts the view state.
 */

export type Action = "forward" | "turn_left" | "turn_right" | "stop";
export type Modality = "audio" | "tactile";

export const ACTIONS: readonly Action[] = [
  "forward",
  "turn_left",
  "turn_right",
  "stop",
];

export interface Voice {
  row: number;
  col: number;
  frequency: number;
  pan: number;
  amplitude: number;
}

export interface AudioFeedback {
  kind: "audio";
  rows: number;
  cols: number;
  voices: Voice[];
}

export interface TactileFeedback {
  kind: "tactile";
  intensities: number[];
  steps: number[];
}

export type Feedback = AudioFeedback | TactileFeedback;

export interface StateMessage {
  type: "state";
  tick: number;
  elapsed_s: number;
  feedback: Feedback;
  collided_this_tick: boolean;
  noc: number;
  done: boolean;
  reached_goal: boolean;
  /** Absent in blindfold mode; the client never renders it either way. */
  pose?: { x: number; y: number; heading: number };
}

export interface ResultMessage {
  type: "result";
  tt_s: number;
  noc: number;
  reached_goal: boolean;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = StateMessage | ResultMessage | ErrorMessage;

export interface StartMessage {
  type: "start";
  path_index: number;
  modality: Modality;
  artifact_seed: number;
}

export interface InputMessage {
  type: "input";
  action: Action;
}

export type ClientMessage = StartMessage | InputMessage | { type: "reset" };

export class ProtocolError extends Error {}

function expectNumber(obj: Record<string, unknown>, key: string): number {
  const v = obj[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new ProtocolError(`field "${key}" must be a finite number`);
  }
  return v;
}

function expectBoolean(obj: Record<string, unknown>, key: string): boolean {
  const v = obj[key];
  if (typeof v !== "boolean") {
    throw new ProtocolError(`field "${key}" must be a boolean`);
  }
  return v;
}

function asRecord(v: unknown, what: string): Record<string, unknown> {
  if (typeof v !== "object" || v === null || Array.isArray(v)) {
    throw new ProtocolError(`${what} must be an object`);
  }
  return v as Record<string, unknown>;
}

function parseFeedback(raw: unknown): Feedback {
  const obj = asRecord(raw, "feedback");
  if (obj.kind === "audio") {
    const voicesRaw = obj.voices;
    if (!Array.isArray(voicesRaw)) {
      throw new ProtocolError('audio feedback needs a "voices" array');
    }
    const voices = voicesRaw.map((v) => {
      const rec = asRecord(v, "voice");
      return {
        row: expectNumber(rec, "row"),
        col: expectNumber(rec, "col"),
        frequency: expectNumber(rec, "frequency"),
        pan: expectNumber(rec, "pan"),
        amplitude: expectNumber(rec, "amplitude"),
      };
    });
    return {
      kind: "audio",
      rows: expectNumber(obj, "rows"),
      cols: expectNumber(obj, "cols"),
      voices,
    };
  }
  if (obj.kind === "tactile") {
    const intensities = obj.intensities;
    const steps = obj.steps;
    if (!Array.isArray(intensities) || !intensities.every((x) => typeof x === "number")) {
      throw new ProtocolError('tactile feedback needs numeric "intensities"');
    }
    if (!Array.isArray(steps) || !steps.every((x) => typeof x === "number")) {
      throw new ProtocolError('tactile feedback needs numeric "steps"');
    }
    if (steps.length !== intensities.length) {
      throw new ProtocolError("intensities and steps must be the same length");
    }
    return { kind: "tactile", intensities, steps };
  }
  throw new ProtocolError(`unknown feedback kind ${JSON.stringify(obj.kind)}`);
}

/** Parse one server message from its decoded-JSON form. */
export function parseServerMessage(raw: unknown): ServerMessage {
  const obj = asRecord(raw, "message");
  switch (obj.type) {
    case "state": {
      const msg: StateMessage = {
        type: "state",
        tick: expectNumber(obj, "tick"),
        elapsed_s: expectNumber(obj, "elapsed_s"),
        feedback: parseFeedback(obj.feedback),
        collided_this_tick: expectBoolean(obj, "collided_this_tick"),
        noc: expectNumber(obj, "noc"),
        done: expectBoolean(obj, "done"),
        reached_goal: expectBoolean(obj, "reached_goal"),
      };
      if (obj.pose !== undefined) {
        const pose = asRecord(obj.pose, "pose");
        msg.pose = {
          x: expectNumber(pose, "x"),
          y: expectNumber(pose, "y"),
          heading: expectNumber(pose, "heading"),
        };
      }
      return msg;
    }
    case "result":
      return {
        type: "result",
        tt_s: expectNumber(obj, "tt_s"),
        noc: expectNumber(obj, "noc"),
        reached_goal: expectBoolean(obj, "reached_goal"),
      };
    case "error": {
      const message = obj.message;
      if (typeof message !== "string") {
        throw new ProtocolError('error message needs a string "message"');
      }
      return { type: "error", message };
    }
    default:
      throw new ProtocolError(`unknown message type ${JSON.stringify(obj.type)}`);
  }
}
