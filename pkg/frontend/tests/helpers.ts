/** Synthetic server messages shaped like the real service's output. */

import type {
  AudioFeedback,
  Feedback,
  StateMessage,
  TactileFeedback,
} from "../src/protocol.js";

/** 3x4 voice code from a row-major amplitude grid. */
export function audioFeedback(amplitudes: number[][]): AudioFeedback {
  const rows = amplitudes.length;
  const cols = amplitudes[0]?.length ?? 0;
  const voices = [];
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      voices.push({
        row: r,
        col: c,
        frequency: 330 + 110 * (rows - 1 - r),
        pan: cols > 1 ? (2 * c) / (cols - 1) - 1 : 0,
        amplitude: amplitudes[r]![c]!,
      });
    }
  }
  return { kind: "audio", rows, cols, voices };
}

export function tactileFeedback(intensities: number[]): TactileFeedback {
  return {
    kind: "tactile",
    intensities,
    steps: intensities.map((i) => Math.round(i * 200)),
  };
}

export function stateMessage(
  feedback: Feedback,
  extra: Partial<StateMessage> = {}
): StateMessage {
  return {
    type: "state",
    tick: 1,
    elapsed_s: 0.1,
    feedback,
    collided_this_tick: false,
    noc: 0,
    done: false,
    reached_goal: false,
    ...extra,
  };
}
