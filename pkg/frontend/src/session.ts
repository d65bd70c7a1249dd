/**
 * Session view model: everything the UI shows, as a pure state machine
 * over server messages and key presses. No DOM, no sockets.
 *
 * Two properties the tests pin down:
 *
 * - Blindfold integrity: the render model never carries pose or any
 *   other geometry, even when the server (in sighted mode) includes a
 *   pose field. What the user can perceive is exactly the feedback code.
 * - Input pacing: at most one input message per server tick. The
 *   harness applies one action per tick, so sending more would only
 *   create an illusion of responsiveness; the last press before a tick
 *   is what counts, matching the real device's control loop.
 */

import type {
  Action,
  ClientMessage,
  Feedback,
  Modality,
  ServerMessage,
} from "./protocol.js";
import { voiceTargets, type VoiceTarget } from "./audio.js";
import { tactileBars, type TactileBar } from "./tactile.js";

export type Phase = "idle" | "running" | "finished" | "error";

export interface TrialResult {
  modality: Modality;
  pathIndex: number;
  tt_s: number;
  noc: number;
  reachedGoal: boolean;
}

/** One row of the results panel: a metric for one modality across paths. */
export interface StatsRow {
  modality: Modality;
  metric: "tt_s" | "noc";
  /** Mean per path index; null where no trial has finished yet. */
  values: (number | null)[];
}

/** Display-safe snapshot: by construction free of pose/geometry. */
export interface RenderModel {
  phase: Phase;
  tick: number;
  elapsedS: number;
  noc: number;
  collided: boolean;
  reachedGoal: boolean;
  voices: VoiceTarget[] | null;
  bars: TactileBar[] | null;
  stats: StatsRow[];
  errorMessage: string | null;
}

export class SessionViewModel {
  phase: Phase = "idle";
  tick = 0;
  elapsedS = 0;
  noc = 0;
  collided = false;
  reachedGoal = false;
  feedback: Feedback | null = null;
  errorMessage: string | null = null;
  results: TrialResult[] = [];

  private trial: { modality: Modality; pathIndex: number } | null = null;
  private lastInputTick = 0;

  constructor(readonly pathCount = 4) {}

  /** Begin a trial; returns the message to send. */
  start(pathIndex: number, modality: Modality, artifactSeed = 0): ClientMessage {
    this.phase = "running";
    this.tick = 0;
    this.elapsedS = 0;
    this.noc = 0;
    this.collided = false;
    this.reachedGoal = false;
    this.feedback = null;
    this.errorMessage = null;
    this.trial = { modality, pathIndex };
    this.lastInputTick = 0;
    return { type: "start", path_index: pathIndex, modality, artifact_seed: artifactSeed };
  }

  /** Fold one server message into the state. */
  handleMessage(msg: ServerMessage): void {
    switch (msg.type) {
      case "state":
        this.tick = msg.tick;
        this.elapsedS = msg.elapsed_s;
        this.noc = msg.noc;
        this.collided = msg.collided_this_tick;
        this.reachedGoal = msg.reached_goal;
        this.feedback = msg.feedback;
        // msg.pose, if the server sent one, is deliberately dropped here:
        // nothing downstream of the view model can see it.
        break;
      case "result":
        if (this.trial !== null) {
          this.results.push({
            modality: this.trial.modality,
            pathIndex: this.trial.pathIndex,
            tt_s: msg.tt_s,
            noc: msg.noc,
            reachedGoal: msg.reached_goal,
          });
        }
        this.phase = "finished";
        this.trial = null;
        break;
      case "error":
        this.phase = "error";
        this.errorMessage = msg.message;
        this.trial = null;
        break;
    }
  }

  /**
   * Turn a key press into an input message, or null when it should be
   * swallowed (not running, or this tick already has an input).
   */
  press(action: Action): ClientMessage | null {
    if (this.phase !== "running" || this.tick === 0) return null;
    if (this.lastInputTick === this.tick) return null;
    this.lastInputTick = this.tick;
    return { type: "input", action };
  }

  /** Mean TT and NoC per path, one row per (modality, metric) pair. */
  statsRows(): StatsRow[] {
    const rows: StatsRow[] = [];
    for (const modality of ["audio", "tactile"] as const) {
      const runs = this.results.filter((r) => r.modality === modality);
      if (runs.length === 0) continue;
      for (const metric of ["tt_s", "noc"] as const) {
        const values: (number | null)[] = [];
        for (let path = 0; path < this.pathCount; path++) {
          const vals = runs.filter((r) => r.pathIndex === path).map((r) => r[metric]);
          values.push(
            vals.length > 0 ? vals.reduce((a, b) => a + b, 0) / vals.length : null
          );
        }
        rows.push({ modality, metric, values });
      }
    }
    return rows;
  }

  render(): RenderModel {
    return {
      phase: this.phase,
      tick: this.tick,
      elapsedS: this.elapsedS,
      noc: this.noc,
      collided: this.collided,
      reachedGoal: this.reachedGoal,
      voices: this.feedback?.kind === "audio" ? voiceTargets(this.feedback) : null,
      bars: this.feedback?.kind === "tactile" ? tactileBars(this.feedback) : null,
      stats: this.statsRows(),
      errorMessage: this.errorMessage,
    };
  }
}
