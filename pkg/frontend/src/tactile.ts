/**
 * Tactile feedback display model: four vertical bars (one per belt
 * actuator, left to right across the body) plus the stepper-step command
 * each intensity translates to on the physical belt.
 */

import type { TactileFeedback } from "./protocol.js";

export interface TactileBar {
  /** Actuator index, 0 = leftmost on the belt. */
  index: number;
  /** Vibration intensity in [0, 1]; drives the bar height. */
  intensity: number;
  /** Stepper excursion the hardware would be commanded to. */
  steps: number;
}

/** Bars in belt order: index 0 renders leftmost. */
export function tactileBars(feedback: TactileFeedback): TactileBar[] {
  return feedback.intensities.map((intensity, index) => ({
    index,
    intensity,
    steps: feedback.steps[index] ?? 0,
  }));
}
