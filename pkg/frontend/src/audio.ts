/**
 * Audio feedback: from voice code to oscillator targets, plus the thin
 * WebAudio engine that realizes them.
 *
 * The mapping is a pure function (testable without a browser); the
 * engine is deliberately dumb glue — one sine oscillator per zone routed
 * through a stereo panner and a gain node, with short linear gain ramps
 * so amplitude changes between server ticks click-free.
 */

import type { AudioFeedback } from "./protocol.js";

/** Gain ramp length. Well under the 100 ms tick so feedback stays crisp. */
export const RAMP_S = 0.03;

export interface VoiceTarget {
  /** Stable per-zone key, so targets can be matched to live oscillators. */
  key: string;
  frequency: number;
  pan: number;
  gain: number;
}

/**
 * Oscillator settings for one feedback frame.
 *
 * Amplitudes are scaled by the voice count so the full-danger mix (every
 * zone at 1.0) sums to unit gain instead of clipping.
 */
export function voiceTargets(feedback: AudioFeedback): VoiceTarget[] {
  const scale = feedback.voices.length > 0 ? 1 / feedback.voices.length : 1;
  return feedback.voices.map((v) => ({
    key: `${v.row},${v.col}`,
    frequency: v.frequency,
    pan: v.pan,
    gain: v.amplitude * scale,
  }));
}

interface VoiceNodes {
  osc: OscillatorNode;
  panner: StereoPannerNode;
  gain: GainNode;
}

/** Keeps one persistent oscillator per zone and ramps it to each target. */
export class AudioEngine {
  private ctx: AudioContext | null = null;
  private nodes = new Map<string, VoiceNodes>();

  update(feedback: AudioFeedback): void {
    if (this.ctx === null) {
      this.ctx = new AudioContext();
    }
    const ctx = this.ctx;
    const now = ctx.currentTime;
    for (const target of voiceTargets(feedback)) {
      let v = this.nodes.get(target.key);
      if (v === undefined) {
        const osc = ctx.createOscillator();
        const panner = ctx.createStereoPanner();
        const gain = ctx.createGain();
        osc.frequency.value = target.frequency;
        panner.pan.value = target.pan;
        gain.gain.value = 0;
        osc.connect(panner).connect(gain).connect(ctx.destination);
        osc.start();
        v = { osc, panner, gain };
        this.nodes.set(target.key, v);
      }
      v.osc.frequency.setValueAtTime(target.frequency, now);
      v.panner.pan.setValueAtTime(target.pan, now);
      v.gain.gain.cancelScheduledValues(now);
      v.gain.gain.setValueAtTime(v.gain.gain.value, now);
      v.gain.gain.linearRampToValueAtTime(target.gain, now + RAMP_S);
    }
  }

  silence(): void {
    if (this.ctx === null) return;
    const now = this.ctx.currentTime;
    for (const v of this.nodes.values()) {
      v.gain.gain.cancelScheduledValues(now);
      v.gain.gain.setValueAtTime(v.gain.gain.value, now);
      v.gain.gain.linearRampToValueAtTime(0, now + RAMP_S);
    }
  }
}
