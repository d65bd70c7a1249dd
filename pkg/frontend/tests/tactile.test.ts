import { describe, expect, it } from "vitest";

import { tactileBars } from "../src/tactile.js";
import { tactileFeedback } from "./helpers.js";

describe("tactileBars", () => {
  it("renders one bar per actuator in belt order", () => {
    const bars = tactileBars(tactileFeedback([0.1, 0.4, 0.9, 0.0]));
    expect(bars.map((b) => b.index)).toEqual([0, 1, 2, 3]);
    expect(bars.map((b) => b.intensity)).toEqual([0.1, 0.4, 0.9, 0.0]);
  });

  it("shows the server's stepper steps next to each bar", () => {
    const fb = tactileFeedback([0.0, 0.5, 1.0, 0.25]);
    expect(tactileBars(fb).map((b) => b.steps)).toEqual(fb.steps);
  });

  it("a mirrored scene reverses the bar row", () => {
    // An obstacle on the user's left must buzz the left end of the belt;
    // its mirror image must be the same display flipped end-for-end.
    const scene = [0.9, 0.6, 0.1, 0.0];
    const bars = tactileBars(tactileFeedback(scene));
    const mirrored = tactileBars(tactileFeedback([...scene].reverse()));
    expect(mirrored.map((b) => b.intensity)).toEqual(
      [...bars].reverse().map((b) => b.intensity)
    );
    expect(mirrored.map((b) => b.steps)).toEqual(
      [...bars].reverse().map((b) => b.steps)
    );
  });
});
