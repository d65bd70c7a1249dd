import { describe, expect, it } from "vitest";

import { SessionViewModel } from "../src/session.js";
import { audioFeedback, stateMessage, tactileFeedback } from "./helpers.js";

function startedVm(modality: "audio" | "tactile" = "audio"): SessionViewModel {
  const vm = new SessionViewModel();
  vm.start(0, modality, 1);
  return vm;
}

describe("trial lifecycle", () => {
  it("start emits the wire message and arms the running phase", () => {
    const vm = new SessionViewModel();
    const msg = vm.start(2, "tactile", 7);
    expect(msg).toEqual({
      type: "start",
      path_index: 2,
      modality: "tactile",
      artifact_seed: 7,
    });
    expect(vm.phase).toBe("running");
  });

  it("state messages drive the display fields", () => {
    const vm = startedVm();
    vm.handleMessage(
      stateMessage(audioFeedback([[0.5]]), {
        tick: 12,
        elapsed_s: 1.2,
        noc: 3,
        collided_this_tick: true,
      })
    );
    const m = vm.render();
    expect([m.tick, m.elapsedS, m.noc, m.collided]).toEqual([12, 1.2, 3, true]);
    expect(m.voices).toHaveLength(1);
    expect(m.bars).toBeNull();
  });

  it("a result finishes the trial and records it", () => {
    const vm = startedVm();
    vm.handleMessage({ type: "result", tt_s: 66.6, noc: 2, reached_goal: true });
    expect(vm.phase).toBe("finished");
    expect(vm.results).toEqual([
      { modality: "audio", pathIndex: 0, tt_s: 66.6, noc: 2, reachedGoal: true },
    ]);
  });

  it("an error message surfaces and halts the session", () => {
    const vm = startedVm();
    vm.handleMessage({ type: "error", message: "unknown action 'jump'" });
    expect(vm.phase).toBe("error");
    expect(vm.render().errorMessage).toContain("jump");
  });
});

describe("blindfold integrity", () => {
  it("the render model never carries pose, even from a sighted server", () => {
    const vm = startedVm("tactile");
    vm.handleMessage(
      stateMessage(tactileFeedback([0.1, 0.2, 0.3, 0.4]), {
        pose: { x: 3.25, y: 1.5, heading: 0.7854 },
      })
    );
    const flat = JSON.stringify(vm.render());
    for (const leak of ["pose", "heading", "3.25", "0.7854", '"x"', '"y"']) {
      expect(flat).not.toContain(leak);
    }
  });

  it("everything shown derives from feedback codes and counters only", () => {
    const vm = startedVm();
    vm.handleMessage(
      stateMessage(audioFeedback([[0.5, 0.1]]), {
        pose: { x: 1, y: 2, heading: 3 },
      })
    );
    expect(Object.keys(vm.render()).sort()).toEqual([
      "bars",
      "collided",
      "elapsedS",
      "errorMessage",
      "noc",
      "phase",
      "reachedGoal",
      "stats",
      "tick",
      "voices",
    ]);
  });
});

describe("input pacing", () => {
  it("allows at most one input per server tick", () => {
    const vm = startedVm();
    vm.handleMessage(stateMessage(audioFeedback([[0]]), { tick: 1 }));
    expect(vm.press("forward")).toEqual({ type: "input", action: "forward" });
    expect(vm.press("turn_left")).toBeNull();
    vm.handleMessage(stateMessage(audioFeedback([[0]]), { tick: 2 }));
    expect(vm.press("turn_left")).toEqual({ type: "input", action: "turn_left" });
  });

  it("swallows presses before the first tick and outside a trial", () => {
    const idle = new SessionViewModel();
    expect(idle.press("forward")).toBeNull();
    const vm = startedVm();
    expect(vm.press("forward")).toBeNull(); // started, but no state yet
    vm.handleMessage({ type: "result", tt_s: 1, noc: 0, reached_goal: false });
    expect(vm.press("forward")).toBeNull();
  });

  it("re-arms per trial", () => {
    const vm = startedVm();
    vm.handleMessage(stateMessage(audioFeedback([[0]]), { tick: 1 }));
    vm.press("forward");
    vm.handleMessage({ type: "result", tt_s: 1, noc: 0, reached_goal: true });
    vm.start(1, "audio", 0);
    vm.handleMessage(stateMessage(audioFeedback([[0]]), { tick: 1 }));
    expect(vm.press("stop")).toEqual({ type: "input", action: "stop" });
  });
});

describe("results panel", () => {
  it("lays out mean TT and NoC per modality across the four paths", () => {
    const vm = new SessionViewModel();
    const run = (path: number, modality: "audio" | "tactile", tt: number, noc: number) => {
      vm.start(path, modality, 0);
      vm.handleMessage({ type: "result", tt_s: tt, noc, reached_goal: true });
    };
    run(0, "audio", 160, 4);
    run(0, "audio", 174, 5); // second seed on the same path: averaged
    run(2, "audio", 65, 3);
    run(1, "tactile", 146, 3);

    const rows = vm.statsRows();
    expect(rows.map((r) => [r.modality, r.metric])).toEqual([
      ["audio", "tt_s"],
      ["audio", "noc"],
      ["tactile", "tt_s"],
      ["tactile", "noc"],
    ]);
    expect(rows[0]!.values).toEqual([167, null, 65, null]);
    expect(rows[1]!.values).toEqual([4.5, null, 3, null]);
    expect(rows[2]!.values).toEqual([null, 146, null, null]);
  });

  it("is empty before any trial finishes", () => {
    expect(startedVm().statsRows()).toEqual([]);
  });
});

describe("responsiveness", () => {
  it("folds a state message into a drawable model in well under 100 ms", () => {
    // The server ticks every 100 ms; handling a message plus producing
    // the render model must fit inside that budget with a wide margin.
    const vm = startedVm();
    const grid = [
      [0.9, 0.4, 0.1, 0.0],
      [0.7, 0.2, 0.0, 0.3],
      [0.3, 0.3, 0.1, 0.6],
    ];
    const rounds = 200;
    const t0 = performance.now();
    for (let i = 0; i < rounds; i++) {
      vm.handleMessage(stateMessage(audioFeedback(grid), { tick: i + 1 }));
      vm.press("forward");
      vm.render();
    }
    const perMessageMs = (performance.now() - t0) / rounds;
    expect(perMessageMs).toBeLessThan(10);
  });
});
