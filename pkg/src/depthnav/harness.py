"""Trial harness: walking-path generation, scripted agents, TT/NoC metrics.

Reproduces the obstacle-course protocol at desk scale: four equal-difficulty
paths in a 6 m x 4 m room, trials driven either by the scripted
feedback-following policy (the stand-in for a human subject) or by a
feedback-blind random-walk baseline, summarized into a Travel Time /
Number of Collisions table.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import ndimage

from .config import ConsistencyParams, PipelineConfig, TrialParams
from .core import Pose, SensorModel
from .encoding import AudioCode, TactileCode
from .errors import GenerationError, PreconditionError
from .pipeline import ProcessingChain
from .simsensor import Obstacle, Scene, inject_artifacts, render_views
from .zoning import ZoneGridSpec

ACTIONS = ("forward", "turn_left", "turn_right", "stop")

ROOM_W, ROOM_H = 6.0, 4.0
N_OBSTACLES = 5
FOOT_MIN, FOOT_MAX = 0.4, 0.8
CORRIDOR_GRID_RES = 0.05
MAX_ATTEMPTS = 10_000


@dataclass
class AgentState:
    x: float
    y: float
    heading: float
    radius: float = 0.3
    speed: float = 0.5  # m/s
    turn_rate: float = math.radians(45.0)  # rad/s


@dataclass(frozen=True)
class TrialResult:
    tt: float  # Travel Time, seconds (== timeout when the goal was not reached)
    noc: int  # Number of Collisions (debounced)
    reached_goal: bool
    trace: tuple = ()  # (t, x, y, heading) per tick


@dataclass(frozen=True)
class TrialRecord:
    modality: str
    path: int  # 0-based path index
    seed: int
    trial_index: int  # 1-based column in the summary table
    result: TrialResult


def tick_seed(base_seed: int, tick: int) -> int:
    """Stable per-tick artifact seed derived from the trial seed."""
    return int(np.random.SeedSequence([int(base_seed) & (2**63 - 1), tick]).generate_state(1)[0])


def navigation_config(modality: str = "audio") -> PipelineConfig:
    """Trial-tuned pipeline config used by `trial`, `serve`, and the demos.

    Differs from the library defaults where those would cripple navigation:

    * sensor downscaled to 96x72 (intrinsics scaled to match) so a full
      300 s trial renders in seconds, with z_min=100 mm — the stock 800 mm
      minimum range leaves a near-field blind band that reads as "clear"
      right before impact;
    * zoning unknown_threshold=1.0: a zone is reported unknown only when
      it has no valid pixel at all, so empty zones mean "nothing in
      range", not "danger" — saturating on partial dropout freezes the
      agent in open space;
    * temporal consistency off: the agent turns in place at 45 deg/s, so
      consecutive frames rarely agree pixel-for-pixel and the stability
      map just suppresses fill;
    * near_threshold=0.8 in shaped (compressed) units, i.e. start avoiding
      at roughly 1.5 m.
    """
    return PipelineConfig(
        sensor=SensorModel(
            width=96, height=72, fx=85.5, fy=85.5, cx=48.0, cy=36.0, z_min=100.0, z_max=4000.0
        ),
        consistency=ConsistencyParams(enabled=False),
        zoning=ZoneGridSpec(rows=3, cols=4, statistic="min_depth", unknown_threshold=1.0),
        trial=TrialParams(modality=modality, near_threshold=0.8),
    )


# ---------------------------------------------------------------------------
# path generation


def _corridor_exists(scene: Scene, agent_radius: float) -> bool:
    """Grid path search at 5 cm resolution with obstacle inflation.

    Inflating by agent_radius + 0.1 m guarantees a collision-free corridor
    of width >= 2*radius + 0.2 m wherever free cells connect.
    """
    res = CORRIDOR_GRID_RES
    inflate = agent_radius + 0.1
    nx = int(round(scene.room_w / res))
    ny = int(round(scene.room_h / res))
    xs = (np.arange(nx) + 0.5) * res
    ys = (np.arange(ny) + 0.5) * res
    X, Y = np.meshgrid(xs, ys)
    free = (
        (X >= inflate)
        & (X <= scene.room_w - inflate)
        & (Y >= inflate)
        & (Y <= scene.room_h - inflate)
    )
    for ob in scene.obstacles:
        cx = np.clip(X, ob.x, ob.x + ob.w)
        cy = np.clip(Y, ob.y, ob.y + ob.h)
        free &= np.hypot(X - cx, Y - cy) > inflate
    labels, _ = ndimage.label(free)  # 4-connectivity

    def cell(x, y):
        return min(ny - 1, int(y / res)), min(nx - 1, int(x / res))

    s = cell(scene.start.x, scene.start.y)
    g = cell(scene.goal_x, scene.goal_y)
    return labels[s] != 0 and labels[s] == labels[g]


def build_paths(seed: int, agent_radius: float = 0.3) -> list[Scene]:
    """Four equal-difficulty walking-path scenes by seeded rejection sampling.

    Equal difficulty = same room, same obstacle count, and a guaranteed
    collision-free corridor from start to goal in every scene.
    """
    rng = np.random.default_rng(seed)
    start_xy = (0.6, ROOM_H / 2)
    goal = (ROOM_W - 0.6, ROOM_H / 2, 0.5)
    heading = math.atan2(goal[1] - start_xy[1], goal[0] - start_xy[0])
    scenes: list[Scene] = []
    for _ in range(4):
        for attempt in range(MAX_ATTEMPTS):
            obstacles = []
            ok = True
            for _ in range(N_OBSTACLES):
                w = rng.uniform(FOOT_MIN, FOOT_MAX)
                h = rng.uniform(FOOT_MIN, FOOT_MAX)
                x = rng.uniform(0.2, ROOM_W - 0.2 - w)
                y = rng.uniform(0.2, ROOM_H - 0.2 - h)
                height = rng.uniform(0.8, 1.8)
                ob = Obstacle(x, y, w, h, height)
                # keep start and goal areas open
                for px, py in (start_xy, goal[:2]):
                    cx = min(max(px, x), x + w)
                    cy = min(max(py, y), y + h)
                    if math.hypot(px - cx, py - cy) < agent_radius + 0.45:
                        ok = False
                obstacles.append(ob)
            if not ok:
                continue
            scene = Scene(
                ROOM_W,
                ROOM_H,
                tuple(obstacles),
                Pose(start_xy[0], start_xy[1], heading),
                goal[0],
                goal[1],
                goal[2],
            )
            if _corridor_exists(scene, agent_radius):
                scenes.append(scene)
                break
        else:
            raise GenerationError(f"path generation failed after {MAX_ATTEMPTS} attempts (seed {seed})")
    footprints = [tuple((ob.x, ob.y, ob.w, ob.h) for ob in s.obstacles) for s in scenes]
    if len(set(footprints)) != 4:
        raise GenerationError(f"generated layouts are not pairwise distinct (seed {seed})")
    return scenes


# ---------------------------------------------------------------------------
# policies


def _bearing_levels(feedback) -> tuple[float, float, float]:
    """(left, center, right) obstruction levels from a feedback code."""
    if isinstance(feedback, AudioCode):
        pairs = [(v.pan, v.amplitude) for v in feedback.voices]
    elif isinstance(feedback, TactileCode):
        n = len(feedback.intensities)
        pairs = [(2.0 * a / max(n - 1, 1) - 1.0, float(feedback.intensities[a])) for a in range(n)]
    else:
        raise PreconditionError(f"unsupported feedback code {type(feedback).__name__}")
    eps = 1e-9
    left = [lv for b, lv in pairs if b < -1 / 3 - eps]
    center = [lv for b, lv in pairs if -1 / 3 - eps <= b <= 1 / 3 + eps]
    right = [lv for b, lv in pairs if b > 1 / 3 + eps]
    return (
        max(left) if left else 0.0,
        max(center) if center else 0.0,
        max(right) if right else 0.0,
    )


class ScriptedPolicy:
    """Feedback follower: forward when the center bearing is clear,
    otherwise turn toward the side with the lower obstruction level
    (exact tie: left).

    The policy sees only feedback codes -- never pose or goal -- but keeps
    avoidance state, without which a purely reactive follower deadlocks or
    wanders: (a) turn commitment: once turning it keeps turning the same
    way until the center clears, so near-tied sides cannot flip-flop it in
    place; (b) heading debt: avoidance turns are counted and repaid with
    counter-turns once the path has stayed clear for ``realign_after``
    ticks, so each detour returns the agent to its pre-avoidance heading.
    """

    needs_feedback = True

    def __init__(self, near_threshold: float = 0.7, realign_after: int = 10):
        self.near_threshold = near_threshold
        self.realign_after = realign_after
        self.reset()

    def reset(self) -> None:
        self._turning = None
        self._debt = 0  # net avoidance turn ticks; positive = turned left
        self._clear_run = 0

    def __call__(self, feedback) -> str:
        left, center, right = _bearing_levels(feedback)
        if center >= self.near_threshold:
            self._clear_run = 0
            if self._turning is None:
                self._turning = "turn_left" if left <= right else "turn_right"
            self._debt += 1 if self._turning == "turn_left" else -1
            return self._turning
        self._turning = None
        self._clear_run += 1
        if self._debt != 0 and self._clear_run > self.realign_after:
            if self._debt > 0:
                self._debt -= 1
                return "turn_right"
            self._debt += 1
            return "turn_left"
        return "forward"


class RandomWalkPolicy:
    """Feedback-blind baseline: seeded random walk biased 70% forward."""

    needs_feedback = False

    def __init__(self, seed: int):
        self._rng = np.random.default_rng(seed)

    def __call__(self, feedback) -> str:
        return str(self._rng.choice(ACTIONS, p=[0.7, 0.1, 0.1, 0.1]))


class StopPolicy:
    needs_feedback = False

    def __call__(self, feedback) -> str:
        return "stop"


# ---------------------------------------------------------------------------
# trial loop


def collision_check(agent: AgentState, scene: Scene) -> bool:
    """True iff the agent disc touches any obstacle or a room wall (boundary counts)."""
    r = agent.radius
    if agent.x - r <= 0 or agent.x + r >= scene.room_w or agent.y - r <= 0 or agent.y + r >= scene.room_h:
        return True
    for ob in scene.obstacles:
        cx = min(max(agent.x, ob.x), ob.x + ob.w)
        cy = min(max(agent.y, ob.y), ob.y + ob.h)
        if math.hypot(agent.x - cx, agent.y - cy) <= r:
            return True
    return False


class TrialRunner:
    """One trial's tick loop, stepped externally.

    Per tick: compute_feedback() renders, degrades, and runs the chain for
    the current pose; step(action) then moves the agent, resolves
    collisions by slide-to-contact, and checks goal/timeout. Fully
    deterministic given (scene, config, artifact seed, policy).
    """

    def __init__(self, scene: Scene, config: PipelineConfig, artifact_seed: int):
        self.scene = scene
        self.config = config
        self.artifact_seed = artifact_seed
        t = config.trial
        self.agent = AgentState(
            scene.start.x,
            scene.start.y,
            scene.start.heading,
            t.agent_radius,
            t.speed,
            math.radians(t.turn_rate_deg),
        )
        self.chain = ProcessingChain(config)
        self.tick = 0
        self.t = 0.0
        self.noc = 0
        self.collided_this_tick = False
        self._last_counted = -math.inf
        self.done = False
        self.reached_goal = False
        self.trace = [(0.0, self.agent.x, self.agent.y, self.agent.heading)]

    @property
    def pose(self) -> Pose:
        return Pose(self.agent.x, self.agent.y, self.agent.heading)

    def compute_feedback(self):
        frame, guidance, materials = render_views(
            self.scene, self.pose, self.config.sensor, timestamp=self.t
        )
        model = replace(self.config.artifact, seed=tick_seed(self.artifact_seed, self.tick))
        degraded = inject_artifacts(frame, materials, model, self.config.sensor)
        return self.chain.process(degraded, guidance)

    def feedback_code(self, out):
        return out.audio if self.config.trial.modality == "audio" else out.tactile

    def step(self, action: str) -> None:
        if self.done:
            return
        if action not in ACTIONS:
            raise PreconditionError(f"unknown action {action!r}")
        cfg = self.config.trial
        a = self.agent
        if action == "forward":
            nx = a.x + math.cos(a.heading) * a.speed * cfg.dt
            ny = a.y + math.sin(a.heading) * a.speed * cfg.dt
        else:
            nx, ny = a.x, a.y
            if action == "turn_left":
                a.heading += a.turn_rate * cfg.dt
            elif action == "turn_right":
                a.heading -= a.turn_rate * cfg.dt
            a.heading = math.atan2(math.sin(a.heading), math.cos(a.heading))

        probe = AgentState(nx, ny, a.heading, a.radius)
        self.collided_this_tick = collision_check(probe, self.scene)
        if self.collided_this_tick:
            if self.t - self._last_counted >= cfg.collision_debounce:
                self.noc += 1
                self._last_counted = self.t
            nx, ny = self._slide_to_contact(a.x, a.y, nx, ny, a.radius)
        a.x, a.y = nx, ny

        self.tick += 1
        self.t = self.tick * cfg.dt
        self.trace.append((self.t, a.x, a.y, a.heading))
        if math.hypot(a.x - self.scene.goal_x, a.y - self.scene.goal_y) <= self.scene.goal_r:
            self.done = True
            self.reached_goal = True
        elif self.t >= cfg.timeout:
            self.done = True

    def _slide_to_contact(self, ox, oy, nx, ny, r):
        eps = 1e-6
        nx = min(max(nx, r + eps), self.scene.room_w - r - eps)
        ny = min(max(ny, r + eps), self.scene.room_h - r - eps)
        for _ in range(3):
            hit = None
            depth_best = 0.0
            for ob in self.scene.obstacles:
                cx = min(max(nx, ob.x), ob.x + ob.w)
                cy = min(max(ny, ob.y), ob.y + ob.h)
                d = math.hypot(nx - cx, ny - cy)
                if d <= r and r - d > depth_best:
                    hit = (cx, cy, d)
                    depth_best = r - d
            if hit is None:
                return nx, ny
            cx, cy, d = hit
            if d < 1e-9:
                return ox, oy  # degenerate: cancel the whole move
            nx = cx + (nx - cx) / d * (r + eps)
            ny = cy + (ny - cy) / d * (r + eps)
        return ox, oy

    def result(self) -> TrialResult:
        tt = self.t if self.reached_goal else min(self.t, self.config.trial.timeout)
        return TrialResult(round(tt, 6), self.noc, self.reached_goal, tuple(self.trace))


def run_trial(
    scene: Scene,
    policy,
    config: PipelineConfig,
    artifact_seed: int = 0,
) -> TrialResult:
    """Run one scripted trial to completion."""
    runner = TrialRunner(scene, config, artifact_seed)
    needs_feedback = getattr(policy, "needs_feedback", True)
    while not runner.done:
        if needs_feedback:
            out = runner.compute_feedback()
            action = policy(runner.feedback_code(out))
        else:
            action = policy(None)
        runner.step(action)
    return runner.result()


def run_paths(
    config: PipelineConfig,
    paths_seed: int = 0,
    artifact_seeds=range(3),
    modalities=("audio",),
    policy: str = "scripted",
) -> list[TrialRecord]:
    """Run every (path, seed, modality) combination; trial_index = path + 1.

    ``policy`` selects "scripted" (feedback follower) or "random" (the
    feedback-blind baseline, seeded per run so repeats are identical).
    """
    if policy not in ("scripted", "random"):
        raise PreconditionError(f"unknown policy {policy!r}")
    scenes = build_paths(paths_seed, config.trial.agent_radius)
    records = []
    for modality in modalities:
        cfg = replace(config, trial=replace(config.trial, modality=modality))
        for pi, scene in enumerate(scenes):
            for seed in artifact_seeds:
                if policy == "scripted":
                    pol = ScriptedPolicy(cfg.trial.near_threshold)
                else:
                    pol = RandomWalkPolicy(seed * 100 + pi)
                result = run_trial(scene, pol, cfg, artifact_seed=seed)
                records.append(TrialRecord(modality, pi, seed, pi + 1, result))
    return records


# ---------------------------------------------------------------------------
# reporting


def _fmt(value: float) -> str:
    return "%g" % round(value, 2)


def summarize(records: list[TrialRecord]):
    """Mean TT and NoC per (modality, trial index), in the published row layout.

    Returns (text table, nested dict {row label: {trial index: mean}}).
    Empty groups render as 'missing'.
    """
    if not records:
        raise PreconditionError("summarize requires at least one record")
    indices = sorted({r.trial_index for r in records})
    rows = {}
    for metric in ("TT", "NoC"):
        for mod, tag in (("audio", "A"), ("tactile", "T")):
            label = f"{metric}({tag})"
            cells = {}
            for i in indices:
                group = [r.result for r in records if r.modality == mod and r.trial_index == i]
                if group:
                    if metric == "TT":
                        cells[i] = sum(g.tt for g in group) / len(group)
                    else:
                        cells[i] = sum(g.noc for g in group) / len(group)
            if cells:
                rows[label] = cells

    header = ["Conf."] + [f"Trial n.{i}" for i in indices]
    table = [header]
    for label in ("TT(A)", "TT(T)", "NoC(A)", "NoC(T)"):
        if label not in rows:
            continue
        cells = rows[label]
        line = [label]
        for i in indices:
            if i not in cells:
                line.append("missing")
            elif label.startswith("TT"):
                line.append(f"{_fmt(cells[i])} s")
            else:
                line.append(_fmt(cells[i]))
        table.append(line)
    widths = [max(len(row[c]) for row in table) for c in range(len(header))]
    text = "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table)
    return text, rows


CSV_FIELDS = ("modality", "path", "seed", "trial_index", "tt_s", "noc", "reached_goal")


def write_csv(records: list[TrialRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for r in records:
            writer.writerow(
                [
                    r.modality,
                    r.path,
                    r.seed,
                    r.trial_index,
                    "%g" % r.result.tt,
                    r.result.noc,
                    str(r.result.reached_goal).lower(),
                ]
            )
