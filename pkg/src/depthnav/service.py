"""Interactive session endpoint: the simulate-and-encode loop over a socket.

Message layer (transport-agnostic, one JSON object per message):

Client -> server::

    {"type": "start", "path_index": 0-3, "modality": "audio"|"tactile",
     "artifact_seed": int (default 0), "lockstep": bool (default false)}
    {"type": "input", "action": "forward"|"turn_left"|"turn_right"|"stop"}
    {"type": "reset"}

Server -> client, one "state" per tick (ticks strictly increasing)::

    {"type": "state", "tick": n, "elapsed_s": t, "feedback": {...},
     "collided_this_tick": bool, "noc": n, "done": bool,
     "reached_goal": bool, "pose": {"x","y","heading"}}  # pose only when
                                                        # blindfold=false

followed by one final ``{"type": "result", "tt_s", "noc", "reached_goal"}``
when the trial ends. Feedback serializations::

    {"kind": "audio", "rows", "cols",
     "voices": [{"row","col","frequency","pan","amplitude"}, ...]}
    {"kind": "tactile", "intensities": [4 floats], "steps": [4 ints]}

The tick loop runs server-side at a fixed 1/dt Hz; the latest input
received before a tick applies for that tick, and with no input the
previous action persists (initially "stop"). In lockstep mode the server
instead waits for exactly one input per tick, which makes a scripted
client reproduce ``run_trial`` bit for bit -- that equivalence is the
correctness oracle for this whole module.

In blindfold mode no pose or geometry ever leaves the server: the client
can only perceive what the feedback codes carry.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import replace

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .adapter import normalize_excursion
from .config import MODALITIES, PipelineConfig
from .encoding import AudioCode, TactileCode, Voice
from .errors import ProtocolError
from .harness import ACTIONS, TrialRecord, TrialRunner, write_csv
from .simsensor import Scene

_START_KEYS = {"type", "path_index", "modality", "artifact_seed", "lockstep"}


def serialize_feedback(code, adapter_params) -> dict:
    if isinstance(code, AudioCode):
        return {
            "kind": "audio",
            "rows": code.rows,
            "cols": code.cols,
            "voices": [
                {
                    "row": v.row,
                    "col": v.col,
                    "frequency": v.frequency,
                    "pan": v.pan,
                    "amplitude": v.amplitude,
                }
                for v in code.voices
            ],
        }
    if isinstance(code, TactileCode):
        return {
            "kind": "tactile",
            "intensities": [float(i) for i in code.intensities],
            "steps": [normalize_excursion(float(i), adapter_params) for i in code.intensities],
        }
    raise ProtocolError(f"unserializable feedback {type(code).__name__}")


def deserialize_feedback(data: dict):
    """Inverse of serialize_feedback (client side; steps are display-only)."""
    kind = data.get("kind")
    if kind == "audio":
        voices = tuple(
            Voice(v["row"], v["col"], v["frequency"], v["pan"], v["amplitude"])
            for v in data["voices"]
        )
        return AudioCode(data["rows"], data["cols"], voices)
    if kind == "tactile":
        return TactileCode(np.array(data["intensities"], dtype=np.float64))
    raise ProtocolError(f"unknown feedback kind {kind!r}")


class SessionEngine:
    """One client's trial, stepped message-by-message.

    Owns a TrialRunner and renders protocol messages from it; contains no
    transport code, so the websocket endpoint and in-process test drivers
    share the exact same trial semantics.
    """

    def __init__(self, scenes: list[Scene], config: PipelineConfig, blindfold: bool = False):
        self.scenes = scenes
        self.config = config
        self.blindfold = blindfold
        self.runner = None
        self.record = None

    @property
    def started(self) -> bool:
        return self.runner is not None

    @property
    def done(self) -> bool:
        return self.runner is not None and self.runner.done

    def start(self, msg: dict) -> None:
        unknown = set(msg) - _START_KEYS
        if unknown:
            raise ProtocolError(f"unknown start field(s): {sorted(unknown)}")
        path_index = msg.get("path_index", 0)
        if not isinstance(path_index, int) or not 0 <= path_index < len(self.scenes):
            raise ProtocolError(f"path_index must be an integer in [0, {len(self.scenes)})")
        modality = msg.get("modality", self.config.trial.modality)
        if modality not in MODALITIES:
            raise ProtocolError(f"modality must be one of {MODALITIES}")
        seed = msg.get("artifact_seed", 0)
        if not isinstance(seed, int):
            raise ProtocolError("artifact_seed must be an integer")
        config = replace(self.config, trial=replace(self.config.trial, modality=modality))
        self.runner = TrialRunner(self.scenes[path_index], config, seed)
        self.record = (modality, path_index, seed)

    def reset(self) -> None:
        self.runner = None
        self.record = None

    def state_message(self) -> dict:
        """State for the tick about to run: feedback at the current pose."""
        runner = self.runner
        out = runner.compute_feedback()
        msg = {
            "type": "state",
            "tick": runner.tick + 1,
            "elapsed_s": runner.t,
            "feedback": serialize_feedback(
                runner.feedback_code(out), runner.config.adapter
            ),
            "collided_this_tick": runner.collided_this_tick,
            "noc": runner.noc,
            "done": runner.done,
            "reached_goal": runner.reached_goal,
        }
        if not self.blindfold:
            pose = runner.pose
            msg["pose"] = {"x": pose.x, "y": pose.y, "heading": pose.heading}
        return msg

    def apply(self, action: str) -> None:
        if action not in ACTIONS:
            raise ProtocolError(f"unknown action {action!r}")
        self.runner.step(action)

    def result_message(self) -> dict:
        res = self.runner.result()
        return {
            "type": "result",
            "tt_s": res.tt,
            "noc": res.noc,
            "reached_goal": res.reached_goal,
        }

    def trial_record(self, timed_out: bool = False) -> TrialRecord:
        """CSV row for the finished (or abandoned: timed_out=True) trial."""
        modality, path_index, seed = self.record
        res = self.runner.result()
        if timed_out and not self.runner.done:
            res = replace(
                res, tt=self.runner.config.trial.timeout, reached_goal=False, trace=()
            )
        return TrialRecord(modality, path_index, seed, path_index + 1, res)


class SessionLog:
    """Appends completed trials to one CSV file (harness schema)."""

    def __init__(self, path=None):
        self.path = path
        self.records: list[TrialRecord] = []

    def append(self, record: TrialRecord) -> None:
        self.records.append(record)
        if self.path is not None:
            write_csv(self.records, self.path)


async def run_session(recv, send, engine: SessionEngine, log: SessionLog | None = None) -> bool:
    """Drive one trial over async ``recv()``/``send(dict)`` callables.

    recv returns a parsed client message dict or None on disconnect.
    Returns True when the trial completed normally (the connection may run
    another); False on protocol error or disconnect, after sending an
    error message and/or logging the partial trial as a timeout.
    """
    log = log or SessionLog()
    try:
        msg = await recv()
        while isinstance(msg, dict) and msg.get("type") == "reset":
            msg = await recv()  # reset while idle is a no-op
        if msg is None:
            return False
        if not isinstance(msg, dict) or msg.get("type") != "start":
            raise ProtocolError('session must open with a "start" message')
        engine.start(msg)
        lockstep = bool(msg.get("lockstep", False))
        dt = engine.config.trial.dt
        action = "stop"
        while True:
            await send(engine.state_message())
            if engine.done:
                await send(engine.result_message())
                log.append(engine.trial_record())
                return True
            if lockstep:
                msg = await recv()
                if msg is None:
                    log.append(engine.trial_record(timed_out=True))
                    return False
                next_action = _input_action(msg, action)
                if next_action is None:  # mid-trial reset: abandon
                    log.append(engine.trial_record(timed_out=True))
                    return True
                action = next_action
            else:
                deadline = asyncio.get_event_loop().time() + dt
                while True:
                    remaining = deadline - asyncio.get_event_loop().time()
                    if remaining <= 0:
                        break
                    try:
                        msg = await asyncio.wait_for(recv(), timeout=remaining)
                    except asyncio.TimeoutError:
                        break
                    if msg is None:
                        log.append(engine.trial_record(timed_out=True))
                        return False
                    next_action = _input_action(msg, action)
                    if next_action is None:  # mid-trial reset: abandon
                        log.append(engine.trial_record(timed_out=True))
                        return True
                    action = next_action
            engine.apply(action)
    except ProtocolError as e:
        await send({"type": "error", "message": str(e)})
        if engine.started and not engine.done:
            log.append(engine.trial_record(timed_out=True))
        return False
    except asyncio.CancelledError:
        # server shutdown (e.g. SIGINT) mid-trial: keep the partial record
        if engine.started and not engine.done:
            log.append(engine.trial_record(timed_out=True))
        raise


def _input_action(msg: dict, previous: str) -> str | None:
    """Action carried by a mid-trial message; None means reset (abandon)."""
    if not isinstance(msg, dict):
        raise ProtocolError("messages must be objects")
    kind = msg.get("type")
    if kind == "input":
        action = msg.get("action")
        if action not in ACTIONS:
            raise ProtocolError(f"unknown action {action!r}")
        return action
    if kind == "reset":
        return None
    raise ProtocolError(f"unexpected message type {kind!r}")


def create_app(scenes, config: PipelineConfig, blindfold: bool = False, log_path=None):
    """FastAPI application exposing the session loop at ws://.../session."""
    app = FastAPI(title="depthnav session service")
    log = SessionLog(log_path)

    @app.websocket("/session")
    async def session(ws: WebSocket):
        await ws.accept()
        engine = SessionEngine(scenes, config, blindfold)

        async def recv():
            try:
                return json.loads(await ws.receive_text())
            except WebSocketDisconnect:
                return None
            except json.JSONDecodeError as e:
                raise ProtocolError(f"malformed message: {e.msg}") from e

        async def send(payload):
            try:
                await ws.send_text(json.dumps(payload))
            except WebSocketDisconnect:
                pass

        try:
            # back-to-back trials on one connection until error/disconnect
            while await run_session(recv, send, engine, log):
                engine = SessionEngine(scenes, config, blindfold)
        finally:
            try:
                await ws.close()
            except RuntimeError:
                pass

    return app
