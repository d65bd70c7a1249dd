import json

import numpy as np
import pytest
from starlette.testclient import TestClient

from depthnav.config import PipelineConfig, TrialParams
from depthnav.core import Pose, SensorModel
from depthnav.encoding import AudioCode, TactileCode
from depthnav.errors import ProtocolError
from depthnav.harness import ScriptedPolicy, build_paths, navigation_config, run_trial
from depthnav.service import (
    SessionEngine,
    create_app,
    deserialize_feedback,
    serialize_feedback,
)
from depthnav.simsensor import Scene


def small_config(**trial_kwargs) -> PipelineConfig:
    base = navigation_config()
    trial = TrialParams(**{**{"modality": "audio", "near_threshold": 0.8}, **trial_kwargs})
    return PipelineConfig(
        sensor=SensorModel(width=48, height=36, fx=42.75, fy=42.75, cx=24.0, cy=18.0, z_min=100.0),
        consistency=base.consistency,
        zoning=base.zoning,
        trial=trial,
    )


EMPTY_ROOM = Scene(6.0, 4.0, (), Pose(1.0, 2.0, 0.0), 4.0, 2.0, 0.5)


def recv_json(ws):
    return json.loads(ws.receive_text())


def send_json(ws, payload):
    ws.send_text(json.dumps(payload))


class TestSerialization:
    def test_audio_round_trip(self):
        cfg = navigation_config()
        engine = SessionEngine(build_paths(0)[:1], small_config())
        engine.start({"type": "start", "path_index": 0})
        msg = engine.state_message()
        code = deserialize_feedback(msg["feedback"])
        assert isinstance(code, AudioCode)
        assert len(code.voices) == 12

    def test_tactile_steps_match_excursion(self):
        code = TactileCode(np.array([0.0, 0.5, 1.0, 0.25]))
        cfg = navigation_config()
        data = serialize_feedback(code, cfg.adapter)
        # stroke 20 mm at 0.1 mm/step -> 200 steps full scale
        assert data["steps"] == [0, 100, 200, 50]
        back = deserialize_feedback(data)
        np.testing.assert_allclose(back.intensities, code.intensities)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ProtocolError):
            deserialize_feedback({"kind": "smell"})


class TestSessionEngine:
    def test_start_validates_fields(self):
        engine = SessionEngine([EMPTY_ROOM], small_config())
        with pytest.raises(ProtocolError):
            engine.start({"type": "start", "path_index": 9})
        with pytest.raises(ProtocolError):
            engine.start({"type": "start", "modality": "smell"})
        with pytest.raises(ProtocolError):
            engine.start({"type": "start", "surprise": 1})

    def test_blindfold_never_exposes_pose(self):
        engine = SessionEngine([EMPTY_ROOM], small_config(), blindfold=True)
        engine.start({"type": "start"})
        for _ in range(5):
            msg = engine.state_message()
            assert "pose" not in msg
            engine.apply("forward")

    def test_sighted_mode_has_pose(self):
        engine = SessionEngine([EMPTY_ROOM], small_config())
        engine.start({"type": "start"})
        msg = engine.state_message()
        assert msg["pose"] == {"x": 1.0, "y": 2.0, "heading": 0.0}


def lockstep_trial(ws, policy, path_index=0, seed=0, modality="audio"):
    """Scripted client: replay the harness policy over the socket."""
    send_json(
        ws,
        {
            "type": "start",
            "path_index": path_index,
            "modality": modality,
            "artifact_seed": seed,
            "lockstep": True,
        },
    )
    transcript = []
    while True:
        msg = recv_json(ws)
        transcript.append(msg)
        if msg["type"] == "result":
            return msg, transcript
        if msg["done"]:
            continue
        action = policy(deserialize_feedback(msg["feedback"]))
        send_json(ws, {"type": "input", "action": action})


class TestWebsocketSessions:
    def test_first_state_has_tick_1_and_ticks_increase(self):
        app = create_app([EMPTY_ROOM], small_config(timeout=2.0))
        with TestClient(app) as client, client.websocket_connect("/session") as ws:
            result, transcript = lockstep_trial(ws, lambda fb: "forward")
            states = [m for m in transcript if m["type"] == "state"]
            assert states[0]["tick"] == 1
            ticks = [m["tick"] for m in states]
            assert ticks == sorted(set(ticks))

    def test_no_input_times_out_with_stop_default(self):
        # real-time mode: client sends nothing after start
        app = create_app([EMPTY_ROOM], small_config(timeout=0.3))
        with TestClient(app) as client, client.websocket_connect("/session") as ws:
            send_json(ws, {"type": "start", "path_index": 0})
            while True:
                msg = recv_json(ws)
                if msg["type"] == "result":
                    break
            assert msg["reached_goal"] is False
            assert msg["tt_s"] == pytest.approx(0.3)

    def test_lockstep_reproduces_run_trial(self):
        cfg = small_config(timeout=30.0)
        scene = build_paths(0)[0]
        expected = run_trial(scene, ScriptedPolicy(0.8), cfg, artifact_seed=5)
        app = create_app([scene], cfg)
        with TestClient(app) as client, client.websocket_connect("/session") as ws:
            result, _ = lockstep_trial(ws, ScriptedPolicy(0.8), seed=5)
        assert result["tt_s"] == expected.tt
        assert result["noc"] == expected.noc
        assert result["reached_goal"] == expected.reached_goal

    def test_blindfold_transcript_has_zero_pose_fields(self):
        app = create_app([EMPTY_ROOM], small_config(timeout=1.0), blindfold=True)
        with TestClient(app) as client, client.websocket_connect("/session") as ws:
            _, transcript = lockstep_trial(ws, lambda fb: "forward")
        assert all("pose" not in m for m in transcript)

    def test_malformed_open_gets_error(self):
        app = create_app([EMPTY_ROOM], small_config())
        with TestClient(app) as client, client.websocket_connect("/session") as ws:
            send_json(ws, {"type": "input", "action": "forward"})
            msg = recv_json(ws)
            assert msg["type"] == "error"
            assert "start" in msg["message"]

    def test_unknown_action_mid_trial_gets_error(self):
        app = create_app([EMPTY_ROOM], small_config())
        with TestClient(app) as client, client.websocket_connect("/session") as ws:
            send_json(ws, {"type": "start", "lockstep": True})
            recv_json(ws)
            send_json(ws, {"type": "input", "action": "moonwalk"})
            messages = []
            while True:
                msg = recv_json(ws)
                messages.append(msg)
                if msg["type"] == "error":
                    break
            assert "moonwalk" in messages[-1]["message"]

    def test_completed_trial_logged_to_csv(self, tmp_path):
        log = tmp_path / "sessions.csv"
        app = create_app([EMPTY_ROOM], small_config(timeout=1.0), log_path=log)
        with TestClient(app) as client, client.websocket_connect("/session") as ws:
            lockstep_trial(ws, lambda fb: "stop", seed=3)
        lines = log.read_text().strip().splitlines()
        assert lines[0] == "modality,path,seed,trial_index,tt_s,noc,reached_goal"
        assert lines[1] == "audio,0,3,1,1,0,false"

    def test_back_to_back_trials_on_one_connection(self):
        app = create_app([EMPTY_ROOM], small_config(timeout=0.5))
        with TestClient(app) as client, client.websocket_connect("/session") as ws:
            first, _ = lockstep_trial(ws, lambda fb: "stop")
            second, _ = lockstep_trial(ws, lambda fb: "stop", seed=1)
            assert first["type"] == second["type"] == "result"
