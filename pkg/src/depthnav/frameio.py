"""Bit-exact persistence: DNV1 frame streams, scene files, config files.

DNV1 stream layout (all integers little-endian, no padding, no compression):

    offset  size  field
    0       4     magic "DNV1"
    4       4     width  (uint32)
    8       4     height (uint32)
    12      4     frame_count (uint32)
    16      1     kind: 0 = depth, 1 = guidance
    17      ...   frames, contiguous

Depth frames are width*height uint16 millimeters, value 0 = invalid.
Guidance frames are width*height RGB byte triplets. Scene and config files
are JSON documents; unknown keys are rejected for forward compatibility.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .config import PipelineConfig, config_from_dict
from .core import DepthFrame, GuidanceFrame, Pose
from .errors import (
    BadMagicError,
    ConfigurationError,
    FormatError,
    PreconditionError,
    TruncatedStreamError,
)
from .simsensor import Material, Obstacle, Scene

MAGIC = b"DNV1"
_HEADER = struct.Struct("<4sIIIB")
KIND_DEPTH = 0
KIND_GUIDANCE = 1
_MAX_PIXELS = 1 << 28  # sanity cap against corrupt headers


def write_stream(frames, path) -> int:
    """Write a homogeneous list of depth or guidance frames; returns bytes written."""
    if not frames:
        raise PreconditionError("cannot write an empty stream")
    first = frames[0]
    kind = KIND_DEPTH if isinstance(first, DepthFrame) else KIND_GUIDANCE
    w, h = first.width, first.height
    for f in frames:
        if (f.width, f.height) != (w, h) or isinstance(f, type(first)) is False:
            raise PreconditionError("stream frames must share dimensions and kind")
    with open(path, "wb") as fh:
        n = fh.write(_HEADER.pack(MAGIC, w, h, len(frames), kind))
        for f in frames:
            if kind == KIND_DEPTH:
                data = np.where(f.valid, f.depth, 0).astype("<u2").tobytes()
            else:
                data = np.ascontiguousarray(f.rgb, dtype=np.uint8).tobytes()
            n += fh.write(data)
    return n


def read_stream(path):
    """Exact inverse of write_stream; returns a list of frames."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size or raw[:4] != MAGIC:
        raise BadMagicError(f"{path}: not a DNV1 stream")
    magic, w, h, count, kind = _HEADER.unpack_from(raw)
    if w < 1 or h < 1 or w * h > _MAX_PIXELS:
        raise FormatError(f"{path}: implausible dimensions {w}x{h}")
    if kind not in (KIND_DEPTH, KIND_GUIDANCE):
        raise FormatError(f"{path}: unknown stream kind {kind}")
    px = w * h
    frame_bytes = px * 2 if kind == KIND_DEPTH else px * 3
    expected = _HEADER.size + count * frame_bytes
    if len(raw) < expected:
        raise TruncatedStreamError(
            f"{path}: header promises {count} frames ({expected} bytes), file has {len(raw)}"
        )
    frames = []
    off = _HEADER.size
    for _ in range(count):
        chunk = raw[off : off + frame_bytes]
        off += frame_bytes
        if kind == KIND_DEPTH:
            depth = np.frombuffer(chunk, dtype="<u2").reshape(h, w).astype(np.uint16)
            frames.append(DepthFrame(w, h, depth, depth > 0))
        else:
            rgb = np.frombuffer(chunk, dtype=np.uint8).reshape(h, w, 3).copy()
            frames.append(GuidanceFrame(w, h, rgb))
    return frames


def _reject_unknown(obj: dict, allowed, where: str):
    bad = set(obj) - set(allowed)
    if bad:
        raise FormatError(f"unknown key(s) in {where}: {sorted(bad)}")


def scene_to_dict(scene: Scene) -> dict:
    return {
        "room": {"w": scene.room_w, "h": scene.room_h},
        "obstacles": [
            {
                "x": ob.x,
                "y": ob.y,
                "w": ob.w,
                "h": ob.h,
                "height": ob.height,
                "material": ob.material.name.lower(),
            }
            for ob in scene.obstacles
        ],
        "start": {"x": scene.start.x, "y": scene.start.y, "heading": scene.start.heading},
        "goal": {"x": scene.goal_x, "y": scene.goal_y, "r": scene.goal_r},
    }


def scene_from_dict(data: dict) -> Scene:
    _reject_unknown(data, ("room", "obstacles", "start", "goal"), "scene")
    try:
        room = data["room"]
        _reject_unknown(room, ("w", "h"), "scene.room")
        obstacles = []
        for i, ob in enumerate(data.get("obstacles", [])):
            _reject_unknown(ob, ("x", "y", "w", "h", "height", "material"), f"scene.obstacles[{i}]")
            material = Material[ob.get("material", "diffuse").upper()]
            obstacles.append(Obstacle(ob["x"], ob["y"], ob["w"], ob["h"], ob["height"], material))
        start = data["start"]
        _reject_unknown(start, ("x", "y", "heading"), "scene.start")
        goal = data["goal"]
        _reject_unknown(goal, ("x", "y", "r"), "scene.goal")
        return Scene(
            room["w"],
            room["h"],
            tuple(obstacles),
            Pose(start["x"], start["y"], start.get("heading", 0.0)),
            goal["x"],
            goal["y"],
            goal["r"],
        )
    except KeyError as e:
        raise FormatError(f"scene file missing key {e}") from e


def save_scene(scene: Scene, path) -> None:
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n")


def load_scene(path) -> Scene:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: parse error at line {e.lineno}: {e.msg}") from e
    return scene_from_dict(data)


def load_config(path) -> PipelineConfig:
    """Load a JSON pipeline config; missing keys take documented defaults."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}: parse error at line {e.lineno}: {e.msg}") from e
    return config_from_dict(data)
