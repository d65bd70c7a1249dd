"""Command-line entry point: render / fill / trial / serve subcommands.

Exit codes (documented contract, stable across releases):

    0  success
    2  usage error (bad flags; argparse)
    3  configuration error (bad config file or parameter out of range)
    4  I/O error (missing file, unwritable path, bind failure)
    5  format or input-data error (bad stream magic, truncation, mismatch)
    6  scene generation error
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .config import PipelineConfig, config_to_dict
from .core import DepthFrame, Pose
from .correction import joint_bilateral_fill, update_consistency
from .errors import (
    ConfigurationError,
    DepthNavError,
    FormatError,
    GenerationError,
)
from .frameio import load_config, load_scene, read_stream, write_stream
from .harness import (
    build_paths,
    navigation_config,
    run_paths,
    summarize,
    tick_seed,
    write_csv,
)
from .simsensor import inject_artifacts, render_views

EXIT_CONFIG = 3
EXIT_IO = 4
EXIT_FORMAT = 5
EXIT_GENERATION = 6


def _load_poses(path) -> list[Pose]:
    """Pose list file: JSON array of [x, y, heading] or trace rows
    [t, x, y, heading] (as found in TrialResult.trace)."""
    with open(path) as fh:
        rows = json.load(fh)
    poses = []
    for row in rows:
        if isinstance(row, dict):
            poses.append(Pose(row["x"], row["y"], row.get("heading", 0.0)))
        elif len(row) == 4:
            poses.append(Pose(row[1], row[2], row[3]))
        elif len(row) == 3:
            poses.append(Pose(row[0], row[1], row[2]))
        else:
            raise FormatError(f"pose rows must have 3 or 4 entries, got {row!r}")
    if not poses:
        raise FormatError(f"{path}: empty pose list")
    return poses


def _resolve_config(args, default: PipelineConfig) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else default
    if getattr(args, "print_config", False):
        json.dump(config_to_dict(cfg), sys.stdout, indent=2)
        sys.stdout.write("\n")
        raise SystemExit(0)
    return cfg


def cmd_render(args) -> int:
    cfg = _resolve_config(args, PipelineConfig())
    scene = load_scene(args.scene)
    poses = _load_poses(args.poses)
    depths, guides = [], []
    for i, pose in enumerate(poses):
        frame, guidance, materials = render_views(scene, pose, cfg.sensor, timestamp=i * cfg.trial.dt)
        if args.degrade:
            model = replace(cfg.artifact, seed=tick_seed(cfg.artifact.seed, i))
            frame = inject_artifacts(frame, materials, model, cfg.sensor)
        depths.append(frame)
        guides.append(guidance)
    write_stream(depths, args.depth_out)
    print(f"wrote {len(depths)} depth frame(s) to {args.depth_out}")
    if args.guidance_out:
        write_stream(guides, args.guidance_out)
        print(f"wrote {len(guides)} guidance frame(s) to {args.guidance_out}")
    return 0


def cmd_fill(args) -> int:
    cfg = _resolve_config(args, PipelineConfig())
    degraded = read_stream(args.degraded)
    guidance = read_stream(args.guidance) if args.guidance else [None] * len(degraded)
    reference = read_stream(args.reference) if args.reference else None
    if len(guidance) != len(degraded):
        raise FormatError(
            f"stream lengths differ: {len(degraded)} degraded vs {len(guidance)} guidance"
        )
    if reference is not None and len(reference) != len(degraded):
        raise FormatError(
            f"stream lengths differ: {len(degraded)} degraded vs {len(reference)} reference"
        )
    for g in guidance:
        if g is not None and (g.width, g.height) != (degraded[0].width, degraded[0].height):
            raise FormatError("guidance dimensions do not match the degraded stream")

    out_frames = []
    cmap, prev = None, None
    for i, frame in enumerate(degraded):
        if cfg.consistency.enabled:
            cmap = update_consistency(
                cmap, prev, frame, cfg.consistency.stability_tol, cfg.consistency.gain, cfg.consistency.floor
            )
            prev = frame
        filled = joint_bilateral_fill(frame, guidance[i], cmap, cfg.fill)
        out_frames.append(filled)
        holes = ~frame.valid
        n_holes = int(holes.sum())
        recovered = int((holes & filled.valid).sum())
        coverage = 100.0 if n_holes == 0 else 100.0 * recovered / n_holes
        line = f"frame {i}: holes {n_holes}, recovered {recovered} ({coverage:.1f}%)"
        if reference is not None:
            mask = holes & filled.valid & reference[i].valid
            if mask.any():
                mae = float(
                    np.abs(
                        filled.depth[mask].astype(np.int64) - reference[i].depth[mask].astype(np.int64)
                    ).mean()
                )
                line += f", MAE {mae:.1f} mm"
        print(line)
    write_stream(out_frames, args.out)
    print(f"wrote {len(out_frames)} corrected frame(s) to {args.out}")
    return 0


def cmd_trial(args) -> int:
    cfg = _resolve_config(args, navigation_config())
    modalities = ("audio", "tactile") if args.modality == "both" else (args.modality,)
    records = run_paths(
        cfg,
        paths_seed=args.paths_seed,
        artifact_seeds=range(args.artifact_seeds),
        modalities=modalities,
        policy=args.policy,
    )
    text, _ = summarize(records)
    print(text)
    if args.csv:
        write_csv(records, args.csv)
        print(f"wrote {len(records)} record(s) to {args.csv}")
    return 0


def cmd_serve(args) -> int:
    import socket

    import uvicorn

    from .service import create_app

    cfg = _resolve_config(args, navigation_config())
    # surface bind failures as our documented I/O exit code instead of
    # whatever uvicorn's worker startup turns them into
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((args.host, args.port))
    finally:
        probe.close()
    scenes = build_paths(args.paths_seed, cfg.trial.agent_radius)
    app = create_app(scenes, cfg, blindfold=args.blindfold, log_path=args.log)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depthnav",
        description="Depth-camera navigation-aid simulation: render, correct, "
        "run trials, and serve interactive sessions.",
        epilog="exit codes: 0 ok, 2 usage, 3 config, 4 I/O, 5 format, 6 generation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_hint):
        p.add_argument("--config", help=f"JSON pipeline config (default: {default_hint})")
        p.add_argument(
            "--print-config",
            action="store_true",
            help="print the fully-resolved config as JSON and exit",
        )

    p = sub.add_parser("render", help="render DNV1 depth/guidance streams for a pose list")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--poses", required=True, help="JSON pose list or trial trace")
    p.add_argument("--depth-out", required=True, help="output DNV1 depth stream")
    p.add_argument("--guidance-out", help="output DNV1 guidance stream")
    p.add_argument("--degrade", action="store_true", help="apply the sensor artifact model")
    common(p, "library defaults")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("fill", help="hole-fill a degraded stream, reporting coverage/MAE")
    p.add_argument("--degraded", required=True, help="input DNV1 depth stream")
    p.add_argument("--guidance", help="matching DNV1 guidance stream")
    p.add_argument("--reference", help="clean DNV1 depth stream for MAE reporting")
    p.add_argument("--out", required=True, help="output DNV1 depth stream")
    common(p, "library defaults")
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("trial", help="run scripted trials over the four generated paths")
    p.add_argument("--paths-seed", type=int, default=0, help="path generation seed")
    p.add_argument("--artifact-seeds", type=int, default=3, metavar="N", help="seeds 0..N-1 per path")
    p.add_argument("--modality", choices=("audio", "tactile", "both"), default="audio")
    p.add_argument("--policy", choices=("scripted", "random"), default="scripted")
    p.add_argument("--csv", help="also write records to this CSV file")
    common(p, "trial-tuned navigation config")
    p.set_defaults(func=cmd_trial)

    p = sub.add_parser("serve", help="serve interactive sessions over a websocket")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--blindfold", action="store_true", help="never send pose/geometry to clients")
    p.add_argument("--paths-seed", type=int, default=0)
    p.add_argument("--log", help="CSV file receiving completed trial records")
    common(p, "trial-tuned navigation config")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except FormatError as e:
        print(f"format error: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except GenerationError as e:
        print(f"generation error: {e}", file=sys.stderr)
        return EXIT_GENERATION
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except DepthNavError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
