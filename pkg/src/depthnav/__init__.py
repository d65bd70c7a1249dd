"""depthnav: a desk-scale simulation of a depth-camera navigation aid.

A synthetic RGB-D sensor looks into a 2.5-D room; its degraded depth
frames run through a four-stage chain (correction -> zoning -> adapter ->
encoding) that produces the audio/tactile feedback codes a blind user
would perceive; a trial harness and an interactive websocket service
measure how well an agent navigates on that feedback alone.
"""

from .adapter import AdapterParams, AdapterState, adapt, compress, normalize_excursion
from .config import PipelineConfig, config_from_dict, config_to_dict
from .core import (
    DepthFrame,
    GuidanceFrame,
    Pose,
    ProximityGrid,
    SensorModel,
    depth_to_proximity,
)
from .correction import ConsistencyMap, FillParams, joint_bilateral_fill, update_consistency
from .encoding import AudioCode, AudioMap, TactileCode, Voice, encode_audio, encode_tactile
from .errors import DepthNavError
from .frameio import load_config, load_scene, read_stream, save_scene, write_stream
from .harness import (
    RandomWalkPolicy,
    ScriptedPolicy,
    TrialRecord,
    TrialResult,
    build_paths,
    navigation_config,
    run_paths,
    run_trial,
    summarize,
    write_csv,
)
from .pipeline import ChainOutput, ProcessingChain
from .simsensor import ArtifactModel, Material, Obstacle, Scene, inject_artifacts, render_views
from .zoning import ZoneGridSpec, zone_reduce

__version__ = "0.1.0"

__all__ = [
    "AdapterParams",
    "AdapterState",
    "ArtifactModel",
    "AudioCode",
    "AudioMap",
    "ChainOutput",
    "ConsistencyMap",
    "DepthFrame",
    "DepthNavError",
    "FillParams",
    "GuidanceFrame",
    "Material",
    "Obstacle",
    "PipelineConfig",
    "Pose",
    "ProcessingChain",
    "ProximityGrid",
    "RandomWalkPolicy",
    "Scene",
    "ScriptedPolicy",
    "SensorModel",
    "TactileCode",
    "TrialRecord",
    "TrialResult",
    "Voice",
    "ZoneGridSpec",
    "adapt",
    "build_paths",
    "compress",
    "config_from_dict",
    "config_to_dict",
    "depth_to_proximity",
    "encode_audio",
    "encode_tactile",
    "inject_artifacts",
    "joint_bilateral_fill",
    "load_config",
    "load_scene",
    "navigation_config",
    "normalize_excursion",
    "read_stream",
    "render_views",
    "run_paths",
    "run_trial",
    "save_scene",
    "summarize",
    "update_consistency",
    "write_csv",
    "write_stream",
    "zone_reduce",
]
