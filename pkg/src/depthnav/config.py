"""Pipeline configuration: one dataclass per chain stage plus trial knobs.

Every parameter named by the stage modules is reachable from a single JSON
config file (see frameio.load_config). Missing keys take the defaults
below; unknown keys are rejected; out-of-range values raise
ConfigurationError naming the offending key.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .adapter import AdapterParams
from .core import SensorModel
from .correction import FillParams
from .encoding import AudioMap
from .errors import ConfigurationError, DepthNavError
from .simsensor import ArtifactModel
from .zoning import ZoneGridSpec

MODALITIES = ("audio", "tactile")


@dataclass(frozen=True)
class ConsistencyParams:
    """Temporal consistency stage; optional (disable for single frames)."""

    enabled: bool = True
    stability_tol: float = 50.0
    gain: float = 0.2
    floor: float = 0.2

    def __post_init__(self):
        if self.stability_tol < 0:
            raise ConfigurationError("consistency.stability_tol must be >= 0")
        if not 0 < self.gain <= 1:
            raise ConfigurationError("consistency.gain must lie in (0, 1]")
        if not 0 <= self.floor <= 1:
            raise ConfigurationError("consistency.floor must lie in [0, 1]")


@dataclass(frozen=True)
class TrialParams:
    """Agent kinematics, trial protocol, and scripted-policy threshold."""

    modality: str = "audio"
    dt: float = 0.1
    timeout: float = 300.0
    collision_debounce: float = 1.0
    near_threshold: float = 0.7
    speed: float = 0.5  # m/s forward
    turn_rate_deg: float = 45.0  # deg/s in place
    agent_radius: float = 0.3  # m

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise ConfigurationError(f"trial.modality must be one of {MODALITIES}")
        if self.dt <= 0:
            raise ConfigurationError("trial.dt must be positive")
        if self.timeout <= 0:
            raise ConfigurationError("trial.timeout must be positive")
        if self.collision_debounce < 0:
            raise ConfigurationError("trial.collision_debounce must be >= 0")
        if not 0 < self.near_threshold <= 1:
            raise ConfigurationError("trial.near_threshold must lie in (0, 1]")
        if self.speed <= 0 or self.turn_rate_deg <= 0 or self.agent_radius <= 0:
            raise ConfigurationError("trial kinematics must be positive")


@dataclass(frozen=True)
class PipelineConfig:
    sensor: SensorModel = SensorModel()
    artifact: ArtifactModel = ArtifactModel()
    fill: FillParams = FillParams()
    consistency: ConsistencyParams = ConsistencyParams()
    zoning: ZoneGridSpec = ZoneGridSpec()
    audio: AudioMap = AudioMap()
    adapter: AdapterParams = AdapterParams()
    trial: TrialParams = TrialParams()


_SECTIONS = {
    "sensor": SensorModel,
    "artifact": ArtifactModel,
    "fill": FillParams,
    "consistency": ConsistencyParams,
    "zoning": ZoneGridSpec,
    "audio": AudioMap,
    "adapter": AdapterParams,
    "trial": TrialParams,
}


def config_from_dict(data: dict) -> PipelineConfig:
    """Build a config from a (possibly partial) nested dict.

    Unknown sections or keys are rejected; section dataclass validation
    errors surface as ConfigurationError.
    """
    if not isinstance(data, dict):
        raise ConfigurationError("config root must be an object")
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigurationError(f"unknown config section(s): {sorted(unknown)}")
    kwargs = {}
    for section, cls in _SECTIONS.items():
        body = data.get(section, {})
        if not isinstance(body, dict):
            raise ConfigurationError(f"config section {section!r} must be an object")
        fields = {f.name for f in dataclasses.fields(cls)}
        bad = set(body) - fields
        if bad:
            raise ConfigurationError(f"unknown key(s) in {section!r}: {sorted(bad)}")
        try:
            kwargs[section] = cls(**body)
        except ConfigurationError:
            raise
        except DepthNavError as e:
            raise ConfigurationError(f"{section}: {e}") from e
    return PipelineConfig(**kwargs)


def config_to_dict(cfg: PipelineConfig) -> dict:
    """Fully-resolved config as a plain dict (the reproducibility echo)."""
    out = {}
    for section in _SECTIONS:
        d = dataclasses.asdict(getattr(cfg, section))
        for k, v in d.items():
            if hasattr(v, "item"):
                d[k] = v.item()
        out[section] = d
    return out
