"""Shared domain types and the depth-to-proximity mapping.

Depth frames store perpendicular z-distance in millimeters (consumer
depth-camera convention), with a boolean validity mask. Proximity is the
normalized inversion of depth: 1.0 at the minimum sensing range, 0.0 at or
beyond the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, PreconditionError


@dataclass(frozen=True)
class Pose:
    """Agent / camera pose on the floor plane."""

    x: float
    y: float
    heading: float  # radians, 0 = +x axis


@dataclass(frozen=True)
class SensorModel:
    """Pinhole depth camera intrinsics and range limits.

    Defaults mimic a first-generation structured-light consumer camera.
    ``noise_sigma_at_1m`` is the depth noise standard deviation (mm) at 1 m;
    ``mounted_height`` is the optical center's height above the floor (m).
    """

    width: int = 320
    height: int = 240
    fx: float = 285.0
    fy: float = 285.0
    cx: float = 160.0
    cy: float = 120.0
    z_min: int = 800
    z_max: int = 4000
    noise_sigma_at_1m: float = 2.5
    mounted_height: float = 1.2

    def __post_init__(self):
        if not (0 < self.z_min < self.z_max):
            raise ConfigurationError(
                f"sensor range requires 0 < z_min < z_max, got [{self.z_min}, {self.z_max}]"
            )
        if self.fx <= 0 or self.fy <= 0:
            raise ConfigurationError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ConfigurationError("principal point must lie inside the image")
        if self.width < 1 or self.height < 1:
            raise ConfigurationError("sensor resolution must be at least 1x1")


@dataclass(frozen=True)
class DepthFrame:
    """One depth image: millimeter depths plus a validity mask.

    ``depth`` and ``valid`` are (height, width) row-major arrays. Producers
    write depth 0 for invalid pixels; consumers must never read the depth of
    an invalid pixel regardless.
    """

    width: int
    height: int
    depth: np.ndarray  # uint16, shape (height, width)
    valid: np.ndarray  # bool, shape (height, width)
    timestamp: float = 0.0

    def __post_init__(self):
        if self.depth.shape != (self.height, self.width):
            raise PreconditionError(
                f"depth shape {self.depth.shape} != ({self.height}, {self.width})"
            )
        if self.valid.shape != (self.height, self.width):
            raise PreconditionError(
                f"valid shape {self.valid.shape} != ({self.height}, {self.width})"
            )

    @property
    def hole_count(self) -> int:
        return int((~self.valid).sum())


@dataclass(frozen=True)
class GuidanceFrame:
    """Color image aligned pixel-for-pixel with a DepthFrame."""

    width: int
    height: int
    rgb: np.ndarray  # uint8, shape (height, width, 3)

    def __post_init__(self):
        if self.rgb.shape != (self.height, self.width, 3):
            raise PreconditionError(
                f"rgb shape {self.rgb.shape} != ({self.height}, {self.width}, 3)"
            )


@dataclass(frozen=True)
class ProximityGrid:
    """R x C zone values in [0, 1]; 1 = nearest. Unknown zones carry 1.0."""

    rows: int
    cols: int
    values: np.ndarray  # float64, shape (rows, cols)
    unknown: np.ndarray = field(default=None)  # bool, shape (rows, cols)

    def __post_init__(self):
        if self.unknown is None:
            object.__setattr__(self, "unknown", np.zeros((self.rows, self.cols), bool))
        if self.values.shape != (self.rows, self.cols):
            raise PreconditionError(
                f"values shape {self.values.shape} != ({self.rows}, {self.cols})"
            )
        if self.unknown.shape != (self.rows, self.cols):
            raise PreconditionError("unknown mask shape mismatch")
        if np.any((self.values < 0) | (self.values > 1)):
            raise PreconditionError("zone values must lie in [0, 1]")


def depth_to_proximity(d, z_min: float, z_max: float):
    """Map depth (mm) to proximity in [0, 1]; accepts scalars or arrays.

    proximity = clamp((z_max - d) / (z_max - z_min), 0, 1); monotone
    non-increasing in d.
    """
    if z_min >= z_max:
        raise ConfigurationError(f"z_min ({z_min}) must be < z_max ({z_max})")
    p = (z_max - np.asarray(d, dtype=np.float64)) / (z_max - z_min)
    p = np.clip(p, 0.0, 1.0)
    return float(p) if np.isscalar(d) or np.ndim(d) == 0 else p


DEFAULT_SENSOR = SensorModel()
