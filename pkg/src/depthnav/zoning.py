"""Processing stage: reduce a depth frame to an R x C proximity grid.

Each zone is an exact-partition block of pixels; its statistic is computed
over valid pixels only and mapped through depth_to_proximity. A zone whose
invalid-pixel fraction exceeds ``unknown_threshold`` is flagged unknown and
saturates to proximity 1.0 (an unsensed region is treated as an obstacle).
With ``unknown_threshold=1`` no zone is ever flagged; a zone with no valid
pixel at all then reads proximity 0.0 (nothing within sensing range).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import DepthFrame, ProximityGrid, SensorModel, depth_to_proximity
from .errors import ConfigurationError

Statistic = Literal["min_depth", "mean_depth", "max_depth"]


@dataclass(frozen=True)
class ZoneGridSpec:
    rows: int = 3
    cols: int = 4
    statistic: Statistic = "min_depth"
    unknown_threshold: float = 0.5

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ConfigurationError("zone grid must be at least 1x1")
        if self.statistic not in ("min_depth", "mean_depth", "max_depth"):
            raise ConfigurationError(f"unknown statistic {self.statistic!r}")
        if not 0 <= self.unknown_threshold <= 1:
            raise ConfigurationError("unknown_threshold must lie in [0, 1]")


def zone_bounds(n_pixels: int, n_zones: int, k: int) -> tuple[int, int]:
    """Half-open pixel range of zone k: [floor(k*N/Z), floor((k+1)*N/Z))."""
    return (k * n_pixels) // n_zones, ((k + 1) * n_pixels) // n_zones


def zone_reduce(frame: DepthFrame, spec: ZoneGridSpec, sensor: SensorModel) -> ProximityGrid:
    """Per-zone depth statistic mapped to proximity in [0, 1]."""
    if spec.rows > frame.height or spec.cols > frame.width:
        raise ConfigurationError(
            f"zone grid {spec.rows}x{spec.cols} exceeds frame {frame.height}x{frame.width}"
        )
    values = np.zeros((spec.rows, spec.cols))
    unknown = np.zeros((spec.rows, spec.cols), bool)
    for r in range(spec.rows):
        y0, y1 = zone_bounds(frame.height, spec.rows, r)
        for c in range(spec.cols):
            x0, x1 = zone_bounds(frame.width, spec.cols, c)
            valid = frame.valid[y0:y1, x0:x1]
            n = valid.size
            n_valid = int(valid.sum())
            if (n - n_valid) / n > spec.unknown_threshold:
                unknown[r, c] = True
                values[r, c] = 1.0
                continue
            if n_valid == 0:
                values[r, c] = 0.0  # nothing sensed within range
                continue
            depths = frame.depth[y0:y1, x0:x1][valid]
            if spec.statistic == "min_depth":
                d = int(depths.min())
            elif spec.statistic == "mean_depth":
                d = float(depths.mean(dtype=np.float64))
            else:
                d = int(depths.max())
            values[r, c] = depth_to_proximity(d, sensor.z_min, sensor.z_max)
    return ProximityGrid(spec.rows, spec.cols, values, unknown)


def column_min_proximity(grid: ProximityGrid) -> np.ndarray:
    """Nearest obstruction per column: max proximity across rows.

    Unknown zones already carry value 1.0 and so participate at 1.0.
    """
    return grid.values.max(axis=0)
