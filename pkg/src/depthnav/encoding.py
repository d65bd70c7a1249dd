"""Encoding stage: proximity grid to audio or tactile feedback codes.

Audio: one oscillator voice per zone. Rows map to pitch (upper image rows
are higher, spanning ``octave_span`` octaves above ``f0``), columns map to
stereo pan, amplitude is the zone value as delivered (the adapter's curve
is applied upstream). Silent voices are emitted explicitly.

Tactile: four belt actuators, left to right, each taking the maximum
column proximity over the grid columns it covers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ProximityGrid
from .errors import PreconditionError
from .zoning import column_min_proximity


@dataclass(frozen=True)
class AudioMap:
    f0: float = 220.0
    octave_span: float = 1.0

    def __post_init__(self):
        if self.f0 <= 0 or self.octave_span <= 0:
            raise PreconditionError("f0 and octave_span must be positive")


@dataclass(frozen=True)
class Voice:
    row: int
    col: int
    frequency: float  # Hz
    pan: float  # [-1, 1]
    amplitude: float  # [0, 1]


@dataclass(frozen=True)
class AudioCode:
    rows: int
    cols: int
    voices: tuple  # one Voice per zone, row-major

    def __post_init__(self):
        if len(self.voices) != self.rows * self.cols:
            raise PreconditionError("audio code must carry one voice per zone")


@dataclass(frozen=True)
class TactileCode:
    intensities: np.ndarray  # 4 values in [0, 1], left-to-right belt order

    def __post_init__(self):
        arr = np.asarray(self.intensities, dtype=np.float64)
        if arr.shape != (4,):
            raise PreconditionError("tactile code must hold exactly 4 intensities")
        if np.any((arr < 0) | (arr > 1)):
            raise PreconditionError("intensities must lie in [0, 1]")
        object.__setattr__(self, "intensities", arr)


def row_frequency(row: int, rows: int, amap: AudioMap) -> float:
    """f0 * 2^(octave_span * (rows-1-row) / max(rows-1, 1)); top row highest."""
    return amap.f0 * 2.0 ** (amap.octave_span * (rows - 1 - row) / max(rows - 1, 1))


def col_pan(col: int, cols: int) -> float:
    """Linear pan: 2*col / max(cols-1, 1) - 1; a single column pans center."""
    return 2.0 * col / max(cols - 1, 1) - 1.0 if cols > 1 else 0.0


def encode_audio(grid: ProximityGrid, amap: AudioMap = AudioMap()) -> AudioCode:
    voices = tuple(
        Voice(r, c, row_frequency(r, grid.rows, amap), col_pan(c, grid.cols), float(grid.values[r, c]))
        for r in range(grid.rows)
        for c in range(grid.cols)
    )
    return AudioCode(grid.rows, grid.cols, voices)


def actuator_columns(a: int, cols: int) -> list[int]:
    """Grid columns covered by actuator a of 4, by the floor partition rule.

    For fewer than 4 columns the partition can be empty; the actuator then
    reads the single column floor(a*cols/4), duplicating coverage.
    """
    lo = (a * cols) // 4
    hi = ((a + 1) * cols) // 4
    return list(range(lo, hi)) if hi > lo else [lo]


def encode_tactile(grid: ProximityGrid) -> TactileCode:
    colmax = column_min_proximity(grid)
    intensities = np.array(
        [max(colmax[c] for c in actuator_columns(a, grid.cols)) for a in range(4)]
    )
    return TactileCode(intensities)
