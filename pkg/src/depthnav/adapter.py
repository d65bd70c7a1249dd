"""Adapter stage: perceptual shaping of proximity values.

Fixed, documented chain order: zone value -> adapt (memory-effect
compensation) -> compress (near-object emphasis) -> encoder amplitude or
actuator intensity. ``normalize_excursion`` converts a final intensity to
linear-actuator stepper steps for display.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, PreconditionError


@dataclass(frozen=True)
class AdapterParams:
    k: float = 2.0  # power-law compression exponent parameter, >= 1
    beta: float = 0.3  # adaptation emphasis gain, >= 0
    alpha: float = 0.95  # EMA retention, in [0, 1)
    stroke_mm: float = 20.0
    mm_per_step: float = 0.1

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError("adapter.k must be >= 1")
        if self.beta < 0:
            raise ConfigurationError("adapter.beta must be >= 0")
        if not 0 <= self.alpha < 1:
            raise ConfigurationError("adapter.alpha must lie in [0, 1)")
        if self.stroke_mm <= 0:
            raise ConfigurationError("adapter.stroke_mm must be positive")


@dataclass(frozen=True)
class AdapterState:
    """Per-channel EMA of proximity. One session owns one state."""

    ema: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.ema, dtype=np.float64)
        if np.any((arr < 0) | (arr > 1)):
            raise PreconditionError("ema values must lie in [0, 1]")
        object.__setattr__(self, "ema", arr)

    @classmethod
    def zeros(cls, shape) -> "AdapterState":
        return cls(np.zeros(shape))


def compress(p, k: float):
    """Power-law compression p^(1/k); k > 1 lifts mid-range proximity."""
    if k < 1:
        raise ConfigurationError("compression exponent k must be >= 1")
    arr = np.asarray(p, dtype=np.float64)
    if np.any((arr < 0) | (arr > 1)):
        raise PreconditionError("proximity must lie in [0, 1]")
    out = arr ** (1.0 / k)
    return float(out) if np.ndim(p) == 0 else out


def adapt(p, state: AdapterState, params: AdapterParams) -> tuple:
    """Transient emphasis against the channel EMA.

    ema' = alpha*ema + (1-alpha)*p; output = clamp(p + beta*(p - ema'), 0, 1).
    Steady input converges to pass-through; beta=0 disables compensation.
    Returns (output, updated state).
    """
    arr = np.asarray(p, dtype=np.float64)
    if np.any((arr < 0) | (arr > 1)):
        raise PreconditionError("proximity must lie in [0, 1]")
    ema = params.alpha * state.ema + (1.0 - params.alpha) * arr
    out = np.clip(arr + params.beta * (arr - ema), 0.0, 1.0)
    new_state = AdapterState(ema)
    return (float(out) if np.ndim(p) == 0 else out), new_state


def normalize_excursion(intensity: float, params: AdapterParams) -> int:
    """Map intensity in [0, 1] to integer stepper steps along the stroke."""
    if params.mm_per_step <= 0:
        raise ConfigurationError("adapter.mm_per_step must be positive")
    if not 0 <= intensity <= 1:
        raise PreconditionError("intensity must lie in [0, 1]")
    return int(round(intensity * params.stroke_mm / params.mm_per_step))
