"""Correction stage: iterative joint-bilateral hole filling.

Invalid depth pixels are filled from valid neighbors weighted by spatial
distance, guidance-color similarity, and a temporal consistency map.
Iteration is Jacobi-style: every pass reads the previous pass's frame, so
the result is independent of pixel visit order. Valid pixels are never
modified; pixels whose accumulated weight stays below ``min_weight`` after
all passes remain invalid (downstream zoning treats them conservatively
rather than fabricating far depths).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, prange
from scipy import ndimage

from .core import DepthFrame, GuidanceFrame
from .errors import PreconditionError


@dataclass(frozen=True)
class FillParams:
    window_radius: int = 5
    sigma_spatial: float = 3.0
    sigma_color: float = 20.0
    max_iterations: int = 4
    min_weight: float = 0.05

    def __post_init__(self):
        if self.window_radius < 1:
            raise PreconditionError("window_radius must be >= 1")
        if self.sigma_spatial <= 0 or self.sigma_color <= 0:
            raise PreconditionError("sigmas must be positive")
        if self.max_iterations < 1:
            raise PreconditionError("max_iterations must be >= 1")


@dataclass(frozen=True)
class ConsistencyMap:
    """Per-pixel temporal stability weight in [0, 1]."""

    width: int
    height: int
    c: np.ndarray  # float64, shape (height, width)

    def __post_init__(self):
        if self.c.shape != (self.height, self.width):
            raise PreconditionError("consistency map shape mismatch")
        if np.any((self.c < 0) | (self.c > 1)):
            raise PreconditionError("consistency weights must lie in [0, 1]")


@njit(cache=True, parallel=True)
def _fill_pass(depth, valid, rgb, c, ys, xs, radius, inv2ss, inv2sc, min_weight, out_val, out_ok):
    n = ys.shape[0]
    H, W = depth.shape
    for i in prange(n):
        y = ys[i]
        x = xs[i]
        num = 0.0
        den = 0.0
        for dy2 in range(-radius, radius + 1):
            yy = y + dy2
            if yy < 0 or yy >= H:
                continue
            for dx2 in range(-radius, radius + 1):
                xx = x + dx2
                if xx < 0 or xx >= W or not valid[yy, xx]:
                    continue
                dr = np.float64(rgb[yy, xx, 0]) - np.float64(rgb[y, x, 0])
                dg = np.float64(rgb[yy, xx, 1]) - np.float64(rgb[y, x, 1])
                db = np.float64(rgb[yy, xx, 2]) - np.float64(rgb[y, x, 2])
                w = (
                    np.exp(-(dy2 * dy2 + dx2 * dx2) * inv2ss)
                    * np.exp(-(dr * dr + dg * dg + db * db) * inv2sc)
                    * c[yy, xx]
                )
                num += w * depth[yy, xx]
                den += w
        if den >= min_weight:
            # round half away from zero, matching the documented mm rounding
            out_val[i] = np.uint16(np.floor(num / den + 0.5))
            out_ok[i] = True


def joint_bilateral_fill(
    depth: DepthFrame,
    guidance: GuidanceFrame | None,
    consistency: ConsistencyMap | None,
    params: FillParams = FillParams(),
) -> DepthFrame:
    """Fill invalid pixels by an iterated joint-bilateral weighted mean.

    ``guidance=None`` is dark mode: the color weight becomes 1 everywhere.
    ``consistency=None`` weights every pixel's temporal term as 1.
    """
    H, W = depth.height, depth.width
    if guidance is not None and (guidance.height, guidance.width) != (H, W):
        raise PreconditionError("guidance dimensions must match the depth frame")
    if consistency is not None and (consistency.height, consistency.width) != (H, W):
        raise PreconditionError("consistency dimensions must match the depth frame")

    if guidance is not None:
        rgb = np.ascontiguousarray(guidance.rgb)
        inv2sc = 1.0 / (2.0 * params.sigma_color**2)
    else:
        rgb = np.zeros((H, W, 3), np.uint8)
        inv2sc = 0.0
    c = np.ascontiguousarray(consistency.c) if consistency is not None else np.ones((H, W))
    inv2ss = 1.0 / (2.0 * params.sigma_spatial**2)

    cur_depth = depth.depth.copy()
    cur_valid = depth.valid.copy()
    cur_depth[~cur_valid] = 0
    window = 2 * params.window_radius + 1
    for _ in range(params.max_iterations):
        # only holes with a valid pixel inside the window can accumulate
        # weight; skipping the rest keeps large out-of-range regions cheap
        # (maximum_filter == binary dilation by a square, but separable)
        reachable = ndimage.maximum_filter(cur_valid.astype(np.uint8), size=window).astype(bool)
        ys, xs = np.nonzero(~cur_valid & reachable)
        if ys.size == 0:
            break
        out_val = np.zeros(ys.size, np.uint16)
        out_ok = np.zeros(ys.size, bool)
        _fill_pass(
            cur_depth,
            cur_valid,
            rgb,
            c,
            ys.astype(np.int64),
            xs.astype(np.int64),
            params.window_radius,
            inv2ss,
            inv2sc,
            params.min_weight,
            out_val,
            out_ok,
        )
        if not out_ok.any():
            break
        cur_depth = cur_depth.copy()
        cur_valid = cur_valid.copy()
        cur_depth[ys[out_ok], xs[out_ok]] = out_val[out_ok]
        cur_valid[ys[out_ok], xs[out_ok]] = True
    return DepthFrame(W, H, cur_depth, cur_valid, depth.timestamp)


def update_consistency(
    prev: ConsistencyMap | None,
    prev_frame: DepthFrame | None,
    cur_frame: DepthFrame,
    stability_tol: float = 50.0,
    gain: float = 0.2,
    floor: float = 0.2,
) -> ConsistencyMap:
    """Saturating-ramp temporal consistency update.

    A pixel valid in both frames whose depth moved at most ``stability_tol``
    mm ramps up by ``gain`` (capped at 1); any other pixel resets to
    ``floor``. The first frame initializes the whole map to ``floor``.
    """
    H, W = cur_frame.height, cur_frame.width
    if prev is None or prev_frame is None:
        return ConsistencyMap(W, H, np.full((H, W), floor))
    if (prev.height, prev.width) != (H, W) or (prev_frame.height, prev_frame.width) != (H, W):
        raise PreconditionError("consistency update dimensions must agree")
    stable = (
        prev_frame.valid
        & cur_frame.valid
        & (
            np.abs(cur_frame.depth.astype(np.int32) - prev_frame.depth.astype(np.int32))
            <= stability_tol
        )
    )
    c = np.where(stable, np.minimum(1.0, prev.c + gain), floor)
    return ConsistencyMap(W, H, c)
