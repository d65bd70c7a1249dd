"""The full processing chain: correction -> zoning -> adapter -> encoding.

One ProcessingChain instance holds the per-session state (temporal
consistency map, previous raw frame, adapter EMA) and turns each degraded
depth frame into audio and tactile feedback codes. Chain order is fixed:
zone value -> adapt -> compress -> encoders.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adapter import AdapterState, adapt, compress
from .config import PipelineConfig
from .core import DepthFrame, GuidanceFrame, ProximityGrid
from .correction import joint_bilateral_fill, update_consistency
from .encoding import AudioCode, TactileCode, encode_audio, encode_tactile
from .zoning import zone_reduce


@dataclass(frozen=True)
class ChainOutput:
    corrected: DepthFrame
    grid: ProximityGrid  # raw zone proximities
    shaped: ProximityGrid  # after adapt + compress; what the encoders saw
    audio: AudioCode
    tactile: TactileCode


class ProcessingChain:
    """Stateful chain over one frame stream. Not safe to share across sessions."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.reset()

    def reset(self) -> None:
        z = self.config.zoning
        self._consistency = None
        self._prev_raw = None
        self._adapter_state = AdapterState.zeros((z.rows, z.cols))

    def process(self, depth: DepthFrame, guidance: GuidanceFrame | None) -> ChainOutput:
        cfg = self.config
        cmap = None
        if cfg.consistency.enabled:
            cmap = update_consistency(
                self._consistency,
                self._prev_raw,
                depth,
                cfg.consistency.stability_tol,
                cfg.consistency.gain,
                cfg.consistency.floor,
            )
            self._consistency = cmap
            self._prev_raw = depth
        corrected = joint_bilateral_fill(depth, guidance, cmap, cfg.fill)
        grid = zone_reduce(corrected, cfg.zoning, cfg.sensor)
        adapted, self._adapter_state = adapt(grid.values, self._adapter_state, cfg.adapter)
        shaped_values = compress(adapted, cfg.adapter.k)
        shaped = ProximityGrid(grid.rows, grid.cols, shaped_values, grid.unknown.copy())
        return ChainOutput(
            corrected=corrected,
            grid=grid,
            shaped=shaped,
            audio=encode_audio(shaped, cfg.audio),
            tactile=encode_tactile(shaped),
        )
