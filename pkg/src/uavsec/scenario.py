"""Solver-facing scenario bundle: geometry, radio constants, budgets, and switches."""

from dataclasses import dataclass, replace

from .channel import NodeLayout, RadioParams, synthesize
from .deployment import DEFAULT_SEARCH_BOX


@dataclass(frozen=True)
class Scenario:
    """Everything a single solve needs besides the fading draw.

    ``irs_enabled=False`` zeroes the surface legs of every synthesized
    channel set (shapes are kept so the solvers run unchanged).
    """

    layout: NodeLayout
    radio: RadioParams
    p_max: float
    r_min: float
    search_box: tuple = DEFAULT_SEARCH_BOX
    irs_enabled: bool = True

    def channels_at(self, uav_xy, draw):
        """Synthesize the channel set at a UAV position, honoring the surface switch."""
        chans = synthesize(self.layout.with_uav_xy(uav_xy), self.radio, draw)
        return chans if self.irs_enabled else chans.without_irs()

    def with_updates(self, **kwargs):
        return replace(self, **kwargs)
