"""Secrecy-rate maximization for reflecting-surface-assisted aerial links.

The library is organized bottom-up:

- ``numerics``     dense Hermitian eigen tools, bisection, gradient checks
- ``channel``      elevation-dependent Rician links with frozen fading
- ``secrecy``      SNRs, secrecy rate, and solver-facing derived channels
- ``power``        closed-form precoder via a generalized eigenvector
- ``reflection``   phase design (Dinkelbach outer, majorize-minimize inner)
- ``deployment``   transmitter placement (fractional programming + descent)
- ``ao``           the alternating orchestrator with per-step rate tracing
- ``harness``      seeded Monte-Carlo sweeps, CSV output, and the CLI
"""

from . import ao, channel, deployment, harness, numerics, power, reflection, secrecy
from .ao import AoConfig, SolveReport, default_init, solve
from .channel import NodeLayout, RadioParams, SmallScaleDraw, synthesize
from .scenario import Scenario
from .secrecy import PhaseVector, Precoder, secrecy_rate

__version__ = "0.1.0"

__all__ = [
    "ao",
    "channel",
    "deployment",
    "harness",
    "numerics",
    "power",
    "reflection",
    "secrecy",
    "AoConfig",
    "SolveReport",
    "default_init",
    "solve",
    "NodeLayout",
    "RadioParams",
    "SmallScaleDraw",
    "synthesize",
    "Scenario",
    "PhaseVector",
    "Precoder",
    "secrecy_rate",
]
