"""Alternating optimization: cyclic precoder, reflection, placement updates.

Each iteration applies the enabled subsolvers in a fixed order, always
feeding the freshest variables forward, and records the secrecy rate after
every step.  Each subsolver is individually non-decreasing in the secrecy
rate (the precoder step by exact optimality of the pencil eigenvector, the
other two by construction of their safeguards), so the whole trace is
non-decreasing and, being bounded, converges.
"""

import math
from dataclasses import dataclass

import numpy as np

from .deployment import deploy_constants, solve_deployment
from .exceptions import (
    InfeasibleRateError,
    InfeasibleStartError,
    NoSignChangeError,
)
from .power import solve_precoder
from .reflection import solve_reflection
from .secrecy import PhaseVector, Precoder, effective_channels, secrecy_rate

CONVERGED = "Converged"
MAX_ITERS = "MaxIters"
INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class AoConfig:
    max_iters: int = 50
    tol: float = 1e-4  # bits/s/Hz
    enable_power: bool = True
    enable_reflection: bool = True
    enable_deployment: bool = True

    def __post_init__(self):
        if self.max_iters < 1 or self.tol <= 0:
            raise ValueError("max_iters must be >= 1 and tol > 0")


@dataclass(frozen=True)
class IterationRecord:
    index: int
    rate_after_power: float
    rate_after_reflection: float
    rate_after_deployment: float


@dataclass
class SolveReport:
    initial_rate: float
    trace: list
    final_f: Precoder | None
    final_theta: PhaseVector | None
    final_a: np.ndarray | None
    status: str
    message: str = ""

    @property
    def iterations(self):
        return len(self.trace)

    @property
    def final_rate(self):
        if not self.trace:
            return self.initial_rate
        return self.trace[-1].rate_after_deployment

    def step_rates(self):
        """Flattened per-step rate sequence, starting from the initial rate."""
        rates = [self.initial_rate]
        for rec in self.trace:
            rates.extend(
                [rec.rate_after_power, rec.rate_after_reflection, rec.rate_after_deployment]
            )
        return rates


def default_init(scenario, draw, cfg=None):
    """Deterministic feasible starting point (precoder, phases, position).

    The precoder is the full-power matched filter to Bob's direct channel;
    the phases make every surface term of Bob's received amplitude
    co-phased with the direct term; the position is the Bob/surface
    midpoint, falling back to directly over Bob if the minimum-rate check
    fails there.  When deployment is disabled the position stays at the
    scenario's layout.
    """
    layout = scenario.layout
    radio = scenario.radio
    deploy = cfg.enable_deployment if cfg is not None else True
    box = np.asarray(scenario.search_box, dtype=float).reshape(2, 2)
    if deploy:
        midpoint = 0.5 * (layout.bob_xy + layout.irs_xy)
        candidates = [
            np.clip(midpoint, box[:, 0], box[:, 1]),
            np.clip(layout.bob_xy, box[:, 0], box[:, 1]),
        ]
    else:
        candidates = [layout.uav_xy]

    rate_target = 2.0**scenario.r_min - 1.0
    for a0 in candidates:
        chans = scenario.channels_at(a0, draw)
        direct = chans.direct_bob
        norm = np.linalg.norm(direct)
        if norm > 0:
            f0 = math.sqrt(scenario.p_max) * direct / norm
        else:
            f0 = math.sqrt(scenario.p_max / radio.n_antennas) * np.ones(
                radio.n_antennas, dtype=complex
            )
        # co-phase each surface term against the direct amplitude
        terms = chans.irs_bob.conj() * (chans.uav_irs @ f0)
        direct_amp = complex(np.vdot(direct, f0))
        ref_phase = np.angle(direct_amp) if direct_amp != 0 else 0.0
        phases = np.where(terms == 0, 0.0, ref_phase - np.angle(terms))
        theta0 = PhaseVector(phases)
        point = secrecy_rate(chans, theta0, f0, radio.noise_bob, radio.noise_eve)
        if point.gamma_bob >= rate_target * (1.0 - 1e-12):
            return Precoder(f=f0, p_max=scenario.p_max), theta0, np.asarray(a0, dtype=float)
    raise InfeasibleStartError(
        "no feasible start: minimum rate unreachable at the midpoint or over Bob"
    )


def solve(scenario, draw, init=None, cfg=None):
    """Run the alternating solver to convergence or the iteration cap.

    ``init`` is an optional (precoder, phases, position) triple; when
    omitted, ``default_init`` is used.  Infeasibility anywhere (at the
    start or inside a subsolver) produces a report with status
    ``Infeasible`` rather than an exception.
    """
    cfg = cfg or AoConfig()
    radio = scenario.radio
    reflection_on = cfg.enable_reflection and scenario.irs_enabled

    try:
        if init is None:
            f, theta, a = default_init(scenario, draw, cfg)
        else:
            f, theta, a = init
            a = np.asarray(a, dtype=float).reshape(2)
    except InfeasibleStartError as exc:
        return SolveReport(0.0, [], None, None, None, INFEASIBLE, message=str(exc))

    chans = scenario.channels_at(a, draw)
    point = secrecy_rate(chans, theta, f, radio.noise_bob, radio.noise_eve)
    if point.gamma_bob < (2.0**scenario.r_min - 1.0) * (1.0 - 1e-12):
        return SolveReport(
            point.rate, [], f, theta, a, INFEASIBLE,
            message="initial point violates the minimum-rate constraint",
        )

    initial_rate = point.rate
    prev_rate = initial_rate
    trace = []
    status = MAX_ITERS
    message = ""
    for n in range(1, cfg.max_iters + 1):
        try:
            if cfg.enable_power:
                f = solve_precoder(
                    chans, theta, scenario.p_max, scenario.r_min,
                    radio.noise_bob, radio.noise_eve, incumbent=f,
                )
            rate_p = secrecy_rate(chans, theta, f, radio.noise_bob, radio.noise_eve).rate

            if reflection_on:
                eff = effective_channels(chans, f)
                # explore alternative basins once, then follow the warm path
                theta = solve_reflection(
                    eff, theta, radio.noise_bob, radio.noise_eve, scenario.r_min,
                    explore=(n == 1),
                )
            rate_r = secrecy_rate(chans, theta, f, radio.noise_bob, radio.noise_eve).rate

            if cfg.enable_deployment:
                constants = deploy_constants(chans, draw, theta, f, radio)
                a = solve_deployment(
                    a, constants, scenario.layout, radio, scenario.r_min, scenario.search_box
                )
                chans = scenario.channels_at(a, draw)
            rate_d = secrecy_rate(chans, theta, f, radio.noise_bob, radio.noise_eve).rate
        except (InfeasibleRateError, InfeasibleStartError, NoSignChangeError) as exc:
            status = INFEASIBLE
            message = str(exc)
            break

        trace.append(IterationRecord(n, rate_p, rate_r, rate_d))
        if abs(rate_d - prev_rate) < cfg.tol:
            status = CONVERGED
            break
        prev_rate = rate_d

    return SolveReport(initial_rate, trace, f, theta, a, status, message=message)
