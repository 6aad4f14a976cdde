"""Transmit precoder update: closed form via a dominant generalized eigenvector.

With reflection phases and UAV position fixed, the secrecy objective reduces
to a ratio of two shifted rank-one quadratic forms over the power ball.  At
full power that ratio is the Rayleigh quotient of the Hermitian pencil

    (p_max * Q_bob + noise_bob * I,  p_max * Q_eve + noise_eve * I)

so the maximizer is the pencil's dominant generalized eigenvector scaled to
the power budget.
"""

import numpy as np

from .exceptions import InfeasibleRateError
from .numerics import dominant_generalized_eigenvector
from .secrecy import Precoder, combined_channel

RATE_SLACK = 1e-9  # relative slack on the minimum-rate power threshold


def ratio_objective(v_bob, v_eve, f, noise_bob, noise_eve):
    """(signal power at Bob + noise_bob) / (signal power at Eve + noise_eve)."""
    num = abs(np.vdot(v_bob, f)) ** 2 + noise_bob
    den = abs(np.vdot(v_eve, f)) ** 2 + noise_eve
    return num / den


def solve_precoder(channels, theta, p_max, r_min, noise_bob, noise_eve, incumbent=None):
    """Full-power precoder maximizing the secrecy ratio for fixed phases and position.

    Feasibility requires the minimum rate to be reachable at full power
    along Bob's combined-channel direction; otherwise InfeasibleRateError.

    The eigenvector solution ignores the minimum-rate constraint, which in
    rare geometries it can violate even when the problem is feasible.  In
    that case the ``incumbent`` precoder (the previous iterate) is kept if
    it still meets the constraint, else the matched filter to Bob's
    combined channel (feasible by the precondition) is returned.  Both
    fallbacks keep the alternating solver's rate trace non-decreasing or
    restore feasibility.
    """
    v_b = combined_channel(channels, theta, "bob")
    v_e = combined_channel(channels, theta, "eve")
    threshold = (2.0**r_min - 1.0) * noise_bob
    spectral_q_bob = float(np.vdot(v_b, v_b).real)  # rank one: ||v_b||^2
    if p_max * spectral_q_bob < threshold * (1.0 - RATE_SLACK):
        raise InfeasibleRateError(
            f"minimum rate unreachable: p_max*||Q_bob|| = {p_max * spectral_q_bob:.3e} "
            f"< {threshold:.3e}"
        )

    n = v_b.size
    eye = np.eye(n)
    a = p_max * np.outer(v_b, v_b.conj()) + noise_bob * eye
    b = p_max * np.outer(v_e, v_e.conj()) + noise_eve * eye
    e = dominant_generalized_eigenvector(a, b)
    f_opt = np.sqrt(p_max) * e

    def meets_rate(f):
        return abs(np.vdot(v_b, f)) ** 2 >= threshold * (1.0 - RATE_SLACK)

    if meets_rate(f_opt):
        return Precoder(f=f_opt, p_max=p_max)
    if incumbent is not None and meets_rate(incumbent.f):
        return Precoder(f=incumbent.f.copy(), p_max=p_max)
    matched = np.sqrt(p_max) * v_b / np.linalg.norm(v_b)
    return Precoder(f=matched, p_max=p_max)
