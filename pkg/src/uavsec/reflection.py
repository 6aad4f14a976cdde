"""Reflection phase design: Dinkelbach outer loop, majorize-minimize inner loop.

For a fixed precoder and transmitter position the secrecy objective is a
ratio of two "reflected power plus noise" terms in the unit-modulus
coefficient vector.  The fractional program is handled by root-finding on
the Dinkelbach parameter ``mu``: for each ``mu`` the penalized objective

    phi(theta | mu) = eve_power(theta) + noise_eve - mu * rate_slack(theta)

is driven down by a majorize-minimize sweep whose surrogate is the spectral
upper bound of the quadratic form; the surrogate's unconstrained minimizer
over unit-modulus vectors is elementwise phase alignment, so every inner
step is closed form.  ``rate_slack`` is Bob's received power plus noise
minus the minimum-rate power target, so at the root the slack is positive
by construction and the minimum-rate constraint comes out satisfied.

The landscape is multimodal (the best operating point is often a narrow
near-null of the eavesdropper), so the solver hedges across basins:

- a root search warm-started from the caller's phases (the alternating
  loop's previous iterate),
- optional exploration runs from structured starts (Bob-aligned phases and
  the best of a fixed batch of sampled phase vectors, triaged by a cheap
  elementwise ascent), plus one continuation run that tracks the minimizer
  along an increasing ``mu`` path from the eavesdropper-minimizing point,
- a final elementwise ascent polish on the true objective, each update
  being the closed-form optimum of the single-element subproblem.

Every candidate is deterministic, and two safeguards make the contract
unconditional in floating point: the returned phases never leave the
minimum-rate slack negative when the input was feasible, and never lower
the fractional objective below its value at the input.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NoSignChangeError
from .numerics import bisect_root, max_eigenvalue
from .secrecy import PhaseVector, reflected_power

TWO_PI = 2.0 * math.pi

MM_DEFAULT_TOL = 1e-6
MM_MAX_ITERS = 200
# Outer root search stops at a 1e-6 relative parameter interval or a
# penalized-objective residual of 1e-8 relative to the noise scale.
DINKELBACH_TOL = 1e-6

SAMPLED_STARTS = 128
TRIAGE_KEEP = 2
CD_MAX_SWEEPS = 8
_SAMPLER_KEY = 0xA11C11


def _lam_max(h_eve, h_bob, mu):
    """Largest eigenvalue of ``h_eve h_eve^H - mu * h_bob h_bob^H``.

    The matrix has rank at most two, so its nonzero spectrum equals that of
    a 2x2 reduction; the zero eigenvalue joins the spectrum whenever the
    dimension exceeds two.
    """
    m = h_eve.size
    if m <= 2:
        h = np.outer(h_eve, h_eve.conj()) - mu * np.outer(h_bob, h_bob.conj())
        return max_eigenvalue(h)
    g11 = float(np.vdot(h_eve, h_eve).real)
    g22 = float(np.vdot(h_bob, h_bob).real)
    g12 = complex(np.vdot(h_eve, h_bob))
    trace = g11 - mu * g22
    det = -mu * (g11 * g22 - abs(g12) ** 2)
    disc = max(trace * trace - 4.0 * det, 0.0)
    return max(0.5 * (trace + math.sqrt(disc)), 0.0)


class _Surrogate:
    """Penalized objective and its spectral majorizer for one fixed ``mu``."""

    def __init__(self, eff, mu, noise_bob, noise_eve, r_min):
        self.eff = eff
        self.mu = mu
        self.noise_bob = noise_bob
        self.noise_eve = noise_eve
        self.r_min = r_min
        self.h_eve = eff.h_eve
        self.h_bob = eff.h_bob
        self.lam = _lam_max(eff.h_eve, eff.h_bob, mu)
        # theta-independent part of the linear coefficient
        self.w = mu * np.conj(eff.h_bob_direct) * eff.h_bob - np.conj(eff.h_eve_direct) * eff.h_eve

    def phi(self, theta):
        p_eve = abs(complex(np.vdot(theta, self.h_eve)) + self.eff.h_eve_direct) ** 2
        p_bob = abs(complex(np.vdot(theta, self.h_bob)) + self.eff.h_bob_direct) ** 2
        slack = p_bob + self.noise_bob - 2.0**self.r_min * self.noise_bob
        return p_eve + self.noise_eve - self.mu * slack

    def beta(self, anchor_theta):
        # (lam*I - H) @ anchor + w, with H applied through its rank-two factors
        return (
            self.lam * anchor_theta
            - self.h_eve * np.vdot(self.h_eve, anchor_theta)
            + self.mu * self.h_bob * np.vdot(self.h_bob, anchor_theta)
            + self.w
        )

    def offset(self, anchor_theta):
        m = anchor_theta.size
        quad = (
            self.lam * m
            - abs(np.vdot(self.h_eve, anchor_theta)) ** 2
            + self.mu * abs(np.vdot(self.h_bob, anchor_theta)) ** 2
        )
        return (
            quad
            + abs(self.eff.h_eve_direct) ** 2
            + self.noise_eve
            - self.mu * abs(self.eff.h_bob_direct) ** 2
            - self.mu * (1.0 - 2.0**self.r_min) * self.noise_bob
        )


@dataclass(frozen=True)
class MMState:
    """Majorizer coefficients around one expansion point.

    For every unit-modulus ``theta``,

        phi(theta | mu) <= lam_max * M - 2 Re{theta^H beta} + offset

    with equality at ``theta == anchor``.
    """

    anchor: PhaseVector
    mu: float
    lam_max: float
    beta: np.ndarray
    offset: float


def surrogate_coefficients(eff, anchor, mu, noise_bob, noise_eve, r_min):
    """Build the spectral majorizer of ``phi(. | mu)`` around ``anchor``."""
    if mu < 0:
        raise ValueError("dinkelbach parameter must be nonnegative")
    machine = _Surrogate(eff, mu, noise_bob, noise_eve, r_min)
    theta = anchor.theta
    return MMState(
        anchor=anchor,
        mu=mu,
        lam_max=machine.lam,
        beta=machine.beta(theta),
        offset=float(machine.offset(theta).real),
    )


def surrogate_value(state, theta_pv):
    """Evaluate the majorizer at an arbitrary unit-modulus point."""
    theta = theta_pv.theta
    m = theta.size
    return state.lam_max * m - 2.0 * float(np.vdot(theta, state.beta).real) + state.offset


def phi_value(eff, theta_pv, mu, noise_bob, noise_eve, r_min):
    """The penalized objective ``phi(theta | mu)`` itself."""
    return _Surrogate(eff, mu, noise_bob, noise_eve, r_min).phi(theta_pv.theta)


def phase_closed_form(state):
    """Unit-modulus maximizer of ``2 Re{theta^H beta}``: align with the coefficient phases.

    Elements whose coefficient is exactly zero keep the anchor's phase (any
    phase is optimal there; keeping the old one preserves descent and
    determinism).
    """
    beta = state.beta
    aligned = np.mod(np.angle(beta), TWO_PI)
    return PhaseVector(np.where(beta == 0, state.anchor.phases, aligned))


def mm_minimize(eff, theta_init, mu, noise_bob, noise_eve, r_min,
                tol=MM_DEFAULT_TOL, max_iters=MM_MAX_ITERS, history=None):
    """Monotone descent on ``phi(. | mu)`` by repeated phase alignment.

    Returns ``(phases, phi)`` with ``phi(out) <= phi(theta_init)``; stops
    once the per-iteration decrease falls below ``tol`` (absolute) or after
    ``max_iters`` sweeps.  When ``history`` is a list, the objective value
    of every iterate (including the start) is appended to it.
    """
    machine = _Surrogate(eff, mu, noise_bob, noise_eve, r_min)
    phases = theta_init.phases
    theta = np.exp(1j * phases)
    phi_prev = machine.phi(theta)
    best_phases, best_phi = phases, phi_prev
    if history is not None:
        history.append(phi_prev)
    for _ in range(max_iters):
        beta = machine.beta(theta)
        new_phases = np.where(beta == 0, phases, np.mod(np.angle(beta), TWO_PI))
        theta = np.exp(1j * new_phases)
        phi_new = machine.phi(theta)
        phases = new_phases
        if history is not None:
            history.append(phi_new)
        if phi_new < best_phi:
            best_phases, best_phi = new_phases, phi_new
        if phi_prev - phi_new < tol:
            break
        phi_prev = phi_new
    return PhaseVector(best_phases), best_phi


def reflection_objective(eff, theta_pv, noise_bob, noise_eve):
    """The fractional objective: (Bob power + noise) / (Eve power + noise)."""
    num = reflected_power(eff.h_bob, eff.h_bob_direct, theta_pv) + noise_bob
    den = reflected_power(eff.h_eve, eff.h_eve_direct, theta_pv) + noise_eve
    return num / den


def rate_slack(eff, theta_pv, noise_bob, r_min):
    """Bob's received power margin over the minimum-rate power target."""
    return reflected_power(eff.h_bob, eff.h_bob_direct, theta_pv) + noise_bob - 2.0**r_min * noise_bob


def coordinate_ascent(eff, theta_pv, noise_bob, noise_eve, r_min,
                      max_sweeps=CD_MAX_SWEEPS):
    """Elementwise ascent on the true fractional objective.

    Each element's subproblem is a ratio of two sinusoids in its phase,
    whose stationary points are closed form; the best of them is accepted
    only when it improves the ratio without pushing the minimum-rate slack
    negative.  Monotone in the objective and deterministic.
    """
    hb = [complex(x) for x in eff.h_bob]
    he = [complex(x) for x in eff.h_eve]
    m = len(hb)
    target = 2.0**r_min * noise_bob
    phases = [float(p) for p in theta_pv.phases]
    s_bob = complex(np.vdot(np.exp(1j * theta_pv.phases), eff.h_bob)) + eff.h_bob_direct
    s_eve = complex(np.vdot(np.exp(1j * theta_pv.phases), eff.h_eve)) + eff.h_eve_direct

    def ratio(sb, se):
        num = sb.real * sb.real + sb.imag * sb.imag + noise_bob
        den = se.real * se.real + se.imag * se.imag + noise_eve
        return num / den

    current = ratio(s_bob, s_eve)
    for _ in range(max_sweeps):
        before = current
        for i in range(m):
            p_old = phases[i]
            drop = complex(math.cos(p_old), -math.sin(p_old))
            sb_i = s_bob - drop * hb[i]
            se_i = s_eve - drop * he[i]
            zb = hb[i] * sb_i.conjugate()
            ze = he[i] * se_i.conjugate()
            rb = abs(zb)
            re = abs(ze)
            ab = math.atan2(zb.imag, zb.real)
            ae = math.atan2(ze.imag, ze.real)
            a_num = abs(sb_i) ** 2 + abs(hb[i]) ** 2 + noise_bob
            c_den = abs(se_i) ** 2 + abs(he[i]) ** 2 + noise_eve
            # stationary phases of (a + 2 rb cos(p - ab)) / (c + 2 re cos(p - ae))
            p_cf = -2.0 * c_den * rb * math.cos(ab) + 2.0 * a_num * re * math.cos(ae)
            q_cf = 2.0 * c_den * rb * math.sin(ab) - 2.0 * a_num * re * math.sin(ae)
            r_cf = 4.0 * rb * re * math.sin(ab - ae)
            amp = math.hypot(p_cf, q_cf)
            best_p, best_v = p_old, current
            if amp > 0.0:
                base = math.atan2(q_cf, p_cf)
                root = math.asin(max(-1.0, min(1.0, -r_cf / amp)))
                for raw in (root - base, math.pi - root - base):
                    cand = complex(math.cos(raw), -math.sin(raw))  # e^{-j p}
                    sb_new = sb_i + cand * hb[i]
                    se_new = se_i + cand * he[i]
                    value = ratio(sb_new, se_new)
                    slack_ok = abs(sb_new) ** 2 + noise_bob >= target * (1.0 - 1e-12)
                    if value > best_v and slack_ok:
                        best_p, best_v = raw % TWO_PI, value
            if best_p != p_old:
                phases[i] = best_p
                drop = complex(math.cos(best_p), -math.sin(best_p))
                s_bob = sb_i + drop * hb[i]
                s_eve = se_i + drop * he[i]
                current = best_v
        if current - before < 1e-8 * max(1.0, before):
            break
    return PhaseVector(np.array(phases))


class _SlackTracker:
    def __init__(self, eff, noise_bob, r_min):
        self.eff = eff
        self.noise_bob = noise_bob
        self.r_min = r_min
        self.best = None
        self.best_slack = -math.inf

    def see(self, theta_pv):
        s = rate_slack(self.eff, theta_pv, self.noise_bob, self.r_min)
        if s > self.best_slack:
            self.best_slack, self.best = s, theta_pv
        return s


def _dinkelbach(eff, theta_start, noise_bob, noise_eve, r_min, mm_tol, tracker):
    """Standard root search via bisection, warm-chaining the inner sweeps."""
    residual_scale = 0.01 * noise_eve
    state = {"theta": theta_start}

    def gap(mu):
        theta, phi = mm_minimize(eff, state["theta"], mu, noise_bob, noise_eve, r_min, tol=mm_tol)
        state["theta"] = theta
        tracker.see(theta)
        return phi / residual_scale

    slack0 = rate_slack(eff, theta_start, noise_bob, r_min)
    eve0 = reflected_power(eff.h_eve, eff.h_eve_direct, theta_start) + noise_eve
    hi0 = max(1.0, 2.0 * eve0 / slack0) if slack0 > 0 else 1.0
    mu_root = bisect_root(gap, 0.0, hi0, DINKELBACH_TOL)
    gap(mu_root)  # pin the returned phases to the root parameter
    return state["theta"], mu_root


def _dinkelbach_continuation(eff, noise_bob, noise_eve, r_min, mm_tol, tracker):
    """Root search that tracks the minimizer along an increasing ``mu`` path.

    Starts from the eavesdropper-minimizing phases (the ``mu = 0`` sweep)
    and grows ``mu`` geometrically until the penalized minimum crosses
    zero, then bisects with the chained iterate.  Follows near-null
    branches that the jumping bisection loses.  Returns None when no
    crossing exists.
    """
    anti = PhaseVector(
        np.mod(np.angle(eff.h_eve) - np.angle(eff.h_eve_direct) + math.pi, TWO_PI)
    )
    theta, _ = mm_minimize(eff, anti, 0.0, noise_bob, noise_eve, r_min, tol=mm_tol)
    tracker.see(theta)
    mu_lo, mu_hi = 0.0, None
    mu = 1e-3
    for _ in range(64):
        theta, phi = mm_minimize(eff, theta, mu, noise_bob, noise_eve, r_min, tol=mm_tol)
        tracker.see(theta)
        if phi < 0.0:
            mu_hi = mu
            break
        mu_lo = mu
        mu *= 1.6
    if mu_hi is None:
        return None
    mid = mu_hi
    for _ in range(60):
        mid = 0.5 * (mu_lo + mu_hi)
        theta, phi = mm_minimize(eff, theta, mid, noise_bob, noise_eve, r_min, tol=mm_tol)
        tracker.see(theta)
        if phi > 0.0:
            mu_lo = mid
        else:
            mu_hi = mid
        if (mu_hi - mu_lo) <= DINKELBACH_TOL * max(1.0, mid):
            break
    return theta, mid


def _exploration_starts(eff, noise_bob, noise_eve):
    """Deterministic structured starts: Bob alignment plus sampled probes."""
    starts = [
        PhaseVector(np.mod(np.angle(eff.h_bob) - np.angle(eff.h_bob_direct), TWO_PI)),
    ]
    m = eff.h_bob.size
    rng = np.random.Generator(np.random.Philox(key=_SAMPLER_KEY))
    sampled = rng.uniform(0.0, TWO_PI, (SAMPLED_STARTS, m))
    thetas = np.exp(1j * sampled)
    num = np.abs(thetas.conj() @ eff.h_bob + eff.h_bob_direct) ** 2 + noise_bob
    den = np.abs(thetas.conj() @ eff.h_eve + eff.h_eve_direct) ** 2 + noise_eve
    order = np.argsort(num / den)[::-1]
    starts.extend(PhaseVector(sampled[i]) for i in order[:3])
    return starts


def solve_reflection(eff, theta_init, noise_bob, noise_eve, r_min,
                     diagnostics=None, explore=True):
    """Optimize the reflection phases for a fixed precoder and position.

    Runs the warm-started root search, optionally hedged by exploration
    runs from structured starts and a ``mu``-continuation run (see module
    docstring), polishes every root with elementwise ascent, and returns
    the feasible candidate with the best fractional objective.  Safeguards
    guarantee the result is never worse than ``theta_init`` and never
    leaves the minimum-rate slack negative when the input was feasible;
    either fallback is noted in ``diagnostics`` when a dict is supplied.
    """
    # typical objective magnitude, used to scale the inner stopping rule
    phi_scale = noise_eve + float(np.vdot(eff.h_eve, eff.h_eve).real) + abs(eff.h_eve_direct) ** 2
    mm_tol = MM_DEFAULT_TOL * phi_scale

    init_slack = rate_slack(eff, theta_init, noise_bob, r_min)
    init_ratio = reflection_objective(eff, theta_init, noise_bob, noise_eve)
    tracker = _SlackTracker(eff, noise_bob, r_min)
    tracker.see(theta_init)

    # the warm run defines the baseline root; degenerate instances
    # (no bracket anywhere) surface here as NoSignChangeError
    theta_warm, mu_warm = _dinkelbach(eff, theta_init, noise_bob, noise_eve, r_min, mm_tol, tracker)
    runs = [(theta_warm, mu_warm)]

    if explore:
        triaged = []
        for start in _exploration_starts(eff, noise_bob, noise_eve):
            polished = coordinate_ascent(eff, start, noise_bob, noise_eve, r_min)
            triaged.append((reflection_objective(eff, polished, noise_bob, noise_eve), polished))
            tracker.see(polished)
        triaged.sort(key=lambda t: -t[0])
        for _, start in triaged[:TRIAGE_KEEP]:
            try:
                runs.append(_dinkelbach(eff, start, noise_bob, noise_eve, r_min, mm_tol, tracker))
            except NoSignChangeError:
                continue
        cont = _dinkelbach_continuation(eff, noise_bob, noise_eve, r_min, mm_tol, tracker)
        if cont is not None:
            runs.append(cont)

    candidates = []
    for theta_root, mu_root in runs:
        candidates.append((theta_root, mu_root))
        polished = coordinate_ascent(eff, theta_root, noise_bob, noise_eve, r_min)
        tracker.see(polished)
        candidates.append((polished, mu_root))

    best = None
    for theta_cand, mu_cand in candidates:
        slack = rate_slack(eff, theta_cand, noise_bob, r_min)
        ratio = reflection_objective(eff, theta_cand, noise_bob, noise_eve)
        key = (slack >= 0.0, ratio)
        if best is None or key > best[0]:
            best = (key, theta_cand, mu_cand)
    _, cand, mu_root = best

    flags = []
    if rate_slack(eff, cand, noise_bob, r_min) < 0.0:
        cand = tracker.best
        flags.append("slack_fallback")
    if reflection_objective(eff, cand, noise_bob, noise_eve) < init_ratio and init_slack >= 0.0:
        cand = theta_init
        flags.append("ratio_fallback")
    if diagnostics is not None:
        diagnostics["mu_root"] = mu_root
        diagnostics["flags"] = flags
        diagnostics["runs"] = len(runs)
    return cand
