"""Transmitter placement: fractional programming over the horizontal position.

With the precoder and reflection phases fixed, each transmitter-side link
contributes an amplitude that depends on position only through two real
scalars per link,

    u = d^(-c/2) * sqrt(k/(k+1)),    v = d^(-c/2) * sqrt(1/(k+1)),

evaluated at the squared 3-D link distance (the Rician factor ``k`` follows
the elevation angle, so both scalars move with position).  The objective
ratio (1 + snr_bob)/(1 + snr_eve) is assembled from these scalars and
position-independent contraction constants, making every evaluation O(1).

The solver mirrors the reflection module: an outer root search on the
fractional-programming parameter ``rho`` and, for each ``rho``, an inner
descent whose search direction comes from the first-order expansion of
``(u, v)`` in the squared distance around the current point (the expansion
is tight there, so its gradient is the exact gradient).  Candidate steps
are accepted only when the exactly evaluated objective improves and the
minimum-rate constraint stays satisfied; otherwise the step is halved, up
to 20 times per sweep and never below a 0.1 um floor.  A final safeguard
returns the best feasible iterate, so the output never falls below the
starting point's objective.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    BoxViolationError,
    InfeasibleStartError,
    NoSignChangeError,
    OutOfRangeError,
)
from .numerics import bisect_root
from .secrecy import _as_f, _as_theta

DEFAULT_SEARCH_BOX = ((-100.0, 100.0), (-100.0, 100.0))

# Outer root search stops at a 1e-6 relative parameter interval or a
# normalized residual of 1e-8; see solve_deployment.
RHO_TOL = 1e-6
MAX_INNER_ITERS = 40
MAX_HALVINGS = 20
INITIAL_STEP_M = 8.0
MAX_STEP_M = 32.0
MIN_STEP_M = 1e-7

_TARGET_LINK = {"bob": "uav_bob", "eve": "uav_eve", "irs": "uav_irs"}


def _prefactors(sq_dist, hbar, exponent, a1, a2, derivatives=False):
    """Scalars (u, v) at squared 3-D distance ``sq_dist``, optionally with
    their derivatives in the squared distance.

    The derivative of the elevation angle ``arcsin(hbar / sqrt(T))`` in
    ``T`` is ``-hbar / (2 T sqrt(T - hbar^2))``, which feeds the Rician
    factor's chain rule; it is singular directly overhead (``T == hbar^2``),
    so derivatives require strictly positive horizontal offset.
    """
    t = float(sq_dist)
    if t < 1.0:
        raise OutOfRangeError(f"3-D distance {math.sqrt(max(t, 0.0)):g} m below the 1 m reference")
    horizontal_sq = t - hbar * hbar
    if horizontal_sq < 0.0:
        raise OutOfRangeError("squared distance below the squared height difference")
    d = math.sqrt(t)
    k = a1 * math.exp(a2 * math.asin(min(hbar / d, 1.0)))
    alpha = -exponent / 4.0
    u = t**alpha * math.sqrt(k / (k + 1.0))
    v = t**alpha * math.sqrt(1.0 / (k + 1.0))
    if not derivatives:
        return u, v, None, None
    if horizontal_sq <= 0.0:
        raise OutOfRangeError("derivatives undefined directly overhead the target")
    dk = -k * a2 * hbar / (2.0 * t * math.sqrt(horizontal_sq))
    du = u * (alpha / t + dk / (2.0 * k * (k + 1.0)))
    dv = v * (alpha / t - dk / (2.0 * (k + 1.0)))
    return u, v, du, dv


def _link_params(target, layout, radio):
    link = _TARGET_LINK[target]
    if target == "irs":
        target_xy = layout.irs_xy
        hbar = layout.uav_height - layout.irs_height
    else:
        target_xy = layout.bob_xy if target == "bob" else layout.eve_xy
        hbar = layout.uav_height
    return target_xy, hbar, radio.pathloss_exponents[link], link


def channel_factor(a, target, layout, radio, draw):
    """Exact position-dependent factor of one transmitter-side link.

    Equals the synthesized link gain divided by ``sqrt(beta0)``; an array
    for the direct links, a matrix for the surface link.
    """
    a = np.asarray(a, dtype=float).reshape(2)
    target_xy, hbar, exponent, link = _link_params(target, layout, radio)
    sq = float(np.sum((a - target_xy) ** 2)) + hbar * hbar
    u, v, _, _ = _prefactors(sq, hbar, exponent, radio.rician_a1, radio.rician_a2)
    return u * draw.los(link) + v * draw.nlos(link)


@dataclass(frozen=True)
class TaylorExpansion:
    """First-order model of a link factor in the squared-distance offset.

    ``x`` measures ``|a - target|^2 - |anchor - target|^2``; the model
    ``tau_hat + lambda_hat * x`` matches the exact factor and its first
    derivative at the anchor.  ``u0, v0, du, dv`` are the scalar prefactor
    values and derivatives that generate the vector coefficients.
    """

    anchor_xy: np.ndarray
    target_xy: np.ndarray
    height_diff: float
    exponent: float
    alpha: float
    base_sq_dist: float
    u0: float
    v0: float
    du: float
    dv: float
    tau_hat: np.ndarray
    lambda_hat: np.ndarray

    def factor_bound(self, a):
        """Evaluate the first-order model at position ``a``."""
        a = np.asarray(a, dtype=float).reshape(2)
        x = float(np.sum((a - self.target_xy) ** 2)) - float(
            np.sum((self.anchor_xy - self.target_xy) ** 2)
        )
        return self.tau_hat + self.lambda_hat * x


def taylor_expand(anchor, target, layout, radio, draw):
    """Expand one link factor around ``anchor``; exact there, first-order elsewhere."""
    anchor = np.asarray(anchor, dtype=float).reshape(2)
    target_xy, hbar, exponent, link = _link_params(target, layout, radio)
    sq = float(np.sum((anchor - target_xy) ** 2)) + hbar * hbar
    u, v, du, dv = _prefactors(
        sq, hbar, exponent, radio.rician_a1, radio.rician_a2, derivatives=True
    )
    los = draw.los(link)
    nlos = draw.nlos(link)
    return TaylorExpansion(
        anchor_xy=anchor,
        target_xy=np.array(target_xy, dtype=float),
        height_diff=hbar,
        exponent=exponent,
        alpha=-exponent / 4.0,
        base_sq_dist=sq,
        u0=u,
        v0=v,
        du=du,
        dv=dv,
        tau_hat=u * los + v * nlos,
        lambda_hat=du * los + dv * nlos,
    )


@dataclass(frozen=True)
class DeployConstants:
    """Position-independent contractions of the placement objective.

    ``omega_*`` is the noise-normalized scaled precoder; the cascade and
    direct scalars contract the frozen small-scale terms with the current
    phases and precoder so that each receiver's normalized amplitude is

        u_irs * cascade_los + v_irs * cascade_nlos
        + u_direct * direct_los + v_direct * direct_nlos.

    Recompute whenever the precoder or the phases change.
    """

    omega_bob: np.ndarray
    omega_eve: np.ndarray
    cascade_los_bob: complex
    cascade_nlos_bob: complex
    cascade_los_eve: complex
    cascade_nlos_eve: complex
    direct_los_bob: complex
    direct_nlos_bob: complex
    direct_los_eve: complex
    direct_nlos_eve: complex


def deploy_constants(channels, draw, theta, f, radio):
    f_arr = _as_f(f)
    th = _as_theta(theta)
    root_beta0 = math.sqrt(radio.beta0)
    los_f = draw.los_uav_irs @ f_arr
    nlos_f = draw.nlos_uav_irs @ f_arr
    out = {}
    for receiver, irs_leg, noise in (
        ("bob", channels.irs_bob, radio.noise_bob),
        ("eve", channels.irs_eve, radio.noise_eve),
    ):
        scale = root_beta0 / math.sqrt(noise)
        row = irs_leg.conj() * th
        out[f"omega_{receiver}"] = scale * f_arr
        out[f"cascade_los_{receiver}"] = complex(scale * (row @ los_f))
        out[f"cascade_nlos_{receiver}"] = complex(scale * (row @ nlos_f))
        out[f"direct_los_{receiver}"] = complex(scale * np.vdot(draw.los(f"uav_{receiver}"), f_arr))
        out[f"direct_nlos_{receiver}"] = complex(
            scale * np.vdot(draw.nlos(f"uav_{receiver}"), f_arr)
        )
    return DeployConstants(**out)


class _Placement:
    """Scalarized objective, constraint and gradient for one constants set.

    Works in plain Python floats; a position evaluation costs a handful of
    scalar operations, which keeps the many candidate probes of the descent
    loop cheap.
    """

    def __init__(self, constants, layout, radio, r_min):
        c = constants
        self.cas_b = (c.cascade_los_bob, c.cascade_nlos_bob)
        self.cas_e = (c.cascade_los_eve, c.cascade_nlos_eve)
        self.dir_b = (c.direct_los_bob, c.direct_nlos_bob)
        self.dir_e = (c.direct_los_eve, c.direct_nlos_eve)
        self.r_min = r_min
        self.rate_target = 2.0**r_min - 1.0
        self.rate_offset = 2.0**r_min
        self.irs = (float(layout.irs_xy[0]), float(layout.irs_xy[1]))
        self.bob = (float(layout.bob_xy[0]), float(layout.bob_xy[1]))
        self.eve = (float(layout.eve_xy[0]), float(layout.eve_xy[1]))
        self.hbar_irs = layout.uav_height - layout.irs_height
        self.hbar_user = layout.uav_height
        self.exp_irs = radio.pathloss_exponents["uav_irs"]
        self.exp_bob = radio.pathloss_exponents["uav_bob"]
        self.exp_eve = radio.pathloss_exponents["uav_eve"]
        self.a1 = radio.rician_a1
        self.a2 = radio.rician_a2

    def _uv(self, ax, ay, target, hbar, exponent, derivatives=False):
        dx = ax - target[0]
        dy = ay - target[1]
        return _prefactors(
            dx * dx + dy * dy + hbar * hbar, hbar, exponent, self.a1, self.a2, derivatives
        )

    def snrs(self, ax, ay):
        u_r, v_r, _, _ = self._uv(ax, ay, self.irs, self.hbar_irs, self.exp_irs)
        u_b, v_b, _, _ = self._uv(ax, ay, self.bob, self.hbar_user, self.exp_bob)
        u_e, v_e, _, _ = self._uv(ax, ay, self.eve, self.hbar_user, self.exp_eve)
        amp_b = u_r * self.cas_b[0] + v_r * self.cas_b[1] + u_b * self.dir_b[0] + v_b * self.dir_b[1]
        amp_e = u_r * self.cas_e[0] + v_r * self.cas_e[1] + u_e * self.dir_e[0] + v_e * self.dir_e[1]
        return (
            amp_b.real * amp_b.real + amp_b.imag * amp_b.imag,
            amp_e.real * amp_e.real + amp_e.imag * amp_e.imag,
        )

    def ratio_and_ok(self, a):
        snr_b, snr_e = self.snrs(float(a[0]), float(a[1]))
        ok = snr_b >= self.rate_target * (1.0 - 1e-12)
        return (1.0 + snr_b) / (1.0 + snr_e), ok

    def penalized(self, snr_b, snr_e, rho):
        return 1.0 + snr_e - rho * (1.0 + snr_b - self.rate_offset)

    def gradient(self, ax, ay, rho):
        """Gradient of the penalized objective plus the SNR pair at (ax, ay)."""
        u_r, v_r, du_r, dv_r = self._uv(ax, ay, self.irs, self.hbar_irs, self.exp_irs, True)
        u_b, v_b, du_b, dv_b = self._uv(ax, ay, self.bob, self.hbar_user, self.exp_bob, True)
        u_e, v_e, du_e, dv_e = self._uv(ax, ay, self.eve, self.hbar_user, self.exp_eve, True)
        amp_b = u_r * self.cas_b[0] + v_r * self.cas_b[1] + u_b * self.dir_b[0] + v_b * self.dir_b[1]
        amp_e = u_r * self.cas_e[0] + v_r * self.cas_e[1] + u_e * self.dir_e[0] + v_e * self.dir_e[1]
        d_b_irs = du_r * self.cas_b[0] + dv_r * self.cas_b[1]
        d_b_usr = du_b * self.dir_b[0] + dv_b * self.dir_b[1]
        d_e_irs = du_r * self.cas_e[0] + dv_r * self.cas_e[1]
        d_e_usr = du_e * self.dir_e[0] + dv_e * self.dir_e[1]
        w_irs = (amp_e.conjugate() * d_e_irs).real - rho * (amp_b.conjugate() * d_b_irs).real
        w_eve = (amp_e.conjugate() * d_e_usr).real
        w_bob = -rho * (amp_b.conjugate() * d_b_usr).real
        gx = 4.0 * (
            w_irs * (ax - self.irs[0]) + w_eve * (ax - self.eve[0]) + w_bob * (ax - self.bob[0])
        )
        gy = 4.0 * (
            w_irs * (ay - self.irs[1]) + w_eve * (ay - self.eve[1]) + w_bob * (ay - self.bob[1])
        )
        snr_b = amp_b.real * amp_b.real + amp_b.imag * amp_b.imag
        snr_e = amp_e.real * amp_e.real + amp_e.imag * amp_e.imag
        return gx, gy, snr_b, snr_e


def deploy_objective(a, constants, layout, radio, r_min):
    """(objective ratio, minimum-rate flag) at horizontal position ``a``.

    The ratio is ``(1 + snr_bob) / (1 + snr_eve)`` rebuilt from the
    contraction constants; its base-2 log matches the secrecy rate of the
    re-synthesized channels at the same position.
    """
    a = np.asarray(a, dtype=float).reshape(2)
    return _Placement(constants, layout, radio, r_min).ratio_and_ok(a)


def solve_deployment(a_init, constants, layout, radio, r_min, search_box=DEFAULT_SEARCH_BOX):
    """Improve the transmitter position inside an axis-aligned search box.

    Root-finds the fractional-programming parameter by bisection (stopping
    at a 1e-6 relative parameter interval or a residual of 1e-8 relative to
    the starting denominator scale); each evaluation runs the safeguarded
    descent described in the module docstring, warm-started from the
    previous evaluation's point and step size.  Returns a position whose
    exactly evaluated objective is never below the starting point's and at
    which the minimum-rate constraint holds.  If no root bracket exists
    (no improvement direction), the start is returned.
    """
    a_init = np.asarray(a_init, dtype=float).reshape(2)
    box = np.asarray(search_box, dtype=float).reshape(2, 2)
    if np.any(a_init < box[:, 0]) or np.any(a_init > box[:, 1]):
        raise BoxViolationError(f"start {a_init.tolist()} outside box {box.tolist()}")
    place = _Placement(constants, layout, radio, r_min)
    x0, x1, y0, y1 = box[0, 0], box[0, 1], box[1, 0], box[1, 1]
    ratio_init, ok = place.ratio_and_ok(a_init)
    if not ok:
        raise InfeasibleStartError("minimum-rate constraint violated at the starting position")

    rate_target = place.rate_target * (1.0 - 1e-12)

    def inner(rho, start, step):
        ax, ay = start
        snr_b, snr_e = place.snrs(ax, ay)
        psi = place.penalized(snr_b, snr_e, rho)
        for _ in range(MAX_INNER_ITERS):
            try:
                gx, gy, _, _ = place.gradient(ax, ay, rho)
            except OutOfRangeError:
                # exactly overhead a node: no usable direction, stay put
                break
            norm = math.hypot(gx, gy)
            if norm <= 1e-14 * (1.0 + abs(psi)):
                break
            dx, dy = -gx / norm, -gy / norm
            accepted = False
            halvings = 0
            while halvings <= MAX_HALVINGS and step >= MIN_STEP_M:
                cx = min(max(ax + step * dx, x0), x1)
                cy = min(max(ay + step * dy, y0), y1)
                try:
                    cb, ce = place.snrs(cx, cy)
                    psi_c = place.penalized(cb, ce, rho)
                    feasible = cb >= rate_target
                except OutOfRangeError:
                    feasible = False
                    psi_c = math.inf
                if feasible and psi_c < psi:
                    improvement = psi - psi_c
                    ax, ay, psi = cx, cy, psi_c
                    step = min(2.0 * step, MAX_STEP_M)
                    accepted = improvement > 1e-10 * (1.0 + abs(psi))
                    break
                step *= 0.5
                halvings += 1
            if not accepted:
                break
        return (ax, ay), psi, max(step, MIN_STEP_M)

    snr_b0, snr_e0 = place.snrs(float(a_init[0]), float(a_init[1]))
    eve_init = 1.0 + snr_e0
    slack_init = 1.0 + snr_b0 - place.rate_offset
    residual_scale = 0.01 * max(1.0, eve_init)
    state = {
        "a": (float(a_init[0]), float(a_init[1])),
        "step": INITIAL_STEP_M,
        "best_ratio": ratio_init,
        "best_a": (float(a_init[0]), float(a_init[1])),
    }

    def gap(rho):
        a, psi, step = inner(rho, state["a"], state["step"])
        state["a"], state["step"] = a, step
        snr_b, snr_e = place.snrs(*a)
        if snr_b >= rate_target:
            r = (1.0 + snr_b) / (1.0 + snr_e)
            if r > state["best_ratio"]:
                state["best_ratio"], state["best_a"] = r, a
        return psi / residual_scale

    hi0 = max(1.0, 2.0 * eve_init / slack_init) if slack_init > 0 else 1.0
    hi0 = min(hi0, 1e9)
    try:
        rho_root = bisect_root(gap, 0.0, hi0, RHO_TOL)
        gap(rho_root)
    except NoSignChangeError:
        return a_init
    cand = np.array(state["a"])
    ratio_cand, ok_cand = place.ratio_and_ok(cand)
    if ok_cand and ratio_cand >= ratio_init:
        return cand
    return np.array(state["best_a"])
