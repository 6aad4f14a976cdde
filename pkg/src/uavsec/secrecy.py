"""Received SNRs, the achievable secrecy rate, and derived solver inputs."""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, OutOfRangeError

POWER_SLACK = 1e-12  # tolerance on the transmit power budget check

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Precoder:
    """Transmit vector with its power budget; ``norm(f)^2 <= p_max`` within slack."""

    f: np.ndarray
    p_max: float

    def __post_init__(self):
        object.__setattr__(self, "f", np.asarray(self.f, dtype=complex).reshape(-1))
        power = float(np.vdot(self.f, self.f).real)
        if power > self.p_max + POWER_SLACK * max(1.0, self.p_max):
            raise OutOfRangeError(f"precoder power {power:g} exceeds budget {self.p_max:g}")

    @property
    def power(self):
        return float(np.vdot(self.f, self.f).real)


@dataclass(frozen=True)
class PhaseVector:
    """Per-element reflection phases in [0, 2*pi); coefficients are exp(1j*phase).

    Phases are the stored representation, so the unit-modulus constraint
    holds exactly; the complex coefficient vector is materialized on demand.
    """

    phases: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.phases, dtype=float).reshape(-1)
        object.__setattr__(self, "phases", np.mod(p, TWO_PI))

    @classmethod
    def from_theta(cls, theta):
        return cls(np.angle(np.asarray(theta, dtype=complex)))

    @property
    def theta(self):
        return np.exp(1j * self.phases)

    def __len__(self):
        return self.phases.size


def _as_f(f):
    return f.f if isinstance(f, Precoder) else np.asarray(f, dtype=complex).reshape(-1)


def _as_theta(theta):
    return theta.theta if isinstance(theta, PhaseVector) else np.asarray(theta, dtype=complex).reshape(-1)


def _check_dims(channels, theta, f):
    m, n = channels.uav_irs.shape
    if f.size != n:
        raise DimensionMismatchError(f"precoder length {f.size} != {n} antennas")
    if theta.size != m:
        raise DimensionMismatchError(f"phase vector length {theta.size} != {m} elements")


def combined_channel(channels, theta, receiver):
    """Combined surface-plus-direct channel toward one receiver.

    Returned as the column vector ``v`` with received amplitude
    ``vdot(v, f)``; the rank-one matrix ``v v^H`` is the quadratic form of
    the receiver's signal power.
    """
    theta = _as_theta(theta)
    if theta.size != channels.uav_irs.shape[0]:
        raise DimensionMismatchError(
            f"phase vector length {theta.size} != {channels.uav_irs.shape[0]} elements"
        )
    irs_leg = channels.irs_bob if receiver == "bob" else channels.irs_eve
    direct = channels.direct_bob if receiver == "bob" else channels.direct_eve
    cascade_row = (irs_leg.conj() * theta) @ channels.uav_irs
    return cascade_row.conj() + direct


def received_amplitude(channels, theta, f, receiver):
    v = combined_channel(channels, theta, receiver)
    return complex(np.vdot(v, _as_f(f)))


def sinr(channels, theta, f, receiver, noise_power):
    """Received SNR at ``receiver`` ("bob" or "eve")."""
    f = _as_f(f)
    _check_dims(channels, _as_theta(theta), f)
    amp = received_amplitude(channels, theta, f, receiver)
    return abs(amp) ** 2 / noise_power


@dataclass(frozen=True)
class SecrecyPoint:
    """Both SNRs and the clamped secrecy rate at one operating point."""

    gamma_bob: float
    gamma_eve: float
    rate: float


def secrecy_rate(channels, theta, f, noise_bob, noise_eve):
    """Achievable secrecy rate ``max(0, log2(1+g_b) - log2(1+g_e))`` in bits/s/Hz."""
    g_b = sinr(channels, theta, f, "bob", noise_bob)
    g_e = sinr(channels, theta, f, "eve", noise_eve)
    rate = max(0.0, math.log2(1.0 + g_b) - math.log2(1.0 + g_e))
    return SecrecyPoint(gamma_bob=g_b, gamma_eve=g_e, rate=rate)


def q_matrices(channels, theta):
    """Rank-one signal-power quadratic forms (Q_bob, Q_eve).

    For every precoder ``f``, ``f^H Q f`` equals the received signal power
    at the corresponding user, i.e. noise_power * sinr.
    """
    v_b = combined_channel(channels, theta, "bob")
    v_e = combined_channel(channels, theta, "eve")
    return np.outer(v_b, v_b.conj()), np.outer(v_e, v_e.conj())


@dataclass(frozen=True)
class EffectiveChannels:
    """Per-element reflection view of both receivers for a fixed precoder.

    Stored conjugated so that, with reflection coefficients
    ``theta = exp(1j*phases)``,

        theta^H @ h + h_direct == conj(received amplitude)

    which leaves every magnitude (hence every SNR) identical to the direct
    evaluation while giving the reflection solver a plain inner-product
    objective.  Recompute whenever the precoder or the channels change.
    """

    h_bob: np.ndarray
    h_bob_direct: complex
    h_eve: np.ndarray
    h_eve_direct: complex


def effective_channels(channels, f):
    f = _as_f(f)
    if f.size != channels.uav_irs.shape[1]:
        raise DimensionMismatchError("precoder length mismatch")
    through = channels.uav_irs @ f
    return EffectiveChannels(
        h_bob=channels.irs_bob * through.conj(),
        h_bob_direct=complex(np.vdot(channels.direct_bob, f)).conjugate(),
        h_eve=channels.irs_eve * through.conj(),
        h_eve_direct=complex(np.vdot(channels.direct_eve, f)).conjugate(),
    )


def reflected_power(h, h_direct, theta):
    """``|theta^H h + h_direct|^2`` for one receiver of an EffectiveChannels pair."""
    theta = _as_theta(theta)
    return abs(complex(np.vdot(theta, h)) + h_direct) ** 2
