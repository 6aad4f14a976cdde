"""Geometry-driven Rician channels with frozen small-scale fading.

Five links connect the aerial transmitter (UAV), the reflecting surface
(IRS), the legitimate user (Bob) and the eavesdropper (Eve):

    uav_bob, uav_eve   direct links, N-antenna transmitter to single antenna
    uav_irs            transmitter to the M-element surface (M x N)
    irs_bob, irs_eve   surface to the single-antenna users

Each link gain is ``sqrt(beta0 * d^-c) * (sqrt(k/(k+1)) * los + sqrt(1/(k+1)) * nlos)``
where the Rician factor ``k`` grows exponentially with the link's elevation
angle.  Small-scale terms (``los``, ``nlos``) are drawn once per trial and
held fixed while the UAV moves; only distances, path gains and Rician
factors respond to position changes.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import DegenerateGeometryError, OutOfRangeError

LINKS = ("uav_bob", "uav_eve", "uav_irs", "irs_bob", "irs_eve")


def rician_factor(elevation, a1, a2):
    """Elevation-dependent Rician factor ``a1 * exp(a2 * elevation)``.

    ``elevation`` is in radians and must lie in [0, pi/2].
    """
    if not 0.0 <= elevation <= math.pi / 2:
        raise OutOfRangeError(f"elevation {elevation!r} outside [0, pi/2]")
    return a1 * math.exp(a2 * elevation)


def rician_slope(k_min, k_max):
    """Exponential slope taking the Rician factor from k_min at elevation 0 to k_max at pi/2."""
    return (2.0 / math.pi) * math.log(k_max / k_min)


def elevation_angle(horizontal_dist, height_diff):
    """Elevation angle ``arcsin(height_diff / d)`` with ``d`` the 3-D distance."""
    if height_diff < 0:
        raise OutOfRangeError("height difference must be nonnegative")
    d = math.hypot(horizontal_dist, height_diff)
    if d == 0.0:
        raise DegenerateGeometryError("coincident nodes: elevation undefined")
    return math.asin(height_diff / d)


def path_gain(distance, exponent, beta0):
    """Linear power gain ``beta0 * distance^-exponent``; valid for distance >= 1 m."""
    if distance < 1.0:
        raise OutOfRangeError(f"distance {distance:g} m below the 1 m reference")
    return beta0 * distance ** (-exponent)


@dataclass(frozen=True)
class NodeLayout:
    """Horizontal node positions (meters) plus transmitter and surface heights.

    Bob and Eve are at ground level; the UAV flies above the surface
    (``uav_height > irs_height > 0``).
    """

    uav_xy: np.ndarray
    bob_xy: np.ndarray
    eve_xy: np.ndarray
    irs_xy: np.ndarray
    uav_height: float
    irs_height: float

    def __post_init__(self):
        for name in ("uav_xy", "bob_xy", "eve_xy", "irs_xy"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(2))
        if not self.uav_height > self.irs_height > 0:
            raise OutOfRangeError(
                f"heights must satisfy uav > irs > 0, got {self.uav_height}, {self.irs_height}"
            )

    def with_uav_xy(self, xy):
        return replace(self, uav_xy=np.asarray(xy, dtype=float).reshape(2))

    def link_geometry(self, link):
        """(horizontal distance, height difference) for one of the five links."""
        if link == "uav_bob":
            return float(np.linalg.norm(self.uav_xy - self.bob_xy)), self.uav_height
        if link == "uav_eve":
            return float(np.linalg.norm(self.uav_xy - self.eve_xy)), self.uav_height
        if link == "uav_irs":
            return (
                float(np.linalg.norm(self.uav_xy - self.irs_xy)),
                self.uav_height - self.irs_height,
            )
        if link == "irs_bob":
            return float(np.linalg.norm(self.irs_xy - self.bob_xy)), self.irs_height
        if link == "irs_eve":
            return float(np.linalg.norm(self.irs_xy - self.eve_xy)), self.irs_height
        raise KeyError(link)


@dataclass(frozen=True)
class RadioParams:
    """Link budget constants, all linear scale (convert from dB exactly once, on ingestion)."""

    beta0: float
    pathloss_exponents: dict
    rician_a1: float
    rician_a2: float
    noise_bob: float
    noise_eve: float
    n_antennas: int
    n_elements: int

    def __post_init__(self):
        if self.beta0 <= 0 or self.rician_a1 <= 0:
            raise OutOfRangeError("beta0 and the Rician floor must be positive")
        if self.noise_bob <= 0 or self.noise_eve <= 0:
            raise OutOfRangeError("noise powers must be positive")
        if self.n_antennas < 1 or self.n_elements < 1:
            raise OutOfRangeError("antenna and element counts must be >= 1")
        missing = [k for k in LINKS if k not in self.pathloss_exponents]
        if missing:
            raise OutOfRangeError(f"missing path loss exponents for {missing}")
        for k, c in self.pathloss_exponents.items():
            if c < 2.0:
                raise OutOfRangeError(f"path loss exponent {k}={c} below free-space value 2")


def _steering(n, direction_cosine):
    """Half-wavelength uniform linear array response."""
    return np.exp(1j * np.pi * np.arange(n) * direction_cosine)


def _unit_y(src, dst):
    """y component of the unit vector from 3-D point src to dst.

    Both arrays are oriented along the y axis, the axis separating the two
    ground users in the standard geometry; an x-oriented array could not
    resolve them at all.
    """
    delta = np.asarray(dst, dtype=float) - np.asarray(src, dtype=float)
    norm = np.linalg.norm(delta)
    if norm == 0.0:
        raise DegenerateGeometryError("coincident nodes: steering undefined")
    return delta[1] / norm


@dataclass(frozen=True)
class SmallScaleDraw:
    """Frozen small-scale fading for one trial.

    Line-of-sight terms are deterministic array steering vectors computed at
    the trial's initial geometry; they do not re-point as the UAV moves.
    Scattered terms are unit-variance circular complex Gaussians from a
    counter-based Philox generator, so a given seed reproduces the draw
    bit-for-bit on any machine.
    """

    los_direct_bob: np.ndarray
    los_direct_eve: np.ndarray
    nlos_direct_bob: np.ndarray
    nlos_direct_eve: np.ndarray
    los_uav_irs: np.ndarray
    nlos_uav_irs: np.ndarray
    los_irs_bob: np.ndarray
    los_irs_eve: np.ndarray
    nlos_irs_bob: np.ndarray
    nlos_irs_eve: np.ndarray
    seed: int

    def los(self, link):
        return {
            "uav_bob": self.los_direct_bob,
            "uav_eve": self.los_direct_eve,
            "uav_irs": self.los_uav_irs,
            "irs_bob": self.los_irs_bob,
            "irs_eve": self.los_irs_eve,
        }[link]

    def nlos(self, link):
        return {
            "uav_bob": self.nlos_direct_bob,
            "uav_eve": self.nlos_direct_eve,
            "uav_irs": self.nlos_uav_irs,
            "irs_bob": self.nlos_irs_bob,
            "irs_eve": self.nlos_irs_eve,
        }[link]

    @classmethod
    def generate(cls, layout, radio, seed):
        """Draw all small-scale terms for a trial.

        The scattered components are consumed from the generator in a fixed
        order (direct bob, direct eve, uav-irs, irs-bob, irs-eve), which is
        part of the reproducibility contract.
        """
        n = radio.n_antennas
        m = radio.n_elements
        rng = np.random.Generator(np.random.Philox(key=seed))

        def cn(*shape):
            return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)

        uav = np.array([*layout.uav_xy, layout.uav_height])
        irs = np.array([*layout.irs_xy, layout.irs_height])
        bob = np.array([*layout.bob_xy, 0.0])
        eve = np.array([*layout.eve_xy, 0.0])

        tx_to_irs = _steering(n, _unit_y(uav, irs))
        irs_to_tx = _steering(m, _unit_y(irs, uav))
        return cls(
            los_direct_bob=_steering(n, _unit_y(uav, bob)),
            los_direct_eve=_steering(n, _unit_y(uav, eve)),
            nlos_direct_bob=cn(n),
            nlos_direct_eve=cn(n),
            los_uav_irs=irs_to_tx[:, None] * tx_to_irs[None, :].conj(),
            nlos_uav_irs=cn(m, n),
            los_irs_bob=_steering(m, _unit_y(irs, bob)),
            los_irs_eve=_steering(m, _unit_y(irs, eve)),
            nlos_irs_bob=cn(m),
            nlos_irs_eve=cn(m),
            seed=seed,
        )


@dataclass(frozen=True)
class ChannelSet:
    """The five link gains at one UAV position.

    Vectors are stored so that a received amplitude is ``vdot(h, f)`` (i.e.
    ``h^H f``) for the direct links, and the surface path contributes
    ``(h_irs.conj() * theta) @ H_uav_irs @ f`` with ``theta`` the reflection
    coefficients.
    """

    direct_bob: np.ndarray
    direct_eve: np.ndarray
    uav_irs: np.ndarray
    irs_bob: np.ndarray
    irs_eve: np.ndarray
    layout: NodeLayout

    def without_irs(self):
        """Copy with the surface legs zeroed (shapes preserved)."""
        return replace(
            self,
            irs_bob=np.zeros_like(self.irs_bob),
            irs_eve=np.zeros_like(self.irs_eve),
        )


def link_gain(layout, radio, draw, link):
    """Gain array for one link at the layout's current geometry."""
    horizontal, hbar = layout.link_geometry(link)
    d = math.hypot(horizontal, hbar)
    k = rician_factor(elevation_angle(horizontal, hbar), radio.rician_a1, radio.rician_a2)
    pg = path_gain(d, radio.pathloss_exponents[link], radio.beta0)
    w_los = math.sqrt(k / (k + 1.0))
    w_nlos = math.sqrt(1.0 / (k + 1.0))
    return math.sqrt(pg) * (w_los * draw.los(link) + w_nlos * draw.nlos(link))


def synthesize(layout, radio, draw):
    """Assemble all five link gains into a ChannelSet.

    Pure function: identical (layout, radio, draw) give a bit-identical
    result, and the output arrays are never mutated afterwards.
    """
    return ChannelSet(
        direct_bob=link_gain(layout, radio, draw, "uav_bob"),
        direct_eve=link_gain(layout, radio, draw, "uav_eve"),
        uav_irs=link_gain(layout, radio, draw, "uav_irs"),
        irs_bob=link_gain(layout, radio, draw, "irs_bob"),
        irs_eve=link_gain(layout, radio, draw, "irs_eve"),
        layout=layout,
    )
