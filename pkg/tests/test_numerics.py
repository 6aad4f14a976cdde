"""Eigen tools, bisection and gradient-checker contracts."""

import math

import numpy as np
import pytest

from uavsec.exceptions import NoSignChangeError, NonFiniteError, SingularPencilError
from uavsec.numerics import (
    bisect_root,
    check_gradient,
    dominant_generalized_eigenvector,
    max_eigenvalue,
)


def rayleigh(a, b, v):
    return float(np.real(np.vdot(v, a @ v)) / np.real(np.vdot(v, b @ v)))


def random_psd_pencil(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    a = g @ g.conj().T + 0.1 * np.eye(dim)
    b = h @ h.conj().T + 0.5 * np.eye(dim)
    return a, b


def random_unit_vectors(rng, count, dim):
    v = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class TestDominantGeneralizedEigenvector:
    def test_diagonal_pencil(self):
        e = dominant_generalized_eigenvector(np.diag([2.0, 1.0]), np.eye(2))
        assert np.allclose(e, [1.0, 0.0], atol=1e-12)

    def test_identical_members_any_unit_vector_with_phase_convention(self):
        rng = np.random.default_rng(3)
        a, _ = random_psd_pencil(rng, 3)
        e = dominant_generalized_eigenvector(a, a)
        assert math.isclose(np.linalg.norm(e), 1.0, rel_tol=1e-12)
        assert math.isclose(rayleigh(a, a, e), 1.0, rel_tol=1e-12)
        first = e[np.argmax(np.abs(e) > 1e-12)]
        assert first.real > 0 and abs(first.imag) < 1e-12

    def test_seeded_2x2_beats_sphere_sampling(self):
        rng = np.random.default_rng(11)
        a, b = random_psd_pencil(rng, 2)
        e = dominant_generalized_eigenvector(a, b)
        probes = random_unit_vectors(rng, 10_000, 2)
        num = np.real(np.einsum("ij,jk,ik->i", probes.conj(), a, probes))
        den = np.real(np.einsum("ij,jk,ik->i", probes.conj(), b, probes))
        best = float(np.max(num / den))
        assert rayleigh(a, b, e) >= best * (1.0 - 1e-6)

    def test_rayleigh_optimality_over_seeded_pencils(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            dim = int(rng.integers(1, 5))
            a, b = random_psd_pencil(rng, dim)
            e = dominant_generalized_eigenvector(a, b)
            quotient = rayleigh(a, b, e)
            probes = random_unit_vectors(rng, 10_000, dim)
            num = np.real(np.einsum("ij,jk,ik->i", probes.conj(), a, probes))
            den = np.real(np.einsum("ij,jk,ik->i", probes.conj(), b, probes))
            assert quotient >= float(np.max(num / den)) * (1.0 - 1e-6)

    def test_singular_pencil_rejected(self):
        with pytest.raises(SingularPencilError):
            dominant_generalized_eigenvector(np.eye(2), np.zeros((2, 2)))

    def test_non_finite_rejected(self):
        bad = np.array([[np.nan, 0.0], [0.0, 1.0]])
        with pytest.raises(NonFiniteError):
            dominant_generalized_eigenvector(bad, np.eye(2))


class TestMaxEigenvalue:
    def test_diagonal(self):
        assert max_eigenvalue(np.diag([3.0, -1.0])) == pytest.approx(3.0, rel=1e-10)

    def test_zero(self):
        assert max_eigenvalue(np.zeros((3, 3))) == 0.0

    def test_rank_one_equals_norm_squared(self):
        rng = np.random.default_rng(5)
        h = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        expected = float(np.vdot(h, h).real)
        assert max_eigenvalue(np.outer(h, h.conj())) == pytest.approx(expected, rel=1e-10)

    def test_upper_bounds_all_quadratic_forms(self):
        rng = np.random.default_rng(7)
        g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        m = g + g.conj().T
        lam = max_eigenvalue(m)
        probes = random_unit_vectors(rng, 1000, 5)
        forms = np.real(np.einsum("ij,jk,ik->i", probes.conj(), m, probes))
        assert lam >= float(np.max(forms)) - 1e-9

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteError):
            max_eigenvalue(np.array([[np.inf]]))


class TestBisectRoot:
    def test_linear(self):
        assert bisect_root(lambda x: x - 2.0, 0.0, 10.0, 1e-8) == pytest.approx(2.0, abs=1e-7)

    def test_decreasing_cubic(self):
        assert bisect_root(lambda x: 1.0 - x**3, 0.0, 10.0, 1e-10) == pytest.approx(1.0, abs=1e-8)

    def test_bracket_expansion(self):
        # root at 500 lies beyond the initial bracket
        root = bisect_root(lambda x: x - 500.0, 0.0, 1.0, 1e-9)
        assert root == pytest.approx(500.0, rel=1e-6)

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            bisect_root(lambda x: 1.0 + x * x, 0.0, 1.0, 1e-9)

    def test_deterministic_bit_identical(self):
        f = lambda x: math.tanh(x - 1.2345) - 0.1
        r1 = bisect_root(f, 0.0, 7.0, 1e-12)
        r2 = bisect_root(f, 0.0, 7.0, 1e-12)
        assert r1 == r2


class TestCheckGradient:
    def test_quadratic(self):
        err = check_gradient(lambda p: p[0] ** 2 + p[1] ** 2, (1.0, 2.0), (2.0, 4.0))
        assert err < 1e-6

    def test_constant(self):
        assert check_gradient(lambda p: 3.0, (0.3, -0.7), (0.0, 0.0)) == 0.0

    def test_non_finite(self):
        with pytest.raises(NonFiniteError):
            check_gradient(lambda p: float("nan"), (0.0, 0.0), (0.0, 0.0))
