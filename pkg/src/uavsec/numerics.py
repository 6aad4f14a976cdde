"""Dense complex-Hermitian eigen tools, scalar root bracketing, and a gradient checker.

Everything here is a pure function of its inputs and safe to call
concurrently.  Problem sizes are small (a few hundred at most), so all
solvers are dense.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import NoSignChangeError, NonFiniteError, SingularPencilError

# Denominator matrices whose smallest eigenvalue falls below this fraction of
# the largest are treated as singular.
PENCIL_CONDITION_FLOOR = 1e-12

# Geometric bracket expansion stops once the upper endpoint exceeds this.
BRACKET_CAP = 1e12


def require_finite(*arrays):
    """Raise NonFiniteError if any array contains NaN or infinity."""
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NonFiniteError("input contains non-finite values")


def canonical_phase(v, significance=1e-12):
    """Rotate a complex vector so its first significant entry is real and positive.

    The rotation is a global phase, so Rayleigh quotients and all magnitudes
    are unchanged.  Entries with magnitude below ``significance * max|v|``
    are skipped when choosing the reference entry.
    """
    v = np.asarray(v)
    scale = np.max(np.abs(v))
    if scale == 0.0:
        return v
    idx = np.argmax(np.abs(v) > significance * scale)
    return v * np.exp(-1j * np.angle(v[idx]))


@dataclass(frozen=True)
class MatrixPencil:
    """Hermitian pencil (A, B) with B positive definite.

    The dominant generalized eigenvector of the pencil maximizes the
    Rayleigh ratio (e^H A e) / (e^H B e).
    """

    a: np.ndarray
    b: np.ndarray

    def validate(self):
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise SingularPencilError("pencil members must be square and same shape")
        require_finite(a, b)
        eigs = scipy.linalg.eigvalsh(b)
        if eigs[0] <= PENCIL_CONDITION_FLOOR * max(eigs[-1], 0.0):
            raise SingularPencilError(
                f"denominator matrix not positive definite: eigs in [{eigs[0]:.3e}, {eigs[-1]:.3e}]"
            )


def dominant_generalized_eigenvector(a, b):
    """Unit vector maximizing the Rayleigh ratio of the Hermitian pencil (a, b).

    Parameters
    ----------
    a, b : (n, n) complex Hermitian arrays; ``b`` must be positive definite.

    Returns
    -------
    (n,) complex array with unit Euclidean norm whose first significant
    entry is real and positive.

    Notes
    -----
    Solved by Cholesky reduction of ``b`` to an ordinary Hermitian
    eigenproblem (LAPACK ``hegv`` via ``scipy.linalg.eigh``), which is
    stable for the well-conditioned denominators produced by the
    noise-shifted pencils used in this package.
    """
    pencil = MatrixPencil(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    pencil.validate()
    _, vecs = scipy.linalg.eigh(pencil.a, pencil.b)
    e = vecs[:, -1]
    e = e / np.linalg.norm(e)
    return canonical_phase(e)


def max_eigenvalue(m):
    """Largest (real) eigenvalue of a Hermitian matrix."""
    m = np.asarray(m)
    require_finite(m)
    return float(scipy.linalg.eigvalsh(m)[-1])


def bisect_root(f, lo, hi, tol):
    """Root of a monotone scalar function by bisection with bracket expansion.

    The upper endpoint is grown geometrically (``hi *= 10``) up to
    ``BRACKET_CAP`` until ``f(lo)`` and ``f(hi)`` differ in sign.  Returns
    ``x`` with ``|f(x)| <= tol`` or bracket width ``<= tol * max(1, |x|)``.
    Deterministic: identical inputs give bit-identical output.

    Raises
    ------
    NoSignChangeError
        If no sign change is found even at the expansion cap.
    """
    lo = float(lo)
    hi = float(hi)
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    while f_lo * f_hi > 0.0:
        if hi >= BRACKET_CAP:
            raise NoSignChangeError(
                f"no sign change on [{lo:g}, {hi:g}]: f(lo)={f_lo:g}, f(hi)={f_hi:g}"
            )
        hi = min(hi * 10.0, BRACKET_CAP)
        f_hi = f(hi)
    if f_hi == 0.0:
        return hi
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) <= tol or (hi - lo) <= tol * max(1.0, abs(mid)):
            return mid
        if f_mid * f_lo > 0.0:
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return mid


def check_gradient(f, point, analytic_grad, step=1e-5):
    """Relative error between central differences and an analytic 2-D gradient.

    The step in each coordinate is ``step * max(1, |x_i|)``.  Returns the
    maximum over coordinates of
    ``|central - analytic| / (|analytic| + 1e-12)``.
    """
    point = np.asarray(point, dtype=float)
    analytic_grad = np.asarray(analytic_grad, dtype=float)
    worst = 0.0
    for i in range(point.size):
        h = step * max(1.0, abs(point[i]))
        fwd = point.copy()
        bwd = point.copy()
        fwd[i] += h
        bwd[i] -= h
        f_fwd = f(fwd)
        f_bwd = f(bwd)
        if not (np.isfinite(f_fwd) and np.isfinite(f_bwd)):
            raise NonFiniteError("objective not evaluable at perturbed points")
        central = (f_fwd - f_bwd) / (2.0 * h)
        err = abs(central - analytic_grad[i]) / (abs(analytic_grad[i]) + 1e-12)
        worst = max(worst, err)
    return worst
