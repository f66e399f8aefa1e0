"""Matrix types and linear algebra helpers shared by the solver.

A precision matrix is stored in the split form ``theta`` (diagonal) and
``delta`` (unit-diagonal matrix of negative partial correlations) so that
``Theta = diag(theta)^{1/2} @ delta @ diag(theta)^{1/2}``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SYMMETRY_TOL = 1e-10
PIVOT_RTOL = 1e-12
INTERVAL_MARGIN = 1e-9


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    """Raised when a Cholesky pivot is not strictly positive."""

    def __init__(self, index: int, pivot: float):
        self.index = index
        self.pivot = pivot
        super().__init__(
            f"matrix is not positive definite: pivot {index} is {pivot:.3e}")


class DegenerateQuadraticError(ArithmeticError):
    """The determinant probes are inconsistent with a quadratic in x."""


def _as_symmetric(m, name="matrix") -> np.ndarray:
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.allclose(m, m.T, rtol=0.0, atol=SYMMETRY_TOL):
        raise ValueError(f"{name} is not symmetric")
    return m


@dataclass(frozen=True)
class CovMatrix:
    """Sample covariance ``s`` computed from ``n`` observations."""

    s: np.ndarray
    n: int

    def __post_init__(self):
        s = _as_symmetric(self.s, "covariance")
        if s.shape[0] < 1:
            raise ValueError("covariance must have at least one variable")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"sample size must be an integer >= 2, got {self.n}")
        diag = np.diag(s)
        if np.any(diag <= 0):
            k = int(np.argmin(diag))
            raise ValueError(f"covariance diagonal entry {k} is not positive")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "n", int(self.n))

    @property
    def p(self) -> int:
        return self.s.shape[0]


@dataclass(frozen=True)
class PrecisionDecomposition:
    """Precision matrix split into its diagonal and partial correlations."""

    theta: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float).reshape(-1)
        delta = np.array(self.delta, dtype=float)
        p = theta.size
        if delta.shape != (p, p):
            raise ValueError(
                f"delta has shape {delta.shape}, expected {(p, p)}")
        if np.any(theta <= 0) or not np.all(np.isfinite(theta)):
            raise ValueError("theta entries must be finite and positive")
        if not np.array_equal(delta, delta.T):
            if not np.allclose(delta, delta.T, rtol=0.0, atol=SYMMETRY_TOL):
                raise ValueError("delta is not symmetric")
            delta = 0.5 * (delta + delta.T)
        if not np.all(np.diag(delta) == 1.0):
            raise ValueError("delta must have unit diagonal")
        off = delta[~np.eye(p, dtype=bool)]
        if np.any(np.abs(off) >= 1.0):
            raise ValueError("partial correlations must lie in (-1, 1)")
        cholesky(delta)
        theta.setflags(write=False)
        delta.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "delta", delta)

    @property
    def p(self) -> int:
        return self.theta.size

    def precision(self) -> np.ndarray:
        return recompose(self)

    def edges(self) -> int:
        """Number of nonzero partial correlations above the diagonal."""
        return int(np.count_nonzero(np.triu(self.delta, 1)))


@dataclass(frozen=True)
class DetQuadratic:
    """``det(delta)`` as ``a*x**2 + b*x + c`` in one off-diagonal entry.

    ``l`` and ``u`` bound the open interval where the quadratic is positive
    (intersected with (-1, 1)), already shrunk by ``INTERVAL_MARGIN``.
    """

    a: float
    b: float
    c: float
    l: float
    u: float

    def __call__(self, x):
        return (self.a * x + self.b) * x + self.c

    def reflected(self) -> "DetQuadratic":
        return DetQuadratic(self.a, -self.b, self.c, -self.u, -self.l)


def cholesky(m: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor with an explicit relative pivot tolerance.

    Raises
    ------
    NotPositiveDefiniteError
        If any pivot is at or below ``1e-12 * max(diag(m))``.
    """
    m = np.asarray(m, dtype=float)
    try:
        L = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        L = None
    if L is not None:
        pivots = np.diag(L) ** 2
        tol = PIVOT_RTOL * max(float(np.max(np.diag(m))), 0.0)
        bad = np.flatnonzero(pivots <= tol)
        if bad.size == 0:
            return L
        raise NotPositiveDefiniteError(int(bad[0]), float(pivots[bad[0]]))
    # Redo the factorisation by hand to report which pivot failed.
    p = m.shape[0]
    L = np.zeros_like(m)
    for k in range(p):
        piv = m[k, k] - L[k, :k] @ L[k, :k]
        if not piv > PIVOT_RTOL * np.max(np.diag(m)):
            raise NotPositiveDefiniteError(k, float(piv))
        L[k, k] = np.sqrt(piv)
        L[k + 1:, k] = (m[k + 1:, k] - L[k + 1:, :k] @ L[k, :k]) / L[k, k]
    raise NotPositiveDefiniteError(p - 1, 0.0)  # pragma: no cover


def is_positive_definite(m: np.ndarray) -> bool:
    try:
        cholesky(m)
    except NotPositiveDefiniteError:
        return False
    return True


def log_det(m: np.ndarray) -> float:
    """Log-determinant of a positive definite matrix via Cholesky."""
    L = cholesky(m)
    return float(2.0 * np.sum(np.log(np.diag(L))))


def decompose(theta_matrix) -> PrecisionDecomposition:
    """Split a precision matrix into ``theta = diag`` and ``delta``."""
    m = _as_symmetric(theta_matrix, "precision matrix")
    cholesky(m)
    theta = np.diag(m).copy()
    root = np.sqrt(theta)
    delta = m / np.outer(root, root)
    np.fill_diagonal(delta, 1.0)
    delta = 0.5 * (delta + delta.T)
    return PrecisionDecomposition(theta, delta)


def recompose(d: PrecisionDecomposition) -> np.ndarray:
    root = np.sqrt(d.theta)
    m = d.delta * np.outer(root, root)
    np.fill_diagonal(m, d.theta)
    return m


def standardize(cov: CovMatrix) -> tuple[CovMatrix, np.ndarray]:
    """Rescale to unit diagonal.

    Returns the correlation matrix and the scales ``d = sqrt(diag(S))``;
    an estimate on the unit scale maps back via ``theta / outer(d, d)``.
    """
    d = np.sqrt(np.diag(cov.s))
    r = cov.s / np.outer(d, d)
    np.fill_diagonal(r, 1.0)
    r = 0.5 * (r + r.T)
    return CovMatrix(r, cov.n), d


def rescale(d: PrecisionDecomposition, scale: np.ndarray) -> PrecisionDecomposition:
    """Map a unit-scale estimate back through ``diag(scale)^-1 Theta diag(scale)^-1``."""
    return PrecisionDecomposition(d.theta / np.asarray(scale) ** 2, d.delta)


def _det(m: np.ndarray) -> np.ndarray:
    sign, logabs = np.linalg.slogdet(m)
    return sign * np.exp(logabs)


def _positive_interval(a: float, b: float, c: float) -> tuple[float, float]:
    """Open set ``{x in (-1, 1): a x^2 + b x + c > 0}`` around its largest part."""
    lo, hi = -1.0, 1.0
    if a == 0.0:
        if b > 0:
            lo = max(lo, -c / b)
        elif b < 0:
            hi = min(hi, -c / b)
        elif c <= 0:
            raise DegenerateQuadraticError("quadratic is nowhere positive")
        return lo, hi
    disc = b * b - 4.0 * a * c
    if disc <= 0:
        if a > 0:
            return lo, hi
        raise DegenerateQuadraticError("quadratic is nowhere positive")
    sq = np.sqrt(disc)
    # Numerically stable pair of roots.
    q = -0.5 * (b + np.copysign(sq, b))
    r1, r2 = sorted((q / a, c / q) if q != 0 else (-sq / (2 * a), sq / (2 * a)))
    if a < 0:
        return max(lo, r1), min(hi, r2)
    # Convex quadratic: positive outside the roots; keep the side holding
    # more of (-1, 1). Only reachable from a corrupted state.
    left = (lo, min(hi, r1))
    right = (max(lo, r2), hi)
    return max(left, right, key=lambda t: t[1] - t[0])


def det_quadratic(d: PrecisionDecomposition, i: int, j: int) -> DetQuadratic:
    """Coefficients of ``det(delta)`` as a function of ``delta[i, j]``.

    Three probe determinants at ``x in {0, h, -h}`` fix the quadratic and a
    fourth probe checks the fit. The returned interval is shrunk by
    ``INTERVAL_MARGIN`` on both sides.
    """
    if not i < j:
        raise ValueError("expected i < j")
    return det_quadratic_raw(np.array(d.delta), i, j)


def det_quadratic_raw(delta: np.ndarray, i: int, j: int) -> DetQuadratic:
    """:func:`det_quadratic` on a bare array; ``delta`` is not modified."""
    h = 0.5
    probes = np.array([0.0, h, -h, 0.25])
    stack = np.repeat(delta[None], probes.size, axis=0)
    stack[:, i, j] = probes
    stack[:, j, i] = probes
    dets = _det(stack)
    c = dets[0]
    b = (dets[1] - dets[2]) / (2.0 * h)
    a = (dets[1] + dets[2] - 2.0 * c) / (2.0 * h * h)
    check = (a * probes[3] + b) * probes[3] + c
    scale = max(abs(a), abs(b), abs(c), np.finfo(float).tiny)
    if not abs(check - dets[3]) <= 1e-9 * scale:
        raise DegenerateQuadraticError(
            f"determinant probes for ({i}, {j}) are not quadratic: "
            f"{check!r} vs {dets[3]!r}")
    lo, hi = _positive_interval(a, b, c)
    lo, hi = lo + INTERVAL_MARGIN, hi - INTERVAL_MARGIN
    if not lo < hi:
        raise DegenerateQuadraticError(f"empty feasible interval for ({i}, {j})")
    return DetQuadratic(float(a), float(b), float(c), float(lo), float(hi))


def read_matrix_csv(path) -> np.ndarray:
    """Read a headerless numeric square matrix and check symmetry."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(x.strip() for x in r)]
    try:
        m = np.array([[float(x) for x in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric matrix entry ({exc})") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        raise ValueError(f"{path}: matrix is not square")
    return _as_symmetric(m, str(path))


def write_matrix_csv(path, m: np.ndarray) -> None:
    """Write a matrix with 17 significant digits so it reads back exactly."""
    m = np.asarray(m, dtype=float)
    path = Path(path)
    with path.open("w", newline="") as fh:
        for row in np.atleast_2d(m):
            fh.write(",".join(format(float(v), ".17g") for v in row) + "\n")
