"""Gaussian log-likelihood, the penalised objective and its block restriction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (CovMatrix, DetQuadratic, PrecisionDecomposition,
                   det_quadratic_raw, log_det)


def diagonal_coefficient(n: int) -> float:
    """Weight ``1 - 4/n`` on ``sum(log theta_ii)`` left by the diagonal penalty."""
    return 1.0 - 4.0 / n


def log_likelihood(theta_hat, cov: CovMatrix) -> float:
    """``(n/2) [log det Theta - tr(S Theta) - p log(2 pi)]``."""
    theta_hat = np.asarray(theta_hat, dtype=float)
    if theta_hat.shape != cov.s.shape:
        raise ValueError(
            f"precision has shape {theta_hat.shape}, covariance {cov.s.shape}")
    p = cov.p
    return 0.5 * cov.n * (log_det(theta_hat) - float(np.sum(cov.s * theta_hat))
                          - p * np.log(2.0 * np.pi))


def pcglasso_objective(d: PrecisionDecomposition, cov: CovMatrix, rho: float) -> float:
    """Penalised objective in the (theta, delta) parametrisation.

    The L1 term runs over ordered pairs ``i != j`` so every edge is counted
    twice.
    """
    if rho < 0:
        raise ValueError("rho must be non-negative")
    return objective_raw(d.theta, d.delta, cov.s, cov.n, rho)


def objective_raw(theta: np.ndarray, delta: np.ndarray, s: np.ndarray, n: int,
                  rho: float) -> float:
    root = np.sqrt(theta)
    trace = float(np.sum(s * delta * np.outer(root, root)))
    off = float(np.abs(delta).sum()) - theta.size
    return (log_det(delta) + diagonal_coefficient(n) * float(np.sum(np.log(theta)))
            - trace - rho * off)


@dataclass(frozen=True)
class BlockCoefficients:
    """Data of the three-variable problem in ``(delta_ij, sqrt(theta_ii), sqrt(theta_jj))``.

    ``f(x, y1, y2) = log(quad(x)) + 2 cn (log y1 + log y2) - y1^2 - y2^2
    - 2 c12 x y1 y2 - 2 c1 y1 - 2 c2 y2 - 2 rho |x|``
    """

    cn: float
    c12: float
    c1: float
    c2: float
    quad: DetQuadratic
    rho: float

    def __post_init__(self):
        if not self.rho >= 0:
            raise ValueError("rho must be non-negative")
        if not (np.isfinite(self.c1) and np.isfinite(self.c2)
                and np.isfinite(self.c12)):
            raise ValueError("block coefficients must be finite")
        if not self.cn > 0:
            raise ValueError("need n > 4 so that 1 - 4/n is positive")

    def reflected(self) -> "BlockCoefficients":
        """The same problem under ``x -> -x``."""
        return BlockCoefficients(self.cn, -self.c12, self.c1, self.c2,
                                 self.quad.reflected(), self.rho)

    def with_rho(self, rho: float) -> "BlockCoefficients":
        return BlockCoefficients(self.cn, self.c12, self.c1, self.c2,
                                 self.quad, rho)


def block_coefficients(d: PrecisionDecomposition, cov: CovMatrix, i: int, j: int,
                       rho: float) -> BlockCoefficients:
    """Restrict the objective to the entries ``(i, j)``, ``theta_ii`` and ``theta_jj``.

    Requires ``cov`` on the unit-diagonal scale, as the block objective
    carries ``-y1^2 - y2^2`` with unit weight.
    """
    if not i < j:
        raise ValueError("expected i < j")
    s = cov.s
    if abs(s[i, i] - 1.0) > 1e-10 or abs(s[j, j] - 1.0) > 1e-10:
        raise ValueError("block coefficients need a unit-diagonal covariance")
    return block_coefficients_raw(np.sqrt(d.theta), d.delta, s, cov.n, i, j, rho)


def block_coefficients_raw(root: np.ndarray, delta: np.ndarray, s: np.ndarray, n: int,
                           i: int, j: int, rho: float) -> BlockCoefficients:
    """Array-level worker behind :func:`block_coefficients`; ``root = sqrt(theta)``."""
    wi = s[i] * delta[i] * root
    wj = s[j] * delta[j] * root
    c1 = float(wi.sum() - wi[i] - wi[j])
    c2 = float(wj.sum() - wj[i] - wj[j])
    return BlockCoefficients(diagonal_coefficient(n), float(s[i, j]), c1, c2,
                             det_quadratic_raw(delta, i, j), float(rho))


def block_objective(coef: BlockCoefficients, x, y1, y2):
    """Evaluate ``f``; vectorises over numpy arrays.

    Raises
    ------
    ValueError
        For scalar input outside the feasible region.
    """
    q = coef.quad(x)
    scalar = np.ndim(q) == 0 and np.ndim(y1) == 0 and np.ndim(y2) == 0
    if scalar and not (q > 0 and y1 > 0 and y2 > 0):
        raise ValueError(f"infeasible block point x={x}, y1={y1}, y2={y2}")
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (np.log(q) + 2.0 * coef.cn * (np.log(y1) + np.log(y2))
               - y1 * y1 - y2 * y2 - 2.0 * coef.c12 * x * y1 * y2
               - 2.0 * coef.c1 * y1 - 2.0 * coef.c2 * y2
               - 2.0 * coef.rho * np.abs(x))
    if scalar:
        return float(val)
    return np.where((q > 0) & (y1 > 0) & (y2 > 0), val, -np.inf)


def block_gradient(coef: BlockCoefficients, x: float, y1: float, y2: float):
    """Partial derivatives ``(f_x, f_y1, f_y2)``; ``f_x`` uses ``sign(x)``."""
    qa = coef.quad
    fx = ((2.0 * qa.a * x + qa.b) / qa(x) - 2.0 * coef.c12 * y1 * y2
          - 2.0 * coef.rho * np.sign(x))
    fy1 = 2.0 * coef.cn / y1 - 2.0 * y1 - 2.0 * coef.c12 * x * y2 - 2.0 * coef.c1
    fy2 = 2.0 * coef.cn / y2 - 2.0 * y2 - 2.0 * coef.c12 * x * y1 - 2.0 * coef.c2
    return float(fx), float(fy1), float(fy2)
