"""Blockwise coordinate descent and the warm-started regularisation path."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .block_solver import (C1, C2, C12, CN, KEPT_INCUMBENT, N_SUBINTERVALS, NO_CANDIDATE,
                           QA, QB, QC, QL, QU, RHO, BlockSolveError, _fval, solve_into,
                           workspace)
from .core import (INTERVAL_MARGIN, CovMatrix, PrecisionDecomposition, cholesky,
                   decompose, rescale, standardize)
from .objective import diagonal_coefficient, objective_raw, pcglasso_objective

log = logging.getLogger(__name__)

UNIT_DIAG_TOL = 1e-10
# Allowed objective decrease per update; covers rounding in the log-det.
ASCENT_SLACK = 1e-10


@dataclass(frozen=True)
class DescentConfig:
    """Stopping rule and start-point settings.

    ``alpha=None`` means ``1e-3 * trace(S) / p``.
    """

    epsilon: float = 1e-8
    max_sweeps: int = 500
    alpha: float | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if int(self.max_sweeps) != self.max_sweeps or self.max_sweeps < 1:
            raise ValueError("max_sweeps must be a positive integer")
        if self.alpha is not None and not self.alpha > 0:
            raise ValueError("alpha must be positive")


@dataclass(frozen=True)
class DescentResult:
    """Outcome of one :func:`coordinate_descent` run.

    ``trace`` holds the objective at the start and after every sweep.
    """

    estimate: PrecisionDecomposition
    trace: list[float]
    converged: bool
    sweeps: int
    fallbacks: int = 0
    min_update_gain: float = math.inf

    @property
    def objective(self) -> float:
        return self.trace[-1]


@dataclass(frozen=True)
class PathResult:
    rhos: list[float]
    estimates: list[PrecisionDecomposition]
    objectives: list[float]
    nonzero_counts: list[int]
    converged: list[bool] = field(default_factory=list)
    traces: list[list[float]] = field(default_factory=list)

    def __post_init__(self):
        k = len(self.rhos)
        if not (len(self.estimates) == len(self.objectives) == len(self.nonzero_counts) == k):
            raise ValueError("path lists differ in length")

    def __len__(self) -> int:
        return len(self.rhos)


def _stop_fraction(delta: np.ndarray) -> float:
    p = delta.shape[0]
    pairs = p * (p - 1) / 2
    nz = np.count_nonzero(np.triu(delta, 1))
    return max(nz / pairs, 1.0 / pairs)


def coordinate_descent(S_unit: CovMatrix, rho: float, start: PrecisionDecomposition,
                       cfg: DescentConfig = DescentConfig()) -> DescentResult:
    """Maximise the penalised objective by exact updates of ``(delta_ij, theta_ii, theta_jj)``.

    Every sweep visits each pair ``i < j`` once in a freshly shuffled order.
    Iteration stops after a sweep whose gain falls below ``q * epsilon``,
    where ``q`` is the fraction of nonzero off-diagonal entries before the
    sweep (at least one pair's worth).

    Parameters
    ----------
    S_unit : CovMatrix
        Covariance with unit diagonal.
    rho : float
        Penalty level, ``>= 0``.
    start : PrecisionDecomposition
        Starting point; must match the dimension of ``S_unit``.
    """
    s = S_unit.s
    p, n = S_unit.p, S_unit.n
    if np.max(np.abs(np.diag(s) - 1.0)) > UNIT_DIAG_TOL:
        raise ValueError("coordinate descent needs a unit-diagonal covariance")
    if start.p != p:
        raise ValueError(f"start has dimension {start.p}, covariance {p}")
    if not rho >= 0:
        raise ValueError("rho must be non-negative")
    cn = diagonal_coefficient(n)
    if not cn > 0:
        raise ValueError("need n > 4 so that 1 - 4/n is positive")

    if p == 1:
        est = PrecisionDecomposition(np.array([cn / s[0, 0]]), np.ones((1, 1)))
        return DescentResult(est, [pcglasso_objective(est, S_unit, rho)], True, 0)

    theta = np.array(start.theta)
    root = np.sqrt(theta)
    delta = np.array(start.delta)
    s = np.ascontiguousarray(s)
    rng = np.random.default_rng(cfg.rng_seed)
    iu, ju = np.triu_indices(p, 1)

    trace = [objective_raw(theta, delta, s, n, rho)]
    converged = False
    fallbacks = 0
    min_gain = math.inf
    sweeps = 0
    for sweeps in range(1, cfg.max_sweeps + 1):
        q = _stop_fraction(delta)
        f_before = trace[-1]
        order = rng.permutation(iu.size)
        inv = _inverse(delta)
        kept, gain, failed = _sweep(s, delta, root, inv, cn, float(rho),
                                    iu[order], ju[order], N_SUBINTERVALS, INTERVAL_MARGIN)
        if failed >= 0:
            i, j = iu[order][failed], ju[order][failed]
            raise BlockSolveError(f"no feasible block update for pair ({i}, {j})")
        fallbacks += kept
        min_gain = min(min_gain, gain)
        theta = root * root
        f_after = objective_raw(theta, delta, s, n, rho)
        if f_after < f_before - ASCENT_SLACK * max(1.0, abs(f_before)):
            # Should not happen; each update is an exact block maximum.
            log.error("objective decreased by %.3e during a sweep", f_before - f_after)
        trace.append(f_after)
        if f_after - f_before < q * cfg.epsilon:
            converged = True
            break
    if not converged:
        log.warning("coordinate descent hit max_sweeps=%d at rho=%g", cfg.max_sweeps, rho)
    if fallbacks:
        log.warning("%d block updates kept the incumbent at rho=%g", fallbacks, rho)
    est = PrecisionDecomposition(theta, delta)
    return DescentResult(est, trace, converged, sweeps, fallbacks, min_gain)


def _inverse(delta: np.ndarray) -> np.ndarray:
    L = cholesky(delta)
    eye = np.eye(delta.shape[0])
    linv = np.linalg.solve(L, eye)
    inv = linv.T @ linv
    return 0.5 * (inv + inv.T)


@njit(cache=True, error_model="numpy")
def _sweep(s, delta, root, inv, cn, rho, order_i, order_j, n_sub, margin):
    """One pass over the given pairs, updating ``delta``, ``root`` and ``inv`` in place.

    With ``A = delta^-1`` and ``t = x - x0``,
    ``det(delta(x)) / det(delta) = 1 + 2 A_ij t + (A_ij^2 - A_ii A_jj) t^2``,
    and ``A`` follows each update by a rank-two correction.
    Returns ``(kept_incumbent, min_gain, failed_position)``.
    """
    p = root.size
    cf = np.empty(10)
    work = workspace(n_sub)
    ci = np.empty(p)
    cj = np.empty(p)
    kept = 0
    min_gain = np.inf
    for t in range(order_i.size):
        i = order_i[t]
        j = order_j[t]
        c1 = 0.0
        c2 = 0.0
        for k in range(p):
            if k != i and k != j:
                c1 += s[i, k] * delta[i, k] * root[k]
                c2 += s[j, k] * delta[j, k] * root[k]
        x0 = delta[i, j]
        aii = inv[i, i]
        ajj = inv[j, j]
        aij = inv[i, j]
        qa = aij * aij - aii * ajj
        g = math.sqrt(aii * ajj)
        lo = max(-1.0, x0 - 1.0 / (g + aij)) + margin
        hi = min(1.0, x0 + 1.0 / (g - aij)) - margin
        if not lo < hi:
            return kept, min_gain, t
        cf[CN] = cn
        cf[C12] = s[i, j]
        cf[C1] = c1
        cf[C2] = c2
        cf[QA] = qa
        cf[QB] = 2.0 * aij - 2.0 * qa * x0
        cf[QC] = 1.0 - 2.0 * aij * x0 + qa * x0 * x0
        cf[QL] = lo
        cf[QU] = hi
        cf[RHO] = rho
        y10 = root[i]
        y20 = root[j]
        x, y1, y2, f, status = solve_into(cf, n_sub, True, x0, y10, y20, work)
        if status == NO_CANDIDATE:
            return kept, min_gain, t
        if status == KEPT_INCUMBENT:
            kept += 1
        gain = f - _fval(cf, x0, y10, y20)
        if gain < min_gain:
            min_gain = gain
        step = x - x0
        if step != 0.0:
            r = (1.0 + step * aij) ** 2 - step * step * aii * ajj
            cii = step * step * ajj / r
            cjj = step * step * aii / r
            cij = -step * (1.0 + step * aij) / r
            for a in range(p):
                ci[a] = inv[a, i]
                cj[a] = inv[a, j]
            for a in range(p):
                ui = cii * ci[a] + cij * cj[a]
                uj = cjj * cj[a] + cij * ci[a]
                for b in range(p):
                    inv[a, b] += ui * ci[b] + uj * cj[b]
            delta[i, j] = x
            delta[j, i] = x
        root[i] = y1
        root[j] = y2
    return kept, min_gain, -1


def initial_estimate(S: CovMatrix, cfg: DescentConfig = DescentConfig()) -> PrecisionDecomposition:
    """``decompose(S^-1)`` when ``S`` is safely invertible, else a ridge inverse."""
    s = S.s
    p = S.p
    if S.n >= p:
        cond = np.linalg.cond(s)
        if np.isfinite(cond) and cond < 1e12:
            try:
                return decompose(np.linalg.inv(s))
            except np.linalg.LinAlgError:
                pass
    alpha = cfg.alpha if cfg.alpha is not None else 1e-3 * float(np.trace(s)) / p
    return decompose(np.linalg.inv(s + alpha * np.eye(p)))


def _check_rhos(rhos) -> list[float]:
    rhos = [float(r) for r in rhos]
    if not rhos:
        raise ValueError("rho grid is empty")
    if rhos[0] != 0.0:
        raise ValueError("rho grid must start at 0")
    if any(not math.isfinite(r) for r in rhos):
        raise ValueError("rho grid must be finite")
    if any(b <= a for a, b in zip(rhos, rhos[1:])):
        raise ValueError("rho grid must be strictly increasing")
    return rhos


def regularization_path(S: CovMatrix, rhos, cfg: DescentConfig = DescentConfig()) -> PathResult:
    """Warm-started fits over an increasing ``rho`` grid.

    Works on the correlation scale and maps every estimate back through
    ``diag(S)^-1/2 Theta diag(S)^-1/2``. Objectives are reported on the
    original scale.
    """
    rhos = _check_rhos(rhos)
    R, scale = standardize(S)
    start = initial_estimate(R, cfg)
    estimates, objectives, counts, flags, traces = [], [], [], [], []
    for rho in rhos:
        res = coordinate_descent(R, rho, start, cfg)
        start = res.estimate
        est = rescale(res.estimate, scale)
        estimates.append(est)
        objectives.append(pcglasso_objective(est, S, rho))
        counts.append(est.edges())
        flags.append(res.converged)
        traces.append(res.trace)
    return PathResult(rhos, estimates, objectives, counts, flags, traces)


def default_rho_grid(S: CovMatrix, count: int = 50, min_ratio: float = 0.01) -> list[float]:
    """``[0]`` then ``count - 1`` log-spaced values up to ``max |R_ij|``."""
    if int(count) != count or count < 2:
        raise ValueError("count must be an integer >= 2")
    if not 0 < min_ratio < 1:
        raise ValueError("min_ratio must lie in (0, 1)")
    R, _ = standardize(S)
    off = np.abs(R.s[~np.eye(S.p, dtype=bool)])
    rho_max = float(off.max()) if off.size else 0.0
    if not rho_max > 0:
        log.warning("covariance is diagonal; using a placeholder rho grid")
        rho_max = 1e-2
    if count == 2:
        return [0.0, rho_max]
    grid = np.geomspace(min_ratio * rho_max, rho_max, count - 1)
    grid[-1] = rho_max
    return [0.0] + [float(r) for r in grid]
