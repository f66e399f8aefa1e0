"""Choosing a penalty level on a fitted path with BIC or extended BIC."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import CovMatrix, PrecisionDecomposition
from .descent import PathResult
from .objective import log_likelihood


@dataclass(frozen=True)
class SelectionScore:
    rho: float
    bic: float
    ebic: float
    edges: int
    loglik: float


def _check(estimate: PrecisionDecomposition, S: CovMatrix) -> None:
    if estimate.p != S.p:
        raise ValueError(f"estimate has dimension {estimate.p}, covariance {S.p}")


def bic(estimate: PrecisionDecomposition, S: CovMatrix) -> float:
    """``log(n) * edges - 2 * loglik``."""
    _check(estimate, S)
    return (math.log(S.n) * estimate.edges()
            - 2.0 * log_likelihood(estimate.precision(), S))


def ebic(estimate: PrecisionDecomposition, S: CovMatrix, gamma: float = 0.5) -> float:
    """BIC plus ``4 * gamma * log(p) * edges``."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    b = bic(estimate, S)
    if gamma == 0.0:
        return b
    return b + 4.0 * gamma * math.log(S.p) * estimate.edges()


def scores(path: PathResult, S: CovMatrix, gamma: float = 0.5) -> list[SelectionScore]:
    out = []
    for rho, est in zip(path.rhos, path.estimates):
        _check(est, S)
        ll = log_likelihood(est.precision(), S)
        e = est.edges()
        b = math.log(S.n) * e - 2.0 * ll
        eb = b + 4.0 * gamma * math.log(S.p) * e if gamma else b
        out.append(SelectionScore(rho, b, eb, e, ll))
    return out


def _argmin_sparse(values: list[float]) -> int:
    # Last index attaining the minimum: rho ascends, so ties go to the sparser fit.
    best = min(values)
    return max(k for k, v in enumerate(values) if v == best)


def select(path: PathResult, S: CovMatrix, gamma: float = 0.5) -> tuple[int, int]:
    """Indices minimising BIC and EBIC over the path."""
    if len(path) == 0:
        raise ValueError("empty path")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    sc = scores(path, S, gamma)
    return _argmin_sparse([s.bic for s in sc]), _argmin_sparse([s.ebic for s in sc])
