"""Accuracy of an estimate against a known precision matrix, and held-out fit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CovMatrix, PrecisionDecomposition, cholesky, log_det
from .objective import log_likelihood


@dataclass(frozen=True)
class MetricsRecord:
    kl: float
    fnorm: float
    mcc: float
    sensitivity: float
    specificity: float
    tp: int
    tn: int
    fp: int
    fn: int


def kl_loss(truth, est) -> float:
    """``-log det(est) + tr(est truth^-1) + log det(truth) - p``."""
    truth = np.asarray(truth, dtype=float)
    est = np.asarray(est, dtype=float)
    if truth.shape != est.shape:
        raise ValueError(f"shapes differ: {truth.shape} vs {est.shape}")
    L = cholesky(truth)
    # tr(est truth^-1) = tr(L^-1 est L^-T) with truth = L L^T.
    linv = np.linalg.solve(L, np.eye(truth.shape[0]))
    tr = float(np.trace(linv @ est @ linv.T))
    return -log_det(est) + tr + 2.0 * float(np.sum(np.log(np.diag(L)))) - truth.shape[0]


def _support(m: np.ndarray) -> np.ndarray:
    return np.triu(m, 1)[np.triu_indices(m.shape[0], 1)] != 0


def confusion(truth, est: PrecisionDecomposition) -> tuple[int, int, int, int]:
    """``(tp, tn, fp, fn)`` over pairs ``i < j`` using exact zeros."""
    truth = np.asarray(truth, dtype=float)
    if truth.shape != (est.p, est.p):
        raise ValueError(f"truth has shape {truth.shape}, estimate dimension {est.p}")
    t = _support(truth)
    e = _support(est.delta)
    tp = int(np.sum(t & e))
    tn = int(np.sum(~t & ~e))
    fp = int(np.sum(~t & e))
    fn = int(np.sum(t & ~e))
    return tp, tn, fp, fn


def mcc(tp: int, tn: int, fp: int, fn: int) -> float:
    """Matthews correlation coefficient; 0 when a denominator factor is 0."""
    if min(tp, tn, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if den == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(den)


def sensitivity(tp: int, fn: int) -> float:
    return tp / (tp + fn) if tp + fn else float("nan")


def specificity(tn: int, fp: int) -> float:
    return tn / (tn + fp) if tn + fp else float("nan")


def frobenius(truth, est) -> float:
    truth = np.asarray(truth, dtype=float)
    est = np.asarray(est, dtype=float)
    if truth.shape != est.shape:
        raise ValueError(f"shapes differ: {truth.shape} vs {est.shape}")
    return float(np.linalg.norm(truth - est, "fro"))


def evaluate(truth, est: PrecisionDecomposition) -> MetricsRecord:
    theta = est.precision()
    tp, tn, fp, fn = confusion(truth, est)
    return MetricsRecord(kl=kl_loss(truth, theta), fnorm=frobenius(truth, theta),
                         mcc=mcc(tp, tn, fp, fn), sensitivity=sensitivity(tp, fn),
                         specificity=specificity(tn, fp), tp=tp, tn=tn, fp=fp, fn=fn)


def holdout_loglik(est: PrecisionDecomposition, test_data, center=None) -> float:
    """Gaussian log-likelihood of held-out rows.

    The second-moment matrix is taken about ``center`` (the training mean;
    zero when omitted) and the sample size is the number of test rows.
    """
    x = np.asarray(test_data, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    k, p = x.shape
    if p != est.p:
        raise ValueError(f"test data has {p} columns, estimate dimension {est.p}")
    if k < 1:
        raise ValueError("need at least one test row")
    if center is not None:
        center = np.asarray(center, dtype=float).reshape(-1)
        if center.size != p:
            raise ValueError("center has the wrong length")
        x = x - center
    s = x.T @ x / k
    # CovMatrix needs n >= 2; the likelihood formula itself is fine for k = 1.
    if k == 1:
        theta = est.precision()
        return 0.5 * (log_det(theta) - float(np.sum(s * theta)) - p * math.log(2.0 * math.pi))
    return log_likelihood(est.precision(), CovMatrix(0.5 * (s + s.T), k))
