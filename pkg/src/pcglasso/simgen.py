"""Synthetic precision matrices and Gaussian samples.

Random draws use numpy's ``Generator`` with the PCG64 bit generator, so a
given seed reproduces the same data for a given numpy release.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CovMatrix, cholesky

KINDS = ("star", "hub", "ar2", "random")


@dataclass(frozen=True)
class Scenario:
    kind: str
    p: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scenario {self.kind!r}; expected one of {KINDS}")
        if int(self.p) != self.p or self.p < 4:
            raise ValueError(f"scenario dimension must be an integer >= 4, got {self.p}")
        if self.kind == "hub" and self.p % 4:
            raise ValueError(f"hub scenario needs p divisible by 4, got {self.p}")

    @property
    def edge_count(self) -> int:
        """Number of random nonzero pairs drawn by the ``random`` kind."""
        return (3 * self.p) // 2


def _generator(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _star(p: int) -> np.ndarray:
    m = np.eye(p)
    m[0, 1:] = m[1:, 0] = -1.0 / np.sqrt(p)
    return m


def _hub(p: int) -> np.ndarray:
    # Four groups of p/4 consecutive variables; the first of each is the hub.
    m = np.eye(p)
    g = p // 4
    v = -2.0 / np.sqrt(p)
    for h in range(0, p, g):
        m[h, h + 1:h + g] = m[h + 1:h + g, h] = v
    return m


def _ar2(p: int) -> np.ndarray:
    m = np.eye(p)
    k = np.arange(p)
    m[k[:-1], k[1:]] = m[k[1:], k[:-1]] = 0.5
    m[k[:-2], k[2:]] = m[k[2:], k[:-2]] = 0.25
    return m


def _random(p: int, edges: int, rng: np.random.Generator) -> np.ndarray:
    iu, ju = np.triu_indices(p, 1)
    pick = rng.choice(iu.size, size=edges, replace=False)
    mag = rng.uniform(0.4, 1.0, size=edges)
    sign = np.where(rng.random(edges) < 0.5, -1.0, 1.0)
    a = np.zeros((p, p))
    a[iu[pick], ju[pick]] = sign * mag
    a = a + a.T
    colsum = np.abs(a).sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(colsum > 0, a / (1.1 * colsum), 0.0)
    m = 0.5 * (a + a.T)
    np.fill_diagonal(m, 1.0)
    return m


def make_truth(sc: Scenario) -> np.ndarray:
    """Unit-diagonal precision matrix for the scenario.

    star: ``theta_1j = -1/sqrt(p)``. hub: four groups of ``p/4``, each tied
    to its first variable by ``-2/sqrt(p)``. ar2: bands ``1/2`` and ``1/4``.
    random: ``floor(3p/2)`` entries uniform on ``[-1, -0.4] U [0.4, 1]``,
    each divided by 1.1 times its column's absolute off-diagonal sum and
    then averaged with the transpose.
    """
    if sc.kind == "star":
        m = _star(sc.p)
    elif sc.kind == "hub":
        m = _hub(sc.p)
    elif sc.kind == "ar2":
        m = _ar2(sc.p)
    else:
        m = _random(sc.p, sc.edge_count, _generator(sc.seed))
    cholesky(m)
    return m


def sample_gaussian(truth: np.ndarray, n: int, seed) -> np.ndarray:
    """``n`` rows drawn i.i.d. from ``N(0, truth^-1)``."""
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    truth = np.asarray(truth, dtype=float)
    sigma = np.linalg.inv(truth)
    L = cholesky(0.5 * (sigma + sigma.T))
    z = _generator(seed).standard_normal((int(n), truth.shape[0]))
    return z @ L.T


def centered_cov(data) -> np.ndarray:
    """``(1/n) sum (x - xbar)(x - xbar)^T`` as a bare array (may be singular)."""
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if n < 2:
        raise ValueError("need at least two observations")
    xc = x - x.mean(axis=0)
    s = xc.T @ xc / n
    return 0.5 * (s + s.T)


def sample_cov(data) -> CovMatrix:
    """Maximum-likelihood covariance of the rows of ``data``.

    Raises ``ValueError`` when a column has zero variance.
    """
    x = np.asarray(data, dtype=float)
    return CovMatrix(centered_cov(x), x.shape[0])
