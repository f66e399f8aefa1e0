"""One-variable analysis of the ``c log theta`` diagonal penalty.

With ``(n - 1) theta s ~ chi2(n - 1)`` the penalised estimator is
``(1 - 2c/n) / s``; its mean squared error is quadratic in ``c`` and is
smallest at ``c = 2n / (n - 1)``, close to the coefficient 2 the main
objective uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class UniMseInputs:
    n: int
    c: float
    theta: float

    def __post_init__(self):
        if not self.n > 5:
            raise ValueError("n must exceed 5")
        if not self.c >= 0:
            raise ValueError("c must be non-negative")
        if not self.theta > 0:
            raise ValueError("theta must be positive")


def penalized_estimator(s: float, n: int, c: float) -> float:
    """``(1 - 2c/n) / s``."""
    if not s > 0:
        raise ValueError("sample variance must be positive")
    k = 1.0 - 2.0 * c / n
    if not k > 0:
        raise ValueError("need 2c < n for a positive estimate")
    return k / s


def mse_closed_form(n: int, c, theta: float):
    """Exact MSE of :func:`penalized_estimator` when ``(n-1) theta s ~ chi2(n-1)``.

    Vectorises over ``c``.
    """
    if not n > 5:
        raise ValueError("n must exceed 5")
    k = 1.0 - 2.0 * np.asarray(c, dtype=float) / n
    r = (n - 1.0) / (n - 3.0)
    var = 2.0 * k * k * r * r / (n - 5.0)
    bias = k * r - 1.0
    out = theta * theta * (var + bias * bias)
    return float(out) if np.ndim(out) == 0 else out


def mse_optimal_c(n: int) -> float:
    """Minimiser ``2n / (n - 1)`` of :func:`mse_closed_form`."""
    return 2.0 * n / (n - 1.0)


def mse_monte_carlo(n: int, c: float, theta: float, reps: int, seed) -> tuple[float, float]:
    """Simulated MSE and its standard error from ``reps`` chi-square draws."""
    rng = np.random.Generator(np.random.PCG64(seed))
    s = rng.chisquare(n - 1, size=reps) / ((n - 1) * theta)
    est = (1.0 - 2.0 * c / n) / s
    sq = (est - theta) ** 2
    return float(sq.mean()), float(sq.std(ddof=1) / np.sqrt(reps))
