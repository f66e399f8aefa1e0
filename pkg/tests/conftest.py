import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pcglasso.core import DetQuadratic, PrecisionDecomposition, det_quadratic
from pcglasso.objective import BlockCoefficients

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Acceptance outcomes keyed by criterion number; filled by test_acceptance.py.
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_spd(rng, p, cond_floor=0.1):
    a = rng.standard_normal((p, p))
    return a @ a.T / p + cond_floor * np.eye(p)


def random_delta(rng, p, scale=0.3):
    """A random valid partial-correlation matrix."""
    while True:
        a = rng.uniform(-scale, scale, (p, p))
        d = np.triu(a, 1)
        d = d + d.T + np.eye(p)
        if np.all(np.linalg.eigvalsh(d) > 0.05):
            return d


def random_coef(rng, c_positive=True, separable=False):
    """A block problem from a random feasible delta, as the descent would build it."""
    p = 4
    while True:
        a = rng.uniform(-0.6, 0.6, (p, p))
        d = np.triu(a, 1)
        d = d + d.T + np.eye(p)
        if np.all(np.linalg.eigvalsh(d) > 0.02):
            break
    q = det_quadratic(PrecisionDecomposition(np.ones(p), d), 0, 1)
    if not c_positive:
        # Shift so that 0 falls outside (l, u): substitute x -> x + s.
        s = q.u + 0.05 if rng.random() < 0.5 else q.l - 0.05
        a2, b2, c2 = q.a, 2 * q.a * s + q.b, (q.a * s + q.b) * s + q.c
        q = DetQuadratic(a2, b2, c2, q.l - s, q.u - s)
        if not (q.l > -1 and q.u < 1):
            return random_coef(rng, c_positive, separable)
    c12 = 0.0 if separable else float(rng.uniform(-0.9, 0.9))
    rho = float(rng.choice([0.0, rng.uniform(0, 0.1), rng.uniform(0.1, 1.0)]))
    return BlockCoefficients(float(rng.uniform(0.5, 0.99)), c12,
                             float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-1.5, 1.5)),
                             q, rho)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {status}  {detail}")
