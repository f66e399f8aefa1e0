"""End-to-end acceptance checks, one test per criterion.

Each test stores ``(PASS|FAIL, detail)`` in ``conftest.ACCEPTANCE`` before
asserting, so the terminal summary lists every criterion even when some fail.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE, random_coef, random_delta, random_spd
from oracle import dense_maximize, grid_maximize_block
from pcglasso.block_solver import solve_block
from pcglasso.cli import run_replicate
from pcglasso.core import CovMatrix, PrecisionDecomposition, standardize
from pcglasso.descent import (DescentConfig, coordinate_descent, default_rho_grid,
                              initial_estimate, regularization_path)
from pcglasso.objective import block_gradient, block_objective, pcglasso_objective
from pcglasso.simgen import Scenario, make_truth, sample_cov, sample_gaussian
from pcglasso.univariate_mse import mse_closed_form, mse_monte_carlo, mse_optimal_c

EXCH_S = np.array([[4, 2, 1, 2], [2, 2, 0.5, 1], [1, 0.5, 0.5, 0.5], [2, 1, 0.5, 2]], float)

# Objective traces from every descent run in criteria 2 to 6, checked by criterion 10.
TRACES: dict[int, list[list[float]]] = {}


def record(k, ok, detail):
    ACCEPTANCE[k] = ("PASS" if ok else "FAIL", detail)
    assert ok, f"criterion {k}: {detail}"


@pytest.mark.slow
def test_criterion_01_block_oracle():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    kinds = [(True, False), (False, False), (True, True), (False, True)]
    for k in range(200):
        c_positive, separable = kinds[k % 4]
        coef = random_coef(rng, c_positive=c_positive, separable=separable)
        # Alternate between a light penalty and one large enough to pull x to 0.
        rho = rng.uniform(0.0, 0.1) if (k // 4) % 2 == 0 else rng.uniform(0.5, 3.0)
        coef = coef.with_rho(float(rho))
        got = solve_block(coef).f_value
        ref = grid_maximize_block(coef).f_value
        worst = max(worst, abs(got - ref))
        count += 1
    secs = time.perf_counter() - t0
    record(1, worst <= 1e-4 and secs < 120,
           f"{count} instances, max |f_solver - f_oracle| = {worst:.2e}, {secs:.0f}s")


RHOS_SMALL = (0.0, 0.05, 0.1, 0.2, 0.4)


@pytest.mark.slow
def test_criterion_02_dense_oracle():
    rng = np.random.default_rng(202)
    cfg = DescentConfig()
    t0 = time.perf_counter()
    worst, traces = 0.0, []
    for p, count in ((2, 50), (3, 20)):
        for _ in range(count):
            R, _ = standardize(CovMatrix(random_spd(rng, p), int(rng.integers(20, 200))))
            for rho in RHOS_SMALL:
                res = coordinate_descent(R, rho, initial_estimate(R, cfg), cfg)
                traces.append(res.trace)
                _, best = dense_maximize(R, rho)
                worst = max(worst, abs(res.objective - best))
    TRACES[2] = traces
    secs = time.perf_counter() - t0
    record(2, worst <= 1e-5 and secs < 600,
           f"350 problems, max |objective gap| = {worst:.2e}, {secs:.0f}s")


def test_criterion_03_scale_invariance():
    rng = np.random.default_rng(303)
    t0 = time.perf_counter()
    worst, same, traces = 0.0, True, []
    for _ in range(20):
        p = int(rng.integers(3, 7))
        cov = CovMatrix(random_spd(rng, p), int(rng.integers(20, 100)))
        d = np.exp(rng.uniform(math.log(0.1), math.log(10.0), p))
        d *= np.where(rng.random(p) < 0.5, -1.0, 1.0)
        rhos = default_rho_grid(cov, 10)
        a = regularization_path(CovMatrix(cov.s * np.outer(d, d), cov.n), rhos)
        b = regularization_path(cov, rhos)
        traces += a.traces + b.traces
        for ea, eb in zip(a.estimates, b.estimates):
            A = ea.precision()
            B = eb.precision() / np.outer(d, d)
            scale = np.sqrt(np.outer(np.diag(B), np.diag(B)))
            worst = max(worst, float(np.max(np.abs(A - B) / scale)))
            same &= bool(np.array_equal(A == 0, B == 0))
    TRACES[3] = traces
    secs = time.perf_counter() - t0
    record(3, worst <= 1e-6 and same and secs < 120,
           f"20 pairs, max relative deviation = {worst:.2e}, zero patterns "
           f"{'match' if same else 'differ'}, {secs:.0f}s")


def test_criterion_04_exchangeability():
    cov = CovMatrix(EXCH_S, 100)
    path = regularization_path(cov, default_rho_grid(cov, 50), DescentConfig(epsilon=1e-14))
    TRACES[4] = path.traces
    gap = max(max(abs(e.delta[0, 1] - e.delta[0, 2]), abs(e.delta[0, 1] - e.delta[0, 3]))
              for e in path.estimates)
    zero = [e.delta[1, 2] == 0 and e.delta[1, 3] == 0 and e.delta[2, 3] == 0
            for e in path.estimates]
    # First grid index from which the truly-zero entries stay exactly zero.
    tail = next((k for k in range(len(zero)) if all(zero[k:])), None)
    ok = gap < 1e-6 and tail is not None
    where = f"rho >= {path.rhos[tail]:.4f}" if tail is not None else "never"
    record(4, ok, f"max |D12 - D1k| = {gap:.2e}, zeros exact for {where}")


@pytest.mark.slow
def test_criterion_05_star_recovery():
    truth = make_truth(Scenario("star", 50))
    cov = sample_cov(sample_gaussian(truth, 100, 0))
    t0 = time.perf_counter()
    path = regularization_path(cov, default_rho_grid(cov, 50))
    secs = time.perf_counter() - t0
    TRACES[5] = path.traces
    true = np.triu(truth, 1) != 0
    hits = [r for r, e in zip(path.rhos, path.estimates)
            if np.array_equal(np.triu(e.delta, 1) != 0, true)]
    detail = (f"exact support at {len(hits)} grid points"
              + (f" (rho {min(hits):.3f} to {max(hits):.3f})" if hits else "")
              + f", {secs:.0f}s")
    record(5, bool(hits) and secs < 300, detail)


@pytest.mark.slow
def test_criterion_06_star_table():
    cfg = DescentConfig()
    rows = [run_replicate("star", 20, 100, seed, cfg, 50, 0.01, 0.5) for seed in range(20)]
    TRACES[6] = [t for r in rows for t in r["traces"]]
    mcc = float(np.mean([r["mcc"] for r in rows]))
    kl = float(np.mean([r["kl"] for r in rows]))
    tol_mcc = 3 * 0.017 / math.sqrt(20) + 0.02
    tol_kl = 3 * 0.12 / math.sqrt(20) + 0.05
    ok = abs(mcc - 0.993) <= tol_mcc and abs(kl - 0.46) <= tol_kl
    record(6, ok, f"mean MCC {mcc:.4f} (target 0.993 +- {tol_mcc:.4f}), "
                  f"mean KL {kl:.4f} (target 0.46 +- {tol_kl:.4f})")


def test_criterion_07_univariate_mse():
    c = np.arange(0.0, 10.0 + 5e-4, 1e-3)
    errs = []
    for n in (10, 100, 1000):
        arg = c[int(np.argmin(mse_closed_form(n, c, 1.0)))]
        errs.append(abs(arg - mse_optimal_c(n)))
        errs.append(abs(arg - 2 * n / (n - 1)))
    mean, se = mse_monte_carlo(100, 2.0, 1.0, 10**5, seed=7)
    exact = mse_closed_form(100, 2.0, 1.0)
    ok = max(errs) <= 1e-3 and abs(mean - exact) <= 3 * se
    record(7, ok, f"max argmin error {max(errs):.1e}; Monte Carlo {mean:.6f} vs "
                  f"{exact:.6f} (3 se = {3 * se:.1e})")


def test_criterion_08_conditional_concavity():
    rng = np.random.default_rng(808)
    worst = -np.inf
    for _ in range(500):
        p = int(rng.integers(2, 8))
        cov = CovMatrix(random_spd(rng, p), int(rng.integers(6, 200)))
        theta = rng.uniform(0.2, 5.0, p)
        rho = float(rng.uniform(0.0, 1.0))
        d1, d2 = random_delta(rng, p, 0.4), random_delta(rng, p, 0.4)
        f = [pcglasso_objective(PrecisionDecomposition(theta, d), cov, rho)
             for d in (d1, d2, 0.5 * (d1 + d2))]
        # Midpoint concavity: f(mid) >= average, so the shortfall must be <= 0.
        worst = max(worst, 0.5 * (f[0] + f[1]) - f[2])
    record(8, worst <= 1e-9, f"500 triples, worst midpoint shortfall {worst:.2e}")


def test_criterion_09_block_derivatives():
    rng = np.random.default_rng(909)
    h = 1e-6
    worst, done = 0.0, 0
    while done < 500:
        coef = random_coef(rng, c_positive=rng.random() < 0.5, separable=rng.random() < 0.2)
        q = coef.quad
        mid, half = 0.5 * (q.l + q.u), 0.45 * (q.u - q.l)
        x = float(rng.uniform(mid - half, mid + half))
        if abs(x) < 1e-3:
            continue  # |x| has a kink at 0
        y1, y2 = (float(v) for v in rng.uniform(0.2, 3.0, 2))
        g = block_gradient(coef, x, y1, y2)
        fd = ((block_objective(coef, x + h, y1, y2) - block_objective(coef, x - h, y1, y2)) / (2 * h),
              (block_objective(coef, x, y1 + h, y2) - block_objective(coef, x, y1 - h, y2)) / (2 * h),
              (block_objective(coef, x, y1, y2 + h) - block_objective(coef, x, y1, y2 - h)) / (2 * h))
        for a, b in zip(g, fd):
            worst = max(worst, abs(a - b) / max(abs(a), 1.0))
        done += 1
    record(9, worst <= 1e-6, f"500 points, worst relative error {worst:.2e}")


def test_criterion_10_monotone_traces():
    missing = [k for k in (2, 3, 4, 5, 6) if k not in TRACES]
    if missing:
        # Deselected (e.g. -m "not slow") or crashed suites; a crash fails on its own.
        ACCEPTANCE[10] = ("SKIP", f"no traces from criteria {missing}")
        pytest.skip(f"criteria {missing} did not run")
    runs, bad = 0, 0
    for traces in TRACES.values():
        for t in traces:
            runs += 1
            if np.any(np.diff(np.asarray(t)) < -1e-10):
                bad += 1
    record(10, runs > 0 and bad == 0, f"{runs} descent runs, {bad} with a decreasing step")
