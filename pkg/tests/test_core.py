import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_delta, random_spd
from pcglasso.core import (INTERVAL_MARGIN, CovMatrix, DegenerateQuadraticError,
                           NotPositiveDefiniteError, PrecisionDecomposition, cholesky,
                           decompose, det_quadratic, is_positive_definite, log_det,
                           read_matrix_csv, recompose, rescale, standardize,
                           write_matrix_csv)

EXCH_S = np.array([[4, 2, 1, 2], [2, 2, 0.5, 1], [1, 0.5, 0.5, 0.5], [2, 1, 0.5, 2]], float)


def test_decompose_two_by_two():
    d = decompose(np.array([[4.0, -1.0], [-1.0, 1.0]]))
    np.testing.assert_allclose(d.theta, [4.0, 1.0])
    assert d.delta[0, 1] == pytest.approx(-0.5)


def test_decompose_identity():
    d = decompose(np.eye(5))
    assert np.array_equal(d.theta, np.ones(5))
    assert np.array_equal(d.delta, np.eye(5))


def test_decompose_star():
    theta = np.eye(4)
    theta[0, 1:] = theta[1:, 0] = -0.5
    d = decompose(theta)
    np.testing.assert_allclose(d.delta[0, 1:], -0.5)
    assert np.all(d.delta[1:, 1:][~np.eye(3, dtype=bool)] == 0)


def test_recompose_examples():
    d = PrecisionDecomposition(np.array([4.0, 1.0]), np.array([[1.0, -0.5], [-0.5, 1.0]]))
    np.testing.assert_allclose(recompose(d), [[4.0, -1.0], [-1.0, 1.0]])
    t = np.array([2.0, 3.0, 5.0])
    assert np.array_equal(recompose(PrecisionDecomposition(t, np.eye(3))), np.diag(t))


@given(st.integers(1, 8), st.integers(0, 2**31))
def test_round_trip(p, seed):
    m = random_spd(np.random.default_rng(seed), p, cond_floor=1.0)
    back = recompose(decompose(m))
    assert np.max(np.abs(back - m)) <= 1e-12 * np.max(np.abs(m))


def test_decompose_rejects_indefinite():
    with pytest.raises(NotPositiveDefiniteError) as err:
        decompose(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert err.value.index == 1


def test_decomposition_invariants():
    with pytest.raises(ValueError):
        PrecisionDecomposition(np.array([1.0, -1.0]), np.eye(2))
    with pytest.raises(ValueError):
        PrecisionDecomposition(np.ones(2), np.array([[1.0, 0.2], [0.3, 1.0]]))
    with pytest.raises(ValueError):
        PrecisionDecomposition(np.ones(2), np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(ValueError):
        PrecisionDecomposition(np.ones(2), 2 * np.eye(2))
    with pytest.raises(NotPositiveDefiniteError):
        d = np.full((3, 3), -0.6)
        np.fill_diagonal(d, 1.0)
        PrecisionDecomposition(np.ones(3), d)


def test_covmatrix_validation():
    with pytest.raises(ValueError):
        CovMatrix(np.array([[1.0, 0.5], [0.4, 1.0]]), 10)
    with pytest.raises(ValueError):
        CovMatrix(np.array([[0.0, 0.0], [0.0, 1.0]]), 10)
    with pytest.raises(ValueError):
        CovMatrix(np.eye(2), 1)
    assert CovMatrix(np.eye(3), 5).p == 3


def test_standardize_examples():
    r, d = standardize(CovMatrix(np.array([[4.0, 2.0], [2.0, 4.0]]), 10))
    np.testing.assert_allclose(r.s, [[1.0, 0.5], [0.5, 1.0]])
    np.testing.assert_allclose(d, [2.0, 2.0])
    unit = np.array([[1.0, 0.3], [0.3, 1.0]])
    r, d = standardize(CovMatrix(unit, 10))
    assert np.array_equal(r.s, unit) and np.array_equal(d, [1.0, 1.0])


def test_standardize_exchangeable():
    r, _ = standardize(CovMatrix(EXCH_S, 100))
    iu = np.triu_indices(4, 1)
    h = 1 / np.sqrt(2)
    np.testing.assert_allclose(r.s[iu], [h, h, h, 0.5, 0.5, 0.5], rtol=1e-15)


@given(st.integers(0, 2**31))
def test_standardize_idempotent(seed):
    rng = np.random.default_rng(seed)
    s = random_spd(rng, 4)
    scale = rng.uniform(0.1, 10, 4)
    r1, _ = standardize(CovMatrix(s * np.outer(scale, scale), 20))
    r2, d2 = standardize(r1)
    np.testing.assert_allclose(r2.s, r1.s, rtol=0, atol=1e-15)
    np.testing.assert_allclose(d2, 1.0, rtol=1e-15)


def test_rescale_back_transform():
    rng = np.random.default_rng(3)
    theta = random_spd(rng, 4, cond_floor=1.0)
    d = np.array([0.5, 2.0, 3.0, 0.1])
    back = recompose(rescale(decompose(theta), d))
    np.testing.assert_allclose(back, theta / np.outer(d, d), rtol=1e-13)


def test_log_det_examples():
    assert log_det(np.eye(4)) == 0.0
    assert log_det(np.diag([2.0, 3.0])) == pytest.approx(np.log(6.0), rel=1e-15)
    assert log_det(np.array([[1.0, 0.5], [0.5, 1.0]])) == pytest.approx(np.log(0.75), rel=1e-14)
    with pytest.raises(NotPositiveDefiniteError):
        log_det(np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_cholesky_pivot_tolerance():
    m = np.diag([1.0, 1e-13])
    with pytest.raises(NotPositiveDefiniteError) as err:
        cholesky(m)
    assert err.value.index == 1
    assert is_positive_definite(np.diag([1.0, 1e-11]))
    assert not is_positive_definite(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_det_quadratic_p2():
    q = det_quadratic(PrecisionDecomposition(np.ones(2), np.eye(2)), 0, 1)
    assert (q.a, q.b, q.c) == pytest.approx((-1.0, 0.0, 1.0), abs=1e-14)
    assert q.l == pytest.approx(-1.0 + INTERVAL_MARGIN, abs=1e-15)
    assert q.u == pytest.approx(1.0 - INTERVAL_MARGIN, abs=1e-15)


def test_det_quadratic_p3():
    d = np.eye(3)
    d[0, 2] = d[2, 0] = d[1, 2] = d[2, 1] = 0.5
    q = det_quadratic(PrecisionDecomposition(np.ones(3), d), 0, 1)
    assert (q.a, q.b, q.c) == pytest.approx((-1.0, 0.5, 0.5), abs=1e-14)
    assert q.l == pytest.approx(-0.5 + INTERVAL_MARGIN, abs=1e-14)
    assert q.u == pytest.approx(1.0 - INTERVAL_MARGIN, abs=1e-14)
    q0 = det_quadratic(PrecisionDecomposition(np.ones(3), np.eye(3)), 0, 1)
    assert (q0.a, q0.b, q0.c) == pytest.approx((-1.0, 0.0, 1.0), abs=1e-14)


def test_det_quadratic_needs_ordered_pair():
    with pytest.raises(ValueError):
        det_quadratic(PrecisionDecomposition(np.ones(2), np.eye(2)), 1, 0)


@given(st.integers(2, 7), st.integers(0, 2**31))
def test_det_quadratic_matches_cholesky(p, seed):
    rng = np.random.default_rng(seed)
    delta = random_delta(rng, p)
    i, j = sorted(rng.choice(p, 2, replace=False))
    q = det_quadratic(PrecisionDecomposition(np.ones(p), delta), i, j)
    assert -1.0 < q.l < delta[i, j] < q.u < 1.0
    for x in rng.uniform(q.l, q.u, 5):
        m = delta.copy()
        m[i, j] = m[j, i] = x
        # Every point of (l, u) keeps delta positive definite.
        ref = np.exp(log_det(m))
        assert abs(q(x) - ref) <= 1e-8 * max(abs(ref), 1e-300) + 1e-14


def test_degenerate_quadratic_reports():
    # A delta whose determinant is non-positive at every x has no interval.
    with pytest.raises(DegenerateQuadraticError):
        from pcglasso.core import _positive_interval
        _positive_interval(-1.0, 0.0, -1.0)


def test_matrix_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    m = random_spd(rng, 5)
    f = tmp_path / "m.csv"
    write_matrix_csv(f, m)
    assert np.array_equal(read_matrix_csv(f), m)


def test_matrix_csv_errors(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("1,2\n3\n")
    with pytest.raises(ValueError):
        read_matrix_csv(f)
    f.write_text("1,2\n3,1\n")
    with pytest.raises(ValueError, match="symmetric"):
        read_matrix_csv(f)
    f.write_text("1,a\na,1\n")
    with pytest.raises(ValueError, match="non-numeric"):
        read_matrix_csv(f)
