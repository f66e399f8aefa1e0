import numpy as np
import pytest

from pcglasso.core import cholesky
from pcglasso.simgen import (KINDS, Scenario, centered_cov, make_truth, sample_cov,
                             sample_gaussian)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario("ring", 10)
    with pytest.raises(ValueError):
        Scenario("star", 3)
    with pytest.raises(ValueError):
        Scenario("hub", 10)
    assert Scenario("random", 21).edge_count == 31


def test_star():
    m = make_truth(Scenario("star", 4))
    assert m[0, 1] == -0.5 and m[1, 0] == -0.5 and m[1, 2] == 0.0
    m = make_truth(Scenario("star", 20))
    assert np.count_nonzero(np.triu(m, 1)) == 19


def test_ar2():
    for p in (5, 12):
        m = make_truth(Scenario("ar2", p))
        assert m[0, 1] == 0.5 and m[0, 2] == 0.25 and m[0, 3] == 0.0


def test_hub_layout():
    p = 20
    m = make_truth(Scenario("hub", p))
    g = p // 4
    v = -2 / np.sqrt(p)
    for h in range(0, p, g):
        assert np.all(m[h, h + 1:h + g] == v)
    assert np.count_nonzero(np.triu(m, 1)) == p - 4


def test_random_is_pd_for_many_seeds():
    for seed in range(100):
        m = make_truth(Scenario("random", 20, seed))
        cholesky(m)
        assert np.array_equal(m, m.T) and np.all(np.diag(m) == 1.0)
        assert np.count_nonzero(np.triu(m, 1)) == 30
        off = np.abs(m[np.triu_indices(20, 1)])
        assert np.all(off[off > 0] < 1.0)


def test_random_depends_on_seed():
    a = make_truth(Scenario("random", 12, 1))
    b = make_truth(Scenario("random", 12, 2))
    assert not np.array_equal(a, b)
    assert np.array_equal(a, make_truth(Scenario("random", 12, 1)))


@pytest.mark.parametrize("kind", KINDS)
def test_all_scenarios_pd_at_p20(kind):
    m = make_truth(Scenario(kind, 20))
    cholesky(m)


def test_sampler_law_of_large_numbers():
    truth = make_truth(Scenario("ar2", 6))
    s = sample_cov(sample_gaussian(truth, 10**5, 0)).s
    assert np.max(np.abs(s - np.linalg.inv(truth))) < 0.05


def test_sampler_deterministic_and_identity():
    a = sample_gaussian(np.eye(3), 400, 7)
    assert np.array_equal(a, sample_gaussian(np.eye(3), 400, 7))
    s = sample_cov(a).s
    assert np.all(np.abs(np.diag(s) - 1) < 3 * np.sqrt(2 / 400) * 3)
    assert np.all(np.abs(s[np.triu_indices(3, 1)]) < 3 / np.sqrt(400))
    with pytest.raises(ValueError):
        sample_gaussian(np.eye(2), 1, 0)


def test_sample_cov_examples():
    assert np.array_equal(centered_cov(np.array([[1.0, 2.0], [1.0, 2.0]])), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        sample_cov(np.array([[1.0, 2.0], [1.0, 2.0]]))
    rng = np.random.default_rng(3)
    x = rng.standard_normal((30, 4))
    d = np.array([2.0, 0.5, 3.0, 1.0])
    np.testing.assert_allclose(sample_cov(x * d).s, np.outer(d, d) * sample_cov(x).s, rtol=1e-12)
    # Naive two-pass reference.
    mean = [sum(x[t, k] for t in range(30)) / 30 for k in range(4)]
    ref = np.array([[sum((x[t, a] - mean[a]) * (x[t, b] - mean[b]) for t in range(30)) / 30
                     for b in range(4)] for a in range(4)])
    np.testing.assert_allclose(sample_cov(x).s, ref, rtol=1e-12)
    assert sample_cov(x).n == 30
