from fractions import Fraction as F

import pytest

from exlp.model import StandardLP
from exlp.ratcore import encoding_length
from exlp.testkit import (
    EnumerationLimitError,
    NoOptimalBasisError,
    basis_round_bounds,
    basis_violation,
    brute_force_optimum,
    iteration_bound,
    min_violation_thresholds,
    random_feasible_lp,
    reconstruction_round_bounds,
    suite,
)

EPS = F(1, 10**6)
SIGMA = F(1, 10**4)


def test_brute_force_tiny(tiny):
    res = brute_force_optimum(tiny)
    assert res.optimum == 1 and len(res.optimal_vertices) == 1


def test_brute_force_example1(example1):
    res = brute_force_optimum(example1)
    assert res.optimum == -8
    assert max(v.denominator for x in res.vertices() for v in x) == 8
    assert encoding_length(res.optimal_vertices[0].x[:6]) <= 27


def test_brute_force_two_optimal_vertices():
    lp = StandardLP.from_dense([[1, 1, 1]], [1], [0, 0, 0], [-1, -1, 0])
    res = brute_force_optimum(lp)
    assert res.optimum == -1
    assert {s.x for s in res.optimal_vertices} == {(1, 0, 0), (0, 1, 0)}


def test_brute_force_errors():
    with pytest.raises(NoOptimalBasisError):
        brute_force_optimum(StandardLP.from_dense([[1, -1]], [0], [0, 0], [-1, 0]))
    big = StandardLP.from_dense([[1] * 40] * 20, [1] * 20, [0] * 40, [1] * 40)
    with pytest.raises(EnumerationLimitError):
        brute_force_optimum(big)


def test_thresholds_formula(tiny):
    primal, dual = min_violation_thresholds(tiny)
    # <A> + <b> = <1/1> + <1/1> = 8, <l> = <0/1> = 3, n = 1
    assert primal == F(1, 2 ** (4 * 8 + 5 * 3 + 2 + 4))
    assert dual == F(1, 2 ** (4 * 8 + 2 + 4))


def test_thresholds_monotone_in_coefficients():
    small = StandardLP.from_dense([[1, 2]], [3], [0, 0], [1, 1])
    large = StandardLP.from_dense([[100, 2]], [300], [0, 0], [10, 1])
    assert all(b < a for a, b in zip(min_violation_thresholds(small), min_violation_thresholds(large)))


def test_thresholds_example1(example1):
    primal, dual = min_violation_thresholds(example1)
    res = brute_force_optimum(example1)
    for basis, sol in res.solutions.items():
        p, d = basis_violation(example1, sol)
        assert p == 0 or p >= primal
        assert d == 0 or d >= dual


def test_iteration_bound_values():
    assert iteration_bound(EPS, EPS, SIGMA) == 1
    assert iteration_bound(EPS, EPS, EPS) == 1
    assert iteration_bound(F(1, 10**10), EPS, SIGMA) == 2
    assert iteration_bound(F(1, 10**30), EPS, SIGMA) == 5
    assert iteration_bound(F(1, 10**50), EPS, SIGMA) == 9
    for k in range(1, 6):
        assert iteration_bound(EPS**k, EPS, SIGMA) >= k


def test_iteration_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        iteration_bound(0, EPS, SIGMA)
    with pytest.raises(ValueError):
        iteration_bound(EPS, 1, SIGMA)
    with pytest.raises(ValueError):
        iteration_bound(EPS, EPS, 0)


def test_round_bounds_are_positive(example1):
    kp, kd, k = basis_round_bounds(example1, F(1, 2**30))
    assert 0 < kp and 0 < kd and k == max(kp, kd) + 1
    k1, k2 = reconstruction_round_bounds(8, F(1, 2**30), F(11, 10))
    assert k1 < 1 and k2 > 1000
    with pytest.raises(ValueError):
        reconstruction_round_bounds(8, F(1, 2), F(3))


def test_random_lp_is_reproducible():
    a, b = random_feasible_lp(1, 2, 4), random_feasible_lp(1, 2, 4)
    assert a == b
    assert random_feasible_lp(2, 2, 4) != a
    with pytest.raises(ValueError):
        random_feasible_lp(1, 3, 2)


def test_suite_is_certified():
    instances = suite(100)
    assert len(instances) == 100
    for lp in instances:
        assert lp.m <= 3 and lp.n <= 6
        brute_force_optimum(lp)
