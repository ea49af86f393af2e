from fractions import Fraction as F

import pytest

from exlp.model import StandardLP
from exlp.ratcore import (
    RatMatrix,
    as_rational,
    encoding_length,
    hadamard_denominator_bound,
    lcm_of_denominators,
    max_norm,
    row_sum_norm,
)
from exlp.testkit import brute_force_optimum


def test_as_rational_is_exact():
    assert as_rational("0.1") == F(1, 10)
    assert as_rational("3/4") == F(3, 4)
    assert as_rational(0.5) == F(1, 2)
    assert as_rational("1e-3") == F(1, 1000)


def test_matrix_basics():
    A = RatMatrix.from_dense([[1, 0, 2], [0, F(1, 3), 0]])
    assert A.shape == (2, 3)
    assert A.nnz == 3
    assert A[0, 1] == 0
    assert A.matvec((1, 1, 1)) == (3, F(1, 3))
    assert A.rmatvec((1, 3)) == (1, 1, 2)
    assert A.transpose().transpose() == A
    assert A.to_dense()[1][1] == F(1, 3)
    assert A.columns([2, 0]).to_dense() == [[2, 1], [0, 0]]


def test_matrix_rejects_duplicates_and_bad_index():
    with pytest.raises(ValueError):
        RatMatrix(1, 1, [(0, 0, 1), (0, 0, 2)])
    with pytest.raises(IndexError):
        RatMatrix(1, 1, {(1, 0): 1})


def test_matmul_identity():
    A = RatMatrix.from_dense([[1, 2], [3, 4]])
    assert A.matmul(RatMatrix.identity(2)) == A


def test_encoding_length():
    assert encoding_length(0) == 1
    assert encoding_length(1) == 2
    assert encoding_length(-3) == 3
    assert encoding_length(F(7, 8)) == 4 + 5
    assert encoding_length((F(1), F(0))) == 4 + 3
    assert encoding_length(RatMatrix(2, 2)) == 12
    with pytest.raises(TypeError):
        encoding_length(True)


def test_norms():
    assert max_norm((F(-3), F(2))) == 3
    assert row_sum_norm(RatMatrix.from_dense([[1, -2], [1, 1]])) == 3
    with pytest.raises(ValueError):
        max_norm(())
    assert lcm_of_denominators([F(1, 4), F(1, 6)]) == 12


def test_hadamard_examples():
    assert hadamard_denominator_bound(StandardLP.from_dense([[1]], [1], [0], [1])) == 1
    assert hadamard_denominator_bound(StandardLP.from_dense([[1, 2]], [1], [0, 0], [1, 1])) == 5


def test_hadamard_bounds_example1_denominators(example1):
    H = hadamard_denominator_bound(example1)
    assert H >= 8
    res = brute_force_optimum(example1)
    for sol in res.solutions.values():
        assert all(v.denominator <= H for v in sol.x)
