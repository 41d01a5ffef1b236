"""Exact elimination helpers."""

from gmpy2 import mpq
import numpy as np
from hypothesis import given, strategies as st

from resonanza.exact import ExactComplex, I
from resonanza.linalg import integer_nullspace, integer_rank, rank, solve


def test_rank_over_gaussian_rationals():
    rows = [[ExactComplex(1), I], [I, ExactComplex(-1)]]
    assert rank(rows) == 1
    assert rank([[mpq(1), mpq(0)], [mpq(0), mpq(1)]]) == 2
    assert rank([]) == 0


def test_solve_finds_combination():
    cols = [[mpq(1), mpq(0), mpq(1)], [mpq(0), mpq(1), mpq(1)]]
    x = solve(cols, [mpq(2), mpq(3), mpq(5)])
    assert list(x) == [2, 3]
    assert solve(cols, [mpq(1), mpq(1), mpq(0)]) is None


def test_nullspace_is_primitive_integer():
    basis = integer_nullspace([[1, 1, 2]])
    assert len(basis) == 2
    for v in basis:
        assert v[0] + v[1] + 2 * v[2] == 0
        assert all(isinstance(x, int) for x in v)
        assert np.gcd.reduce(v) == 1


int_matrix = st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=1, max_size=4))


@given(int_matrix)
def test_rank_nullity(rows):
    ncols = len(rows[0])
    basis = integer_nullspace(rows, ncols)
    assert integer_rank(rows) + len(basis) == ncols
    assert integer_rank(rows) == np.linalg.matrix_rank(np.array(rows, dtype=float))
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
