"""Tests for exact rational linear algebra."""

from fractions import Fraction

from drep.linalg import (
    apply_rows,
    echelon_rank,
    independent_rows,
    left_kernel,
    nullspace,
    rank_exact,
    solve_in_span,
)


def test_rank_of_dense_and_sparse_input():
    """Dense lists and sparse rows give the same rank."""
    dense = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank_exact(dense) == 2
    sparse = [{0: Fraction(1), 1: Fraction(2), 2: Fraction(3)}, {0: Fraction(2), 1: Fraction(4), 2: Fraction(6)}]
    assert rank_exact(sparse, 3) == 1
    assert rank_exact([], 4) == 0
    assert rank_exact([{}, {}], 2) == 0


def test_rank_agrees_with_plain_elimination():
    """sympy's rank matches Fraction Gaussian elimination."""
    matrix = [[Fraction(1, 2), 1, 0, 3], [1, 2, 0, 6], [0, 0, 5, 1], [1, 0, 1, 1]]
    assert rank_exact(matrix) == echelon_rank(matrix) == 3


def test_nullspace_vectors_are_annihilated():
    """Every nullspace vector is killed by every row."""
    rows = [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1), 2: Fraction(-1)}]
    basis = nullspace(rows, 3)
    assert len(basis) == 1
    for vec in basis:
        for row in rows:
            assert sum(row.get(j, 0) * c for j, c in vec.items()) == 0


def test_left_kernel_finds_row_relations():
    """row0 + row1 - row2 = 0 is found."""
    rows = [{0: Fraction(1)}, {1: Fraction(1)}, {0: Fraction(1), 1: Fraction(1)}]
    (relation,) = left_kernel(rows, 2)
    assert apply_rows(relation, rows) == {}


def test_independent_rows_keeps_the_first_of_dependent_rows():
    """The greedy subset prefers earlier rows."""
    rows = [{0: Fraction(1)}, {0: Fraction(2)}, {1: Fraction(1)}]
    assert independent_rows(rows, 2) == [0, 2]


def test_solve_in_span():
    """Coordinates are returned for members of the span and None otherwise."""
    basis = [{0: Fraction(1), 1: Fraction(1)}, {2: Fraction(1)}]
    (coords,) = solve_in_span(basis, [{0: Fraction(2), 1: Fraction(2), 2: Fraction(-1)}], 3)
    assert coords == {0: Fraction(2), 1: Fraction(-1)}
    assert solve_in_span(basis, [{0: Fraction(1)}], 3) is None
    assert solve_in_span(basis, [{}], 3) == [{}]
