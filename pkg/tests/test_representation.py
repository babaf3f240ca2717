"""Tests for matrix-variable algebras R_n, traces and representation homology."""

import pytest

from drep.cyclic import canonical_cyclic
from drep.errors import PresentationError
from drep.homology import betti
from drep.presentations import CommDGA, parse_presentation
from drep.presentations.builtins import commuting_plane, dual_numbers
from drep.representation import (
    MatrixVariableAlgebra,
    evaluate_word_matrix,
    matrix_variable_name,
    rep_complex,
    rep_n,
    stabilization_map,
    trace_cyclic,
)


def test_matrix_variable_names():
    """n = 1 keeps the generator name; otherwise indices are appended."""
    assert matrix_variable_name("x", 1, 1, 1) == "x"
    assert matrix_variable_name("x", 1, 2, 2) == "x_1_2"


def test_rep_n_has_n_squared_variables_per_generator():
    """k<x, y, t> gives 12 variables at n = 2."""
    alg = rep_n(commuting_plane(), 2)
    assert len(alg.variables) == 12
    assert alg.verify_d_squared(6).ok


def test_commutator_vanishes_at_n_equal_one():
    """d t = xy - yx evaluates to zero on 1x1 matrices."""
    alg = rep_n(commuting_plane(), 1)
    t = alg.var(commuting_plane().alphabet.index("t"), 1, 1)
    assert not alg.d(t)


def test_differential_is_the_matrix_entry_of_d():
    """d t_12 = sum_k (x_1k y_k2 - y_1k x_k2) has four terms at n = 2."""
    pres = commuting_plane()
    alg = rep_n(pres, 2)
    t12 = alg.var(pres.alphabet.index("t"), 1, 2)
    assert len(alg.d(t12)) == 4


def test_traces_are_invariant():
    """Tr(x y) is killed by every E_ab while a single entry is not."""
    pres = commuting_plane()
    alg = rep_n(pres, 2)
    a = pres.alphabet
    tr = alg.trace_word((a.index("x"), a.index("y")))
    assert len(tr) == 4
    assert alg.infinitesimal_invariance_check(tr) == []
    lone = alg.evaluate_word_entry((a.index("x"),), 1, 2)
    assert alg.infinitesimal_invariance_check(lone)


def test_trace_is_the_sum_of_diagonal_entries():
    """Tr(x y) adds the diagonal of the matrix product, and [y x] has the same trace."""
    pres = commuting_plane()
    alg = rep_n(pres, 2)
    a = pres.alphabet
    word = (a.index("x"), a.index("y"))
    matrix = evaluate_word_matrix(alg, word)
    assert len(matrix) == 2 and all(len(row) == 2 for row in matrix)
    assert matrix[0][0] + matrix[1][1] == alg.trace_word(word)
    cw, sign = canonical_cyclic(a, (a.index("y"), a.index("x")))
    assert trace_cyclic(alg, cw, sign) == alg.trace_word(word)


def test_stabilization_sends_traces_to_traces():
    """mu(Tr_3(w)) = Tr_2(w) for a word containing the odd letter."""
    pres = commuting_plane()
    a = pres.alphabet
    word = (a.index("x"), a.index("t"), a.index("y"))
    big, small = rep_n(pres, 3), rep_n(pres, 2)
    assert stabilization_map(big.trace_word(word), big, small) == small.trace_word(word)


def test_stabilization_only_goes_down_by_one():
    """n -> n - 2 is rejected."""
    pres = commuting_plane()
    with pytest.raises(PresentationError):
        stabilization_map(rep_n(pres, 3).trace_word((0,)), rep_n(pres, 3), rep_n(pres, 1))


def test_matrix_size_must_be_positive():
    """n = 0 is an error."""
    with pytest.raises(PresentationError):
        MatrixVariableAlgebra(commuting_plane(), 0)


def test_rep_text_reparses_as_a_commutative_algebra():
    """drep rep output is a valid commutative presentation."""
    alg = rep_n(commuting_plane(), 2)
    parsed = parse_presentation(alg.canonical_text())
    assert isinstance(parsed, CommDGA)
    assert len(parsed.variables) == 12
    assert parsed.verify_d_squared(4).ok


def test_commuting_plane_at_n_equal_one():
    """R_1 = k[x, y] with an odd t: H_0(w) = w + 1, H_1(w) = w - 1, nothing above."""
    table = betti(rep_complex(commuting_plane(), 1, 6))
    for w in range(7):
        assert table.dim(0, w) == w + 1
        assert table.dim(1, w) == max(0, w - 1)
        assert table.dim(2, w) == 0


def test_dual_numbers_rep_homology_low_weights():
    """The first cells of H(k[x]/(x^2), 1)."""
    table = betti(rep_complex(dual_numbers(6), 1, 6))
    assert table.dim(0, 0) == 1
    assert table.dim(0, 1) == 1
    assert table.dim(0, 2) == 0
    assert table.dim(2, 3) == 1
    assert table.dim(3, 5) == 1
    assert all(table.dim(1, w) == 0 for w in range(7))


@pytest.mark.slow
def test_dual_numbers_rep_homology_to_weight_eight():
    """Higher cells of H(k[x]/(x^2), 1)."""
    table = betti(rep_complex(dual_numbers(8), 1, 8))
    expected = {(3, 5): 1, (3, 6): 1, (3, 7): 0, (5, 7): 1, (5, 8): 2}
    assert {cell: table.dim(*cell) for cell in expected} == expected
    assert all(table.dim(1, w) == 0 for w in range(9))
