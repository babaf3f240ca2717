"""Tests for the stable complex, trace subcomplexes and the obstruction complex."""

import pytest

from drep.cyclic import cyclic_complex
from drep.errors import CellBudgetExceeded
from drep.homology import betti, euler, les_check
from drep.invariants import (
    TraceCellCache,
    TraceData,
    empirical_stability,
    free_closure_dims,
    invariant_dimension,
    invariant_subcomplex,
    obstruction_complex,
    obstruction_inclusion,
    stable_chain_complex,
    stable_complex,
    sym_trace_matrix,
)
from drep.models import BettiTable
from drep.presentations.builtins import commuting_plane, dual_numbers, sandwich, square_zero
from drep.representation import rep_complex, rep_n
from drep.series import molien_weyl


def test_free_closure_of_one_even_and_one_odd_class():
    """An even class gives a polynomial ring and an odd class an exterior algebra."""
    even = BettiTable.from_dims({(0, 1): 1})
    assert free_closure_dims(even, 3) == {(0, 0): 1, (0, 1): 1, (0, 2): 1, (0, 3): 1}
    odd = BettiTable.from_dims({(1, 1): 1})
    assert free_closure_dims(odd, 3) == {(0, 0): 1, (1, 1): 1}


def test_stable_complex_variables_are_good_cyclic_words():
    """Lambda[C(R)] has one variable per good cyclic word."""
    stable = stable_complex(dual_numbers(4), 4)
    assert len(stable.variables) == sum(len(c) for c in cyclic_complex(dual_numbers(4), 4).bases.values())
    assert stable.verify_d_squared(4).ok


@pytest.mark.parametrize("pres", [dual_numbers(6), commuting_plane()])
def test_stable_homology_is_free_on_cyclic_homology(pres):
    """H(Lambda[C(R)]) = Lambda[HC(A)] through weight 6."""
    stable = betti(stable_chain_complex(pres, 6)).nonzero()
    closure = free_closure_dims(betti(cyclic_complex(pres, 6)), 6)
    assert stable == {cell: d for cell, d in closure.items() if d}


def test_invariant_chain_dims_for_dual_numbers():
    """At n = 2 the weight-2 invariants are Tr(x)^2, Tr(x x) and Tr(x1)."""
    c = invariant_subcomplex(dual_numbers(3), 2, 2)
    assert c.dim(0, 2) == 2
    assert c.dim(1, 2) == 1


def test_traces_span_degree_zero_invariants():
    """In hdeg 0 the trace rank equals the dimension of gl_n-invariants."""
    pres = dual_numbers(4)
    for n in (1, 2):
        data = TraceData(pres, n, 3)
        alg = rep_n(pres, n)
        for w in range(1, 4):
            assert len(data.cell((0, w)).independent) == invariant_dimension(alg, 0, w)


def test_trace_matrix_at_n_equal_one_collapses_cyclic_words():
    """Tr_1 sends [x x] and [x]^2 to the same monomial."""
    cell = sym_trace_matrix(dual_numbers(2), 1, 0, 2)
    assert len(cell.monomials) == 2
    assert len(cell.independent) == 1


def test_obstruction_complex_closes_the_long_exact_sequence():
    """0 -> K(A, 1) -> Lambda[C(R)] -> (R_1)^GL -> 0 is consistent, and K(A, 1) sits in Lambda[C(R)] as a subcomplex."""
    pres = dual_numbers(4)
    data = TraceData(pres, 1, 4)
    inclusion = obstruction_inclusion(pres, 1, 4, data=data)
    assert inclusion
    report = les_check(
        obstruction_complex(pres, 1, 4, data=data),
        stable_chain_complex(pres, 4),
        invariant_subcomplex(pres, 1, 4, data=data),
        inclusion=inclusion,
    )
    assert report.ok


def test_sandwich_obstruction_vanishes_in_low_weight():
    """K_(r,1)(A, 1) = 0 for r <= 4."""
    k = obstruction_complex(sandwich(), 1, 4)
    assert all(k.dim(1, r) == 0 for r in range(5))


def test_stabilization_onsets_are_bounded_by_the_weight():
    """Invariant homology in weight w is stable from n = max(w, 1)."""
    rows = empirical_stability(dual_numbers(3), 3, 3)
    assert [row.weight for row in rows] == [0, 1, 2, 3]
    for row in rows:
        assert row.onset is not None and row.onset <= max(row.weight, 1)


def test_cell_budget_is_enforced(monkeypatch):
    """A tiny budget aborts the trace expansion."""
    monkeypatch.setattr("drep.invariants._TRACE_CELLS", TraceCellCache())
    monkeypatch.setenv("DREP_CELL_BUDGET", "1")
    with pytest.raises(CellBudgetExceeded) as info:
        TraceData(commuting_plane(), 2, 2).cell((0, 2))
    assert info.value.report["n"] == 2


@pytest.mark.slow
def test_stable_homology_misses_a_class_of_rep_homology():
    """H_3 in weight 5 is nonzero at n = 1 but vanishes stably."""
    pres = dual_numbers(5)
    assert betti(stable_chain_complex(pres, 5)).dim(3, 5) == 0
    assert betti(rep_complex(pres, 1, 5)).dim(3, 5) == 1


def _assert_molien_matches_invariant_euler(pres, n):
    mw = molien_weyl(pres.census(4), n, 4).coefficients()
    chain = euler(invariant_subcomplex(pres, n, 4))
    assert [mw[w] for w in range(5)] == [chain.get(w, 0) for w in range(5)]


@pytest.mark.parametrize("pres", [dual_numbers(4), square_zero(2, 4), sandwich()])
def test_molien_weyl_is_the_invariant_euler_characteristic(pres):
    """Torus constant terms give the Euler series of the GL_1-invariants."""
    _assert_molien_matches_invariant_euler(pres, 1)


@pytest.mark.slow
@pytest.mark.parametrize("pres", [dual_numbers(4), square_zero(2, 4), sandwich()])
def test_molien_weyl_is_the_invariant_euler_characteristic_at_n_equal_two(pres):
    """The same through weight 4 for GL_2."""
    _assert_molien_matches_invariant_euler(pres, 2)
