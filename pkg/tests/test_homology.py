"""Tests for truncated complexes, Betti tables and the long exact sequence check."""

from fractions import Fraction

import pytest

from drep.errors import ChainComplexError
from drep.homology import TruncatedComplex, betti, euler, les_check
from drep.models import BettiTable


def _interval():
    """Two vertices and an edge between them, all in weight 1: d(e) = b - a."""
    bases = {(0, 1): ["a", "b"], (1, 1): ["e"]}
    images = {"e": {"b": Fraction(1), "a": Fraction(-1)}}
    return TruncatedComplex.build(bases, lambda label, cell: images.get(label, {}), name="interval")


def test_betti_of_an_interval():
    """The interval is connected and has no loop."""
    table = betti(_interval())
    assert table.as_dict() == {(0, 1): 1, (1, 1): 0}
    assert table.nonzero() == {(0, 1): 1}


def test_euler_matches_homology():
    """chi computed from chains equals chi computed from homology."""
    c = _interval()
    assert euler(c, betti(c)) == {1: 1}


def test_differential_must_land_in_the_stored_basis():
    """An image outside the lower cell is an error."""
    with pytest.raises(ChainComplexError):
        TruncatedComplex.build({(1, 1): ["e"]}, lambda label, cell: {"ghost": Fraction(1)})


def test_d_squared_is_checked():
    """A composite that does not vanish is reported with its cell."""
    bases = {(0, 1): ["a"], (1, 1): ["b"], (2, 1): ["c"]}
    images = {"b": {"a": Fraction(1)}, "c": {"b": Fraction(1)}}
    c = TruncatedComplex.build(bases, lambda label, cell: images.get(label, {}))
    with pytest.raises(ChainComplexError) as info:
        betti(c)
    assert info.value.cell == (2, 1)


def test_truncated_cells_become_lower_bounds():
    """The top stored degree is flagged in the Betti table."""
    c = TruncatedComplex.build({(0, 1): ["a"], (1, 1): ["b"]}, lambda label, cell: {}, truncated={(1, 1)})
    table = betti(c)
    assert [cell.lower_bound for cell in table.cells] == [False, True]


def test_parallel_ranks_match_serial():
    """jobs > 1 gives the same table."""
    c = _interval()
    assert betti(c, jobs=3).as_dict() == betti(c).as_dict()


def test_les_check_on_a_split_sequence():
    """0 -> vertex -> interval -> (interval / vertex) -> 0 is consistent."""
    sub = TruncatedComplex.build({(0, 1): ["a"]}, lambda label, cell: {})
    quot = TruncatedComplex.build(
        {(0, 1): ["b"], (1, 1): ["e"]}, lambda label, cell: {"b": Fraction(1)} if label == "e" else {}
    )
    report = les_check(sub, _interval(), quot)
    assert report.ok
    assert report.checked == 1


def test_les_check_accepts_a_chain_inclusion():
    """The vertex a includes into the interval as a subcomplex."""
    sub = TruncatedComplex.build({(0, 1): ["a"]}, lambda label, cell: {})
    quot = TruncatedComplex.build(
        {(0, 1): ["b"], (1, 1): ["e"]}, lambda label, cell: {"b": Fraction(1)} if label == "e" else {}
    )
    report = les_check(sub, _interval(), quot, inclusion={(0, 1): [{0: Fraction(1)}]})
    assert report.ok
    assert report.checked == 2


def test_les_check_rejects_a_map_that_ignores_the_differential():
    """Sending e to e and a to a is not a chain map when d(e) = a in the source."""
    sub = TruncatedComplex.build(
        {(0, 1): ["a"], (1, 1): ["e"]}, lambda label, cell: {"a": Fraction(1)} if label == "e" else {}
    )
    quot = TruncatedComplex.build({(0, 1): ["b"]}, lambda label, cell: {})
    inclusion = {(0, 1): [{0: Fraction(1)}], (1, 1): [{0: Fraction(1)}]}
    report = les_check(sub, _interval(), quot, inclusion=inclusion)
    assert any("does not commute" in v.detail for v in report.violations)


def test_les_check_rejects_a_non_injective_map():
    """A zero row cannot be an inclusion."""
    sub = TruncatedComplex.build({(0, 1): ["a"]}, lambda label, cell: {})
    quot = TruncatedComplex.build(
        {(0, 1): ["b"], (1, 1): ["e"]}, lambda label, cell: {"b": Fraction(1)} if label == "e" else {}
    )
    report = les_check(sub, _interval(), quot, inclusion={(0, 1): [{}]})
    assert [v.detail for v in report.violations] == ["inclusion is not injective on this cell"]


def test_les_check_rejects_dimension_mismatch():
    """Chain dimensions must add up."""
    empty = TruncatedComplex.build({}, lambda label, cell: {})
    with pytest.raises(ChainComplexError):
        les_check(empty, _interval(), empty)


def test_betti_table_grid_rendering():
    """The grid has one row per hdeg and marks lower bounds with '*'."""
    table = BettiTable.from_dims({(0, 0): 1, (1, 2): 3}, {(1, 2)})
    grid = table.to_grid().splitlines()
    assert grid[0].split() == ["h\\w", "0", "2"]
    assert grid[2].split() == ["1", ".", "3*"]
    assert table.euler() == {0: 1, 2: -3}
