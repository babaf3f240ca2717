"""Tests for signed rotation, good and bad words and the reduced cyclic complex."""

from fractions import Fraction

import pytest

from drep.cyclic import (
    canonical_cyclic,
    cyclic_basis,
    cyclic_complex,
    cyclic_derivative,
    cyclic_projection,
    is_bad,
    norm_operator,
    rotate,
    rotations,
)
from drep.errors import PresentationError
from drep.graded import NCPoly
from drep.homology import betti
from drep.presentations.builtins import commuting_plane, dual_numbers, free


def _letters():
    a = dual_numbers(3).alphabet
    return a, a.index("x"), a.index("x1")


def test_rotation_sign_follows_the_moved_letter():
    """Moving an odd letter past an odd prefix costs a sign."""
    a, x, x1 = _letters()
    assert rotate(a, (x, x1)) == ((x1, x), 1)
    assert rotate(a, (x1, x1)) == ((x1, x1), -1)
    assert [s for _, s in rotations(a, (x1, x, x1))] == [1, -1, -1]


def test_empty_word_cannot_rotate():
    """Rotation needs at least one letter."""
    a, _, _ = _letters()
    with pytest.raises(PresentationError):
        rotate(a, ())


def test_odd_square_is_bad():
    """x1 x1 rotates to minus itself; its norm vanishes."""
    a, x, x1 = _letters()
    assert is_bad(a, (x1, x1))
    assert not is_bad(a, (x, x))
    assert not norm_operator(a, (x1, x1))
    assert canonical_cyclic(a, (x1, x1)) is None


def test_canonical_representative_is_the_minimal_rotation():
    """[x1 x] = [x x1] with the sign of the rotation."""
    a, x, x1 = _letters()
    cw, sign = canonical_cyclic(a, (x1, x))
    assert cw.word == (x, x1)
    assert sign == 1
    assert (cw.hdeg, cw.weight) == (1, 3)


def test_projection_identifies_rotations():
    """x x1 - x1 x lies in the commutator subspace."""
    a, x, x1 = _letters()
    commutator = NCPoly.word(a, (x, x1)) - NCPoly.word(a, (x1, x))
    assert cyclic_projection(commutator) == {}
    assert len(cyclic_projection(NCPoly.word(a, (x, x1)))) == 1


def test_cyclic_derivative():
    """d/dx (x x x) = 3 x x and d/dx1 (x1 x1) = 0."""
    a, x, x1 = _letters()
    assert cyclic_derivative(NCPoly.word(a, (x, x, x)), "x") == NCPoly.word(a, (x, x), 3)
    assert not cyclic_derivative(NCPoly.word(a, (x1, x1)), "x1")


def test_cyclic_basis_counts():
    """One class per weight for k<x>; three quadratic classes for k<x, y>."""
    assert {cell: len(words) for cell, words in cyclic_basis(free(1), 4).items()} == {
        (0, 1): 1,
        (0, 2): 1,
        (0, 3): 1,
        (0, 4): 1,
    }
    assert len(cyclic_basis(commuting_plane(), 2)[(0, 2)]) == 3


def test_cyclic_homology_of_dual_numbers():
    """HC_{2j} is one-dimensional in weight 2j + 1 and everything else vanishes."""
    table = betti(cyclic_complex(dual_numbers(7), 7))
    assert table.nonzero() == {(0, 1): 1, (2, 3): 1, (4, 5): 1, (6, 7): 1}


@pytest.mark.slow
def test_cyclic_homology_of_dual_numbers_to_weight_nine():
    """The pattern continues through weight 9."""
    table = betti(cyclic_complex(dual_numbers(9), 9))
    assert table.nonzero() == {(2 * j, 2 * j + 1): 1 for j in range(5)}


def test_cyclic_differential_kills_the_square_class():
    """d[x1] = [x x], so [x x] is a boundary."""
    pres = dual_numbers(2)
    c = cyclic_complex(pres, 2)
    assert c.dim(0, 2) == 1 and c.dim(1, 2) == 1
    assert c.matrix(1, 2) == ({0: Fraction(1)},)
