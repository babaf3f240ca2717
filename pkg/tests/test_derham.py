"""Tests for noncommutative forms, the commutative de Rham algebra and their comparison."""

import pytest

from drep.derham import (
    FormPresentation,
    comm_derham,
    form_name,
    nc_forms,
    p3_check,
    reduced_hdr,
    stable_derham,
)
from drep.errors import PresentationError
from drep.graded import NCPoly
from drep.presentations.builtins import commuting_plane, dual_numbers, free
from drep.representation import rep_n


def test_form_generators_sit_one_degree_lower():
    """Dg has the weight of g and one homological degree less."""
    forms = FormPresentation(dual_numbers(3))
    for g in dual_numbers(3).generators:
        dg = forms.alphabet[forms.alphabet.index(form_name(g.name))]
        assert (dg.hdeg, dg.weight) == (g.hdeg - 1, g.weight)
    assert len(forms.alphabet) == 2 * len(dual_numbers(3).alphabet)


def test_total_differential_adds_the_form():
    """On k<x> the total differential is x -> Dx."""
    forms = nc_forms(free(1))
    assert forms.d(forms.alphabet.index("x")) == NCPoly.generator(forms.alphabet, "Dx")


@pytest.mark.parametrize("pres", [free(2), dual_numbers(4), commuting_plane()])
def test_forms_anticommute(pres):
    """D^2 = 0, d D + D d = 0 and (d + D)^2 = 0 on words of up to two letters."""
    forms = nc_forms(pres)
    report = forms.forms_report()
    assert report.ok
    letters = len(forms.alphabet)
    assert report.checked == letters + letters**2
    assert forms.verify_d_squared(4).ok


@pytest.mark.parametrize("pres", [free(1), commuting_plane()])
def test_reduced_de_rham_vanishes(pres):
    """The reduced cyclic de Rham homology of a positively weighted algebra is zero."""
    assert reduced_hdr(pres, 5).nonzero() == {}


def test_commutative_de_rham_squares_to_zero():
    """DR(R_1) of the commuting plane is a CDGA."""
    dr = comm_derham(rep_n(commuting_plane(), 1))
    assert len(dr.variables) == 6
    assert dr.verify_d_squared(4).ok


@pytest.mark.parametrize("n", [1, 2])
def test_forms_commute_with_representation_functor(n):
    """Forms(R)_n agrees with DR(R_n) generator by generator."""
    report = p3_check(commuting_plane(), n, 4)
    assert report.ok, report.violations[:1]
    assert report.checked == 6 * n * n


@pytest.mark.parametrize("pres", [dual_numbers(5), commuting_plane()])
def test_stable_de_rham_is_the_ground_field(pres):
    """Only the unit survives in Lambda[C(Forms(R))]."""
    assert stable_derham(pres, 5).nonzero() == {(0, 0): 1}


def _even_partial(self, p):
    def image(pos):
        target = self.form_of.get(pos)
        return NCPoly.zero(p.alphabet) if target is None else NCPoly.word(p.alphabet, (target,))

    return p.apply_derivation(image, parity=0)


def test_an_even_universal_derivation_is_rejected(monkeypatch):
    """An even D breaks D^2 = 0 on two-letter words."""
    monkeypatch.setattr("drep.derham.FormPresentation.partial", _even_partial)
    with pytest.raises(PresentationError, match=r"D\^2"):
        nc_forms(free(2))
