"""Tests for truncated series, Euler characteristics, Molien-Weyl and necklace identities."""

import pytest

from drep.cyclic import cyclic_complex
from drep.errors import SeriesError
from drep.homology import betti
from drep.presentations.builtins import commuting_plane, dual_numbers
from drep.series import (
    PowerSeries,
    chi_rep,
    chi_sym_hc,
    good_cyclic_count,
    good_cyclic_counts_by_length,
    m_trains,
    molien_weyl,
    necklace_brute_force,
    necklace_counts,
    one_minus_monomial_power,
    split_parity,
    trains_match_closed,
    verify_identity,
    zeta_closed,
    zeta_trains,
)


def test_binomial_series():
    """(1 - q)^2 terminates and (1 - q)^-1 is geometric."""
    assert one_minus_monomial_power(("q",), 4, (1,), 2).coefficients() == [1, -2, 1, 0, 0]
    assert one_minus_monomial_power(("q",), 4, (1,), -1).coefficients() == [1, 1, 1, 1, 1]
    assert one_minus_monomial_power(("q",), 4, (2,), -2).coefficients() == [1, 0, 2, 0, 3]


def test_inverse_needs_a_unit_constant_term():
    """1 - q inverts; 2 + q does not over the integers."""
    geometric = PowerSeries.from_list([1, -1], 5).inverse()
    assert geometric.coefficients() == [1] * 6
    with pytest.raises(SeriesError):
        PowerSeries.from_list([2, 1], 5).inverse()


def test_series_truncation_must_agree():
    """Series of different orders cannot be combined."""
    with pytest.raises(SeriesError):
        PowerSeries.from_list([1], 3) + PowerSeries.from_list([1], 4)


def test_chi_rep_values():
    """chi(R_1) for the dual numbers and for the commuting plane."""
    assert chi_rep(dual_numbers(3).census(3), 1, 3).coefficients() == [1, 1, 0, 1]
    assert chi_rep(commuting_plane().census(2), 1, 2).coefficients() == [1, 2, 2]


def test_zeta_of_dual_numbers():
    """zeta(k[x]/(x^2)) through q^9."""
    assert zeta_closed(dual_numbers(9).census(9), 9).coefficients() == [1, 1, 1, 2, 2, 3, 4, 5, 6, 8]


def test_m_trains():
    """1-trains are the initial segments 1, 2, ..., k."""
    assert list(m_trains(1, 3)) == [(1,), (1, 2), (1, 2, 3)]
    assert len(list(m_trains(2, 3))) == 4
    with pytest.raises(SeriesError):
        list(m_trains(0, 3))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_trains_match_the_closed_form(m):
    """Train enumeration reproduces zeta of k[x]/(x^{m+1})."""
    report = trains_match_closed(m, 20)
    assert report.verified, report.first_mismatch


def test_zeta_trains_for_dual_numbers():
    """m = 1 trains give the dual-numbers zeta function."""
    assert zeta_trains(1, 9).coefficients() == [1, 1, 1, 2, 2, 3, 4, 5, 6, 8]


def test_necklace_counts():
    """Phi_2(2) = 3, M_2(2) = 1 and M_3(2) = 2."""
    counts = necklace_counts(2, 3)
    assert counts[2] == (3, 1)
    assert counts[3][1] == 2
    assert necklace_brute_force(2, 6) == necklace_counts(2, 6)[6]
    with pytest.raises(SeriesError):
        necklace_counts(0, 3)


def test_good_cyclic_counts():
    """Odd letters: s x s x is bad, s x and s x1 s x2 are good."""
    assert good_cyclic_count(1, [2]) == 0
    assert good_cyclic_count(1, [1]) == 1
    assert good_cyclic_count(2, [1, 1]) == 1
    assert good_cyclic_counts_by_length(1, 4) == {1: 1, 2: 0, 3: 1, 4: 0}
    with pytest.raises(SeriesError):
        good_cyclic_count(2, [1])


def test_word_length_cap(monkeypatch):
    """Enumeration beyond DREP_WORD_LENGTH_CAP is refused."""
    monkeypatch.setenv("DREP_WORD_LENGTH_CAP", "3")
    with pytest.raises(SeriesError):
        good_cyclic_count(1, [4])


@pytest.mark.parametrize("which", ["cid1", "cid2:2", "cid2:3"])
def test_product_identities(which):
    """The odd-part and truncated product identities hold through q^30."""
    report = verify_identity(which, 30)
    assert report.verified, report.first_mismatch


def test_multigraded_identity_in_two_letters():
    """The multigraded good-word identity holds in low total degree."""
    assert verify_identity("cidd:2", 6).verified


@pytest.mark.slow
def test_necklace_identity_in_two_letters():
    """Both single-variable forms hold through q^14."""
    report = verify_identity("cidd1:2", 14)
    assert report.verified
    assert report.meta["good_word_form_verified"]


def test_unknown_identities_are_rejected():
    """Bad names and missing parameters raise SeriesError."""
    with pytest.raises(SeriesError):
        verify_identity("nope", 5)
    with pytest.raises(SeriesError):
        verify_identity("cid2:x", 5)


def test_molien_weyl_at_n_equal_one_is_chi_rep():
    """For n = 1 the torus integral is trivial."""
    census = dual_numbers(12).census(12)
    assert molien_weyl(census, 1, 12) == chi_rep(census, 1, 12)


def test_molien_weyl_low_coefficients_match_zeta():
    """Coefficients of q^s for s <= n agree with zeta."""
    census = dual_numbers(6).census(6)
    zeta = zeta_closed(census, 6).coefficients()
    for n in (1, 2, 3):
        mw = molien_weyl(census, n, 6).coefficients()
        assert mw[: n + 1] == zeta[: n + 1]
    assert molien_weyl(census, 2, 6).coefficient(2) == 1


def test_molien_weyl_needs_positive_n():
    """n = 0 is an error."""
    with pytest.raises(SeriesError):
        molien_weyl(dual_numbers(3).census(3), 0, 3)


def test_euler_series_of_free_closure_on_cyclic_homology_is_zeta():
    """chi of Lambda[HC(k[x]/(x^2))] from the Betti table equals zeta."""
    table = betti(cyclic_complex(dual_numbers(7), 7))
    even, odd = split_parity(table.nonzero().items())
    assert odd == {}
    assert chi_sym_hc(even, odd, 7) == zeta_closed(dual_numbers(7).census(7), 7)
