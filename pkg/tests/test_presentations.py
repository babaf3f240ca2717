"""Tests for builtin resolutions, the presentation file format and the census."""

from fractions import Fraction

import pytest

from drep.errors import (
    CellBudgetExceeded,
    IncompletePresentationError,
    MissingDifferentialError,
    PresentationError,
    PresentationSyntaxError,
)
from drep.presentations import CommDGA, load_presentation, parse_presentation, require_dga
from drep.presentations.builtins import (
    builtin_resolution,
    commuting_plane,
    dual_numbers,
    sandwich,
    square_zero,
    truncated,
    truncated_census,
)

SAMPLE = """\
# a quadratic relation
complete-to-weight 4
resolves k[x]/(x^2)
generator x hdeg 0 weight 1
generator t hdeg 1 weight 2
d t = x*x - 1/2*x^2
"""


def test_dual_numbers_differential():
    """d x2 = x x1 - x1 x."""
    pres = dual_numbers(4)
    a = pres.alphabet
    dx2 = pres.differential_of("x2")
    assert dx2.coefficient((a.index("x"), a.index("x1"))) == 1
    assert dx2.coefficient((a.index("x1"), a.index("x"))) == -1
    assert pres.differential_of("x1").coefficient((a.index("x"), a.index("x"))) == 1


@pytest.mark.parametrize(
    "pres, weight",
    [(dual_numbers(10), 10), (square_zero(2, 6), 6), (commuting_plane(), 8), (sandwich(), 4)],
)
def test_builtins_square_to_zero(pres, weight):
    """Every builtin differential satisfies d^2 = 0."""
    report = pres.verify_d_squared(weight)
    assert report.ok
    assert report.checked > 0


def test_census_counts_even_minus_odd():
    """The dual numbers have one generator per weight with alternating parity."""
    assert dual_numbers(5).census(5).as_list() == [1, -1, 1, -1, 1]
    assert square_zero(2, 3).census(3).as_list() == [2, -4, 8]
    assert commuting_plane().census(3).counts == {1: 2, 2: -1}


def test_truncated_census():
    """k[x]/(x^3) has generators in weights 1, 3, 4, 6, 7 with alternating signs."""
    assert truncated_census(2, 7) == {1: 1, 3: -1, 4: 1, 6: -1, 7: 1}
    assert truncated(2, 7).census(7).counts == truncated_census(2, 7)


def test_census_only_presentations_have_no_differential():
    """Resolutions known only by census refuse to act as DG algebras."""
    with pytest.raises(MissingDifferentialError):
        require_dga(truncated(2, 6))


def test_completeness_bound_is_enforced():
    """The sandwich presentation is only complete through weight 4."""
    with pytest.raises(IncompletePresentationError):
        sandwich().verify_d_squared(5)
    with pytest.raises(IncompletePresentationError):
        dual_numbers(3).census(4)


def test_builtin_resolution_parses_parameters():
    """name:param and name(param) are both accepted."""
    assert builtin_resolution("square-zero:2", 3).name == "square-zero:2"
    assert builtin_resolution("square-zero(2)", 3).name == "square-zero:2"
    assert load_presentation("builtin:commuting-plane", 4).name == "commuting-plane"
    with pytest.raises(PresentationError):
        builtin_resolution("no-such-thing", 3)
    with pytest.raises(PresentationError):
        builtin_resolution("dual-numbers:3", 3)


def test_parse_presentation_file_format():
    """Coefficients, powers and directives are read."""
    pres = parse_presentation(SAMPLE, name="sample")
    x = pres.alphabet.index("x")
    assert pres.complete_to_weight == 4
    assert pres.resolves == "k[x]/(x^2)"
    assert pres.differential_of("t").coefficient((x, x)) == Fraction(1, 2)


def test_canonical_text_reparses_to_itself():
    """The canonical rendering is a fixed point of parse then render."""
    text = dual_numbers(5).canonical_text()
    assert parse_presentation(text).canonical_text() == text


def test_digest_ignores_comments_and_spacing():
    """Two spellings of one presentation share a digest."""
    spaced = SAMPLE.replace("d t = x*x - 1/2*x^2", "d t =   1/2*x*x   # same thing")
    assert parse_presentation(SAMPLE).digest() == parse_presentation(spaced).digest()


@pytest.mark.parametrize(
    "text, error",
    [
        ("generator x hdeg 0 weight 1\ngenerator t hdeg 1 weight 2\nd t = x\n", PresentationError),
        ("generator x hdeg 0 weight 1\nd x = x\n", PresentationError),
        ("generator x hdeg 0 weight 1\ngenerator x hdeg 1 weight 1\n", PresentationError),
        ("generator x hdeg 0 weight 0\n", PresentationError),
        ("generator t hdeg 1 weight 2\nd t = y*y\n", PresentationError),
        ("generator x hdeg 0 weight 1\ngenerator t hdeg 1 weight 2\nd t = x * $\n", PresentationSyntaxError),
        ("gen x\n", PresentationSyntaxError),
    ],
)
def test_malformed_presentations_are_rejected(text, error):
    """Degree, weight, naming and syntax problems raise typed errors."""
    with pytest.raises(error):
        parse_presentation(text)


def test_syntax_errors_carry_the_line_number():
    """The offending line is reported."""
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation("generator x hdeg 0 weight 1\n\nbogus line\n")
    assert info.value.line == 3


def test_commutative_files_build_a_commutative_algebra(tmp_path):
    """A leading 'commutative' line yields a CommDGA; files load by path."""
    path = tmp_path / "plane.pres"
    path.write_text("commutative\ngenerator u hdeg 1 weight 1\ngenerator z hdeg 0 weight 1\n", encoding="utf-8")
    pres = load_presentation(str(path), 4)
    assert isinstance(pres, CommDGA)
    assert pres.name == "plane"
    assert pres.census(2).counts == {}


PLANE = "commutative\ngenerator x hdeg 0 weight 1\ngenerator y hdeg 0 weight 1\n"


def test_monomial_budget_stops_enumeration_at_the_first_overflow():
    """The error fires when a cell first passes the budget."""
    pres = parse_presentation(PLANE)
    with pytest.raises(CellBudgetExceeded) as info:
        pres.monomials_by_cell(6, budget=2)
    assert info.value.report["size"] == 3
    assert info.value.report["budget"] == 2


def test_monomial_budget_applies_to_cached_cells():
    """A smaller budget is enforced on a later call."""
    pres = parse_presentation(PLANE)
    cells = pres.monomials_by_cell(2)
    assert len(cells[(0, 2)]) == 3
    assert pres.monomials_by_cell(2, budget=3) is cells
    with pytest.raises(CellBudgetExceeded) as info:
        pres.monomials_by_cell(2, budget=2)
    assert (info.value.report["hdeg"], info.value.report["weight"]) == (0, 2)


def test_missing_file_is_a_presentation_error(tmp_path):
    """Unreadable paths surface as PresentationError."""
    with pytest.raises(PresentationError, match="cannot read presentation"):
        load_presentation(str(tmp_path / "absent.pres"), 2)
