"""Built-in free resolutions.

Every builtin is generated into the same in-memory form as a parsed file and
materializes generators up to a weight cutoff, which becomes its completeness
bound.
"""

from __future__ import annotations

import itertools
import logging
import re
from fractions import Fraction
from typing import Callable

from drep.errors import ChainComplexError, PresentationError
from drep.graded import Alphabet, Generator, NCPoly
from drep.presentations.base import BasePresentation, CensusPresentation, DGAPresentation

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 12


def dual_name(k: int) -> str:
    return "x" if k == 0 else f"x{k}"


def dual_numbers(max_weight: int = DEFAULT_CUTOFF) -> DGAPresentation:
    """k<x, x1, x2, ...> resolving k[x]/(x^2): d x_i = sum_j (-1)^j x_j x_{i-1-j}."""
    gens = [Generator(name=dual_name(i), hdeg=i, weight=i + 1) for i in range(max(max_weight, 0))]
    alphabet = Alphabet(gens)
    diffs: dict[str, NCPoly] = {}
    for i in range(1, len(gens)):
        terms: dict[tuple[int, ...], Fraction] = {}
        for j in range(i):
            word = (alphabet.index(dual_name(j)), alphabet.index(dual_name(i - 1 - j)))
            terms[word] = terms.get(word, 0) + (-1) ** j
        diffs[dual_name(i)] = NCPoly(alphabet, terms)
    return DGAPresentation(
        gens, diffs, name="dual-numbers", complete_to_weight=max_weight, resolves="k[x]/(x^2)"
    )


def square_zero_name(d: int, word: tuple[int, ...]) -> str:
    if d == 1:
        return dual_name(len(word) - 1)
    return "y" + "".join(str(letter) for letter in word)


def square_zero(d: int, max_weight: int = DEFAULT_CUTOFF) -> DGAPresentation:
    """Cobar resolution of k + V with V^2 = 0, dim V = d.

    One generator y_w per nonempty word w in d letters, hdeg len(w) - 1 and
    weight len(w), with d y_w = sum over w = uv of (-1)^{hdeg y_u} y_u y_v.
    """
    if d < 1:
        raise PresentationError(f"square-zero needs d >= 1, got {d}")
    if d > 9:
        raise PresentationError("square-zero names letters by single digits; d <= 9")
    words = [w for length in range(1, max_weight + 1) for w in itertools.product(range(1, d + 1), repeat=length)]
    gens = [Generator(name=square_zero_name(d, w), hdeg=len(w) - 1, weight=len(w)) for w in words]
    alphabet = Alphabet(gens)
    diffs: dict[str, NCPoly] = {}
    for w in words:
        if len(w) < 2:
            continue
        terms: dict[tuple[int, ...], Fraction] = {}
        for cut in range(1, len(w)):
            u, v = w[:cut], w[cut:]
            key = (alphabet.index(square_zero_name(d, u)), alphabet.index(square_zero_name(d, v)))
            terms[key] = terms.get(key, 0) + (-1) ** (len(u) - 1)
        diffs[square_zero_name(d, w)] = NCPoly(alphabet, terms)
    pres = DGAPresentation(
        gens,
        diffs,
        name="dual-numbers" if d == 1 else f"square-zero:{d}",
        complete_to_weight=max_weight,
        resolves=f"k + k^{d}, square zero",
    )
    report = pres.verify_d_squared(max_weight)
    if not report.ok:
        raise ChainComplexError(f"square-zero({d}) differential fails d^2 = 0: {report.violations[0].detail}")
    return pres


def commuting_plane(max_weight: int | None = None) -> DGAPresentation:
    """k<x, y, t> with dt = xy - yx, resolving k[x, y]."""
    gens = [
        Generator(name="x", hdeg=0, weight=1),
        Generator(name="y", hdeg=0, weight=1),
        Generator(name="t", hdeg=1, weight=2),
    ]
    alphabet = Alphabet(gens)
    x, y = alphabet.index("x"), alphabet.index("y")
    dt = NCPoly(alphabet, {(x, y): Fraction(1), (y, x): Fraction(-1)})
    return DGAPresentation(gens, {"t": dt}, name="commuting-plane", resolves="k[x,y]")


def sandwich(max_weight: int | None = None) -> DGAPresentation:
    """Partial presentation of k<x, y>/(x[x, y]y): dt = xxyy - xyxy, complete to weight 4."""
    gens = [
        Generator(name="x", hdeg=0, weight=1),
        Generator(name="y", hdeg=0, weight=1),
        Generator(name="t", hdeg=1, weight=4),
    ]
    alphabet = Alphabet(gens)
    x, y = alphabet.index("x"), alphabet.index("y")
    dt = NCPoly(alphabet, {(x, x, y, y): Fraction(1), (x, y, x, y): Fraction(-1)})
    return DGAPresentation(
        gens, {"t": dt}, name="sandwich", complete_to_weight=4, resolves="k<x,y>/(x[x,y]y)"
    )


def free(d: int = 1, max_weight: int | None = None) -> DGAPresentation:
    """k<x1, ..., xd> with zero differential (k<x> for d = 1)."""
    names = ["x"] if d == 1 else [f"x{i}" for i in range(1, d + 1)]
    return DGAPresentation(
        [Generator(name=n, hdeg=0, weight=1) for n in names], {}, name=f"free:{d}", resolves=f"k<{d} letters>"
    )


def truncated_census(m: int, max_weight: int) -> dict[int, int]:
    """Coefficients of q - q^{m+1}/(1 + q + ... + q^m)."""
    counts: dict[int, int] = {}
    for i in range(1, max_weight + 1):
        c = 1 if i == 1 else 0
        if i >= m + 1 and i % (m + 1) == 0:
            c -= 1
        if i >= m + 2 and i % (m + 1) == 1:
            c += 1
        if c:
            counts[i] = c
    return counts


def truncated(m: int, max_weight: int = DEFAULT_CUTOFF) -> BasePresentation:
    """Resolution of k[x]/(x^{m+1}).

    For m = 1 this is the dual-numbers resolution; for m >= 2 only the census
    is known.
    """
    if m < 1:
        raise PresentationError(f"truncated needs m >= 1, got {m}")
    if m == 1:
        return dual_numbers(max_weight)
    return CensusPresentation(truncated_census(m, max_weight), name=f"truncated:{m}", max_weight=max_weight)


BUILTINS: dict[str, Callable[..., BasePresentation]] = {
    "dual-numbers": lambda max_weight: dual_numbers(max_weight),
    "square-zero": lambda max_weight, d=1: square_zero(d, max_weight),
    "commuting-plane": lambda max_weight: commuting_plane(max_weight),
    "sandwich": lambda max_weight: sandwich(max_weight),
    "truncated": lambda max_weight, m=1: truncated(m, max_weight),
    "free": lambda max_weight, d=1: free(d, max_weight),
}

_PARAMETRIC = {"square-zero": "d", "truncated": "m", "free": "d"}
_SPEC = re.compile(r"^(?P<name>[a-z\-]+)(?:[:(](?P<param>\d+)\)?)?$")


def builtin_resolution(spec: str, max_weight: int = DEFAULT_CUTOFF) -> BasePresentation:
    """Build a builtin from ``name``, ``name:param`` or ``name(param)``."""
    m = _SPEC.match(spec.strip())
    if not m or m.group("name") not in BUILTINS:
        raise PresentationError(
            f"unknown builtin {spec!r}; available: {', '.join(sorted(BUILTINS))}"
        )
    name, param = m.group("name"), m.group("param")
    factory = BUILTINS[name]
    if param is not None:
        if name not in _PARAMETRIC:
            raise PresentationError(f"builtin {name} takes no parameter")
        pres = factory(max_weight, **{_PARAMETRIC[name]: int(param)})
    else:
        pres = factory(max_weight)
    logger.debug(f"built {pres!r} up to weight {max_weight}")
    return pres
