"""Truncated power series: Euler characteristics, zeta products, Molien-Weyl and necklace counts.

All coefficients are integers. Division only happens by a constant term of
+-1 or by n! in the Weyl integration formula, and a non-integral result there
is an error.
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from sympy import divisors, mobius, totient
from sympy.utilities.iterables import multiset_permutations

from drep.config import get_settings
from drep.cyclic import is_canonical_good
from drep.errors import CellBudgetExceeded, SeriesError
from drep.graded import Alphabet, Generator
from drep.models import SeriesReport
from drep.presentations.base import GeneratorCensus
from drep.presentations.builtins import truncated_census

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]


class PowerSeries:
    """Integer power series in one or more variables, truncated at total degree ``order``."""

    __slots__ = ("variables", "order", "_coeffs")

    def __init__(self, variables: Sequence[str], order: int, coeffs: Mapping[Exponent, int] | None = None) -> None:
        self.variables = tuple(variables)
        self.order = order
        nvars = len(self.variables)
        clean: dict[Exponent, int] = {}
        for exps, c in (coeffs or {}).items():
            if len(exps) != nvars:
                raise SeriesError(f"exponent {exps} does not match variables {self.variables}")
            if c and sum(exps) <= order:
                clean[tuple(exps)] = clean.get(tuple(exps), 0) + int(c)
        self._coeffs = {e: c for e, c in clean.items() if c}

    @classmethod
    def one(cls, variables: Sequence[str] = ("q",), order: int = 0) -> "PowerSeries":
        return cls(variables, order, {(0,) * len(variables): 1})

    @classmethod
    def from_list(cls, coefficients: Sequence[int], order: Optional[int] = None) -> "PowerSeries":
        order = len(coefficients) - 1 if order is None else order
        return cls(("q",), order, {(i,): c for i, c in enumerate(coefficients)})

    def _like(self, coeffs: Mapping[Exponent, int]) -> "PowerSeries":
        return PowerSeries(self.variables, self.order, coeffs)

    def _check(self, other: "PowerSeries") -> None:
        if self.variables != other.variables or self.order != other.order:
            raise SeriesError("series differ in variables or truncation order")

    def coefficient(self, exps: Exponent | int) -> int:
        if isinstance(exps, int):
            exps = (exps,)
        return self._coeffs.get(tuple(exps), 0)

    def coefficients(self) -> list[int]:
        """Univariate coefficient list [c_0, ..., c_order]."""
        if len(self.variables) != 1:
            raise SeriesError("coefficients() needs a univariate series")
        return [self._coeffs.get((i,), 0) for i in range(self.order + 1)]

    def items(self) -> list[tuple[Exponent, int]]:
        return sorted(self._coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.variables == other.variables and self.order == other.order and self._coeffs == other._coeffs

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return self._like(out)

    def __neg__(self) -> "PowerSeries":
        return self._like({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return self + (-other)

    def __mul__(self, other: "PowerSeries | int") -> "PowerSeries":
        if isinstance(other, int):
            return self._like({e: c * other for e, c in self._coeffs.items()})
        self._check(other)
        out: dict[Exponent, int] = {}
        order = self.order
        for e1, c1 in self._coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other._coeffs.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._like(out)

    def inverse(self) -> "PowerSeries":
        """Multiplicative inverse; the constant term must be +1 or -1."""
        zero = (0,) * len(self.variables)
        c0 = self._coeffs.get(zero, 0)
        if c0 not in (1, -1):
            raise SeriesError(f"constant term {c0} is not invertible over the integers")
        by_degree: dict[int, list[tuple[Exponent, int]]] = {}
        for e, c in self._coeffs.items():
            if e != zero:
                by_degree.setdefault(sum(e), []).append((e, c))
        result: dict[Exponent, int] = {zero: c0}
        result_by_degree: dict[int, list[Exponent]] = {0: [zero]}
        for k in range(1, self.order + 1):
            acc: dict[Exponent, int] = {}
            for j in range(1, k + 1):
                for e1, c1 in by_degree.get(j, ()):
                    for e2 in result_by_degree.get(k - j, ()):
                        e = tuple(a + b for a, b in zip(e1, e2))
                        acc[e] = acc.get(e, 0) + c1 * result[e2]
            for e, v in acc.items():
                if v:
                    result[e] = -c0 * v
                    result_by_degree.setdefault(k, []).append(e)
        return self._like(result)

    def __pow__(self, k: int) -> "PowerSeries":
        base = self if k >= 0 else self.inverse()
        out = PowerSeries.one(self.variables, self.order)
        for _ in range(abs(k)):
            out = out * base
        return out

    def first_mismatch(self, other: "PowerSeries") -> Optional[int]:
        """Smallest total degree at which the two series differ."""
        self._check(other)
        diff = (self - other)._coeffs
        return min((sum(e) for e in diff), default=None)

    def render(self) -> str:
        pieces = []
        for e, c in self.items():
            mono = "*".join(
                v if p == 1 else f"{v}^{p}" for v, p in zip(self.variables, e) if p
            ) or "1"
            pieces.append(f"{c}" if mono == "1" else f"{c}*{mono}")
        return " + ".join(pieces) if pieces else "0"

    def __repr__(self) -> str:
        return f"PowerSeries({self.render()} + O({self.order + 1}))"


def one_minus_monomial_power(variables: Sequence[str], order: int, exps: Exponent, power: int) -> PowerSeries:
    """(1 - q^exps)^power for any integer power, by the generalized binomial series."""
    step = sum(exps)
    if step == 0:
        raise SeriesError("(1 - 1)^k is not a unit")
    coeffs: dict[Exponent, int] = {}
    c = 1
    j = 0
    while j * step <= order:
        coeffs[tuple(j * x for x in exps)] = c
        if power >= 0 and j >= power:
            break
        # coefficient of u^{j+1} in (1 - u)^power; the division is exact
        c = -c * (power - j) // (j + 1)
        j += 1
    return PowerSeries(variables, order, coeffs)


def _q(order: int, coeffs: Mapping[int, int]) -> PowerSeries:
    return PowerSeries(("q",), order, {(e,): c for e, c in coeffs.items()})


# ---------------------------------------------------------------------------
# Euler characteristics and zeta functions
# ---------------------------------------------------------------------------


def chi_rep(census: GeneratorCensus, n: int, order: int) -> PowerSeries:
    """prod_i (1 - q^i)^{-d_i n^2}."""
    out = PowerSeries.one(("q",), order)
    for i in range(1, order + 1):
        d = census.d(i)
        if d and n:
            out = out * one_minus_monomial_power(("q",), order, (i,), -d * n * n)
    return out


def zeta_closed(census: GeneratorCensus, order: int) -> PowerSeries:
    """prod_{s >= 1} (1 - sum_i d_i q^{si})^{-1}."""
    out = PowerSeries.one(("q",), order)
    for s in range(1, order + 1):
        factor = {0: 1}
        for i in range(1, order // s + 1):
            d = census.d(i)
            if d:
                factor[s * i] = factor.get(s * i, 0) - d
        out = out * _q(order, factor).inverse()
    return out


def m_trains(m: int, max_last: int) -> Iterator[tuple[int, ...]]:
    """Increasing sequences starting at 1 with consecutive gaps in 1..m, last element <= max_last."""
    if m < 1:
        raise SeriesError(f"m-trains need m >= 1, got {m}")

    def extend(train: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        yield train
        for gap in range(1, m + 1):
            nxt = train[-1] + gap
            if nxt > max_last:
                break
            yield from extend(train + (nxt,))

    if max_last >= 1:
        yield from extend((1,))


def train_weight(m: int, train: Sequence[int]) -> int:
    return m + train[-1]


def zeta_trains(m: int, order: int) -> PowerSeries:
    """zeta of k[x]/(x^{m+1}) from explicit m-train enumeration."""
    signed: dict[int, int] = {}
    for train in m_trains(m, order - m):
        w = train_weight(m, train)
        signed[w] = signed.get(w, 0) + (-1) ** (len(train) - 1)
    out = PowerSeries.one(("q",), order)
    for s in range(1, order + 1):
        factor = {0: 1, s: -1}
        for w, c in signed.items():
            if s * w <= order:
                factor[s * w] = factor.get(s * w, 0) + c
        out = out * _q(order, factor).inverse()
    return out


def truncated_zeta_product(m: int, order: int) -> PowerSeries:
    """prod_s (1 + q^s + ... + q^{ms})."""
    out = PowerSeries.one(("q",), order)
    for s in range(1, order + 1):
        out = out * _q(order, {s * k: 1 for k in range(m + 1)})
    return out


def chi_sym_hc(even: Mapping[int, int], odd: Mapping[int, int], order: int) -> PowerSeries:
    """prod_i (1 - q^i)^{b_i - a_i} for even dims a and odd dims b per weight."""
    out = PowerSeries.one(("q",), order)
    for i in range(1, order + 1):
        e = odd.get(i, 0) - even.get(i, 0)
        if e:
            out = out * one_minus_monomial_power(("q",), order, (i,), e)
    return out


# ---------------------------------------------------------------------------
# Molien-Weyl
# ---------------------------------------------------------------------------


class LaurentSeries:
    """q-series whose coefficients are Laurent polynomials in z_1..z_n.

    Stored as z-exponent -> [c_0, ..., c_T]; z-exponents beyond +-(T + n) are pruned.
    """

    __slots__ = ("n", "order", "terms", "bound")

    def __init__(self, n: int, order: int) -> None:
        self.n = n
        self.order = order
        self.bound = order + n
        self.terms: dict[Exponent, list[int]] = {(0,) * n: [1] + [0] * order}

    def scale_diagonal(self, series: PowerSeries) -> None:
        coeffs = series.coefficients()
        for z, qs in list(self.terms.items()):
            self.terms[z] = _mul_q(qs, coeffs, self.order)

    def multiply_root_factor(self, a: int, b: int, i: int, power: int, budget: int) -> None:
        """Multiply by (1 - z_a/z_b q^i)^power."""
        binom = one_minus_monomial_power(("u",), self.order // i, (1,), power).coefficients()
        out: dict[Exponent, list[int]] = {}
        for z, qs in self.terms.items():
            for k, c in enumerate(binom):
                if not c:
                    continue
                shift = i * k
                if shift > self.order:
                    break
                z2 = list(z)
                z2[a] += k
                z2[b] -= k
                if abs(z2[a]) > self.bound or abs(z2[b]) > self.bound:
                    continue
                key = tuple(z2)
                acc = out.get(key)
                if acc is None:
                    acc = out[key] = [0] * (self.order + 1)
                for e in range(self.order + 1 - shift):
                    if qs[e]:
                        acc[e + shift] += c * qs[e]
        self.terms = {z: qs for z, qs in out.items() if any(qs)}
        if len(self.terms) * (self.order + 1) > budget:
            raise CellBudgetExceeded(
                f"Molien-Weyl integrand has {len(self.terms)} torus monomials (budget {budget})",
                report={"torus_monomials": len(self.terms), "order": self.order, "budget": budget},
            )

    def constant_term_against(self, weyl: Mapping[Exponent, int]) -> list[int]:
        """CT_z of (self * weyl) = sum_m weyl_m * self_{-m}."""
        out = [0] * (self.order + 1)
        for m, w in weyl.items():
            qs = self.terms.get(tuple(-x for x in m))
            if qs:
                for e in range(self.order + 1):
                    out[e] += w * qs[e]
        return out


def _mul_q(a: Sequence[int], b: Sequence[int], order: int) -> list[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(order + 1 - i):
            if b[j]:
                out[i + j] += x * b[j]
    return out


def weyl_factor(n: int) -> dict[Exponent, int]:
    """prod_{a != b} (1 - z_a / z_b) as a Laurent polynomial."""
    poly: dict[Exponent, int] = {(0,) * n: 1}
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            out: dict[Exponent, int] = {}
            for z, c in poly.items():
                out[z] = out.get(z, 0) + c
                z2 = list(z)
                z2[a] += 1
                z2[b] -= 1
                out[tuple(z2)] = out.get(tuple(z2), 0) - c
            poly = {z: c for z, c in out.items() if c}
    return poly


def molien_weyl(census: GeneratorCensus, n: int, order: int, *, budget: Optional[int] = None) -> PowerSeries:
    """Euler series of the GL_n-invariant part by torus constant-term extraction."""
    if n < 1:
        raise SeriesError(f"Molien-Weyl needs n >= 1, got {n}")
    budget = budget if budget is not None else get_settings().drep_cell_budget
    integrand = LaurentSeries(n, order)
    diagonal = PowerSeries.one(("q",), order)
    for i in range(1, order + 1):
        d = census.d(i)
        if d:
            diagonal = diagonal * one_minus_monomial_power(("q",), order, (i,), -d * n)
    integrand.scale_diagonal(diagonal)
    for i in range(1, order + 1):
        d = census.d(i)
        if not d:
            continue
        for a in range(n):
            for b in range(n):
                if a != b:
                    integrand.multiply_root_factor(a, b, i, -d, budget)
    logger.debug(f"Molien-Weyl n={n} T={order}: {len(integrand.terms)} torus monomials")
    raw = integrand.constant_term_against(weyl_factor(n))
    fact = math.factorial(n)
    coeffs = []
    for e, c in enumerate(raw):
        if c % fact:
            raise SeriesError(f"coefficient {c} of q^{e} is not divisible by {n}!")
        coeffs.append(c // fact)
    return PowerSeries.from_list(coeffs, order)


# ---------------------------------------------------------------------------
# Necklaces and good cyclic words
# ---------------------------------------------------------------------------


def necklace_formulas(d: int, r: int) -> tuple[int, int]:
    """(Phi_r(d), M_r(d)) from the totient and Moebius sums."""
    phi = sum(int(totient(m)) * d ** (r // m) for m in divisors(r))
    mu = sum(int(mobius(k)) * d ** (r // k) for k in divisors(r))
    if phi % r or mu % r:
        raise SeriesError(f"necklace sums for d={d}, r={r} are not divisible by r")
    return phi // r, mu // r


def necklace_brute_force(d: int, r: int) -> tuple[int, int]:
    """(number of rotation orbits, number of orbits of full size r) of words of length r."""
    seen: set[tuple[int, ...]] = set()
    cyclic = primitive = 0
    for word in itertools.product(range(d), repeat=r):
        if word in seen:
            continue
        orbit = {word[k:] + word[:k] for k in range(r)}
        seen |= orbit
        cyclic += 1
        if len(orbit) == r:
            primitive += 1
    return cyclic, primitive


def necklace_counts(d: int, r_max: int, *, brute_force_up_to: int = 12) -> dict[int, tuple[int, int]]:
    """Phi_r(d) and M_r(d) for r <= r_max, cross-checked by enumeration for small r."""
    if d < 1:
        raise SeriesError(f"necklace counts need d >= 1, got {d}")
    out: dict[int, tuple[int, int]] = {}
    for r in range(1, r_max + 1):
        closed = necklace_formulas(d, r)
        if r <= brute_force_up_to and d ** r <= 2_000_000:
            brute = necklace_brute_force(d, r)
            if brute != closed:
                raise SeriesError(f"necklace formulas disagree with enumeration at d={d}, r={r}: {closed} vs {brute}")
        out[r] = closed
    return out


def odd_alphabet(d: int) -> Alphabet:
    """Letters s x_1, ..., s x_d, all odd."""
    return Alphabet(Generator(name=f"sx{i}", hdeg=1, weight=1) for i in range(1, d + 1))


def good_cyclic_count(d: int, content: Sequence[int], *, cap: Optional[int] = None) -> int:
    """Number of good cyclic words in d odd letters with r_i occurrences of letter i."""
    if len(content) != d:
        raise SeriesError(f"content {tuple(content)} does not have {d} entries")
    total = sum(content)
    cap = cap if cap is not None else get_settings().drep_word_length_cap
    if total > cap:
        raise SeriesError(f"word length {total} exceeds the enumeration cap {cap}")
    if total == 0:
        return 0
    alphabet = odd_alphabet(d)
    letters = [i for i, r in enumerate(content) for _ in range(r)]
    return sum(1 for word in multiset_permutations(letters) if is_canonical_good(alphabet, tuple(word)))


def good_cyclic_counts_by_length(d: int, max_len: int) -> dict[int, int]:
    """c_r = number of good cyclic words of length r (all contents)."""
    out: dict[int, int] = {}
    for r in range(1, max_len + 1):
        out[r] = sum(good_cyclic_count(d, content) for content in _contents(d, r))
    return out


def _contents(d: int, total: int) -> Iterator[tuple[int, ...]]:
    if d == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _contents(d - 1, total - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------


def _report(name: str, lhs: PowerSeries, rhs: PowerSeries, meta: dict | None = None) -> SeriesReport:
    mismatch = lhs.first_mismatch(rhs)
    if len(lhs.variables) == 1:
        coefficients = [str(c) for c in lhs.coefficients()]
    else:
        coefficients = [f"{'*'.join(f'{v}^{p}' for v, p in zip(lhs.variables, e) if p) or '1'}:{c}" for e, c in lhs.items()]
    return SeriesReport(
        name=name,
        coefficients=coefficients,
        verified=mismatch is None,
        first_mismatch=mismatch,
        meta=dict(meta or {}),
    )


def identity_cid1(order: int) -> SeriesReport:
    """prod_j (1 - q^{2j+1})^{-1} = prod_s (1 + q^s)."""
    return identity_cid2(1, order, name="cid1")


def identity_cid2(m: int, order: int, *, name: Optional[str] = None) -> SeriesReport:
    """prod_{(m+1) does not divide n} (1 - q^n)^{-1} = prod_s (1 + q^s + ... + q^{ms})."""
    lhs = PowerSeries.one(("q",), order)
    for k in range(1, order + 1):
        if k % (m + 1):
            lhs = lhs * one_minus_monomial_power(("q",), order, (k,), -1)
    rhs = truncated_zeta_product(m, order)
    return _report(name or f"cid2:{m}", lhs, rhs, {"m": m})


def identity_cidd(d: int, order: int) -> SeriesReport:
    """Multigraded: prod_{r != 0} (1 - q^r)^{(-1)^{|r|} c_r} = prod_s (1 + q_1^s + ... + q_d^s)."""
    variables = tuple(f"q{i}" for i in range(1, d + 1)) if d > 1 else ("q",)
    lhs = PowerSeries.one(variables, order)
    for total in range(1, order + 1):
        for content in _contents(d, total):
            c = good_cyclic_count(d, content)
            if c:
                lhs = lhs * one_minus_monomial_power(variables, order, content, (-1) ** total * c)
    rhs = PowerSeries.one(variables, order)
    for s in range(1, order + 1):
        factor = {(0,) * d: 1}
        for i in range(d):
            e = [0] * d
            e[i] = s
            factor[tuple(e)] = factor.get(tuple(e), 0) + 1
        rhs = rhs * PowerSeries(variables, order, factor)
    return _report(f"cidd:{d}", lhs, rhs, {"d": d})


def identity_cidd1(d: int, order: int) -> SeriesReport:
    """Single-variable form with good-word counts c_r and with necklace counts Phi_r, M_r.

    Both left sides must equal prod_s (1 + d q^s).
    """
    rhs = PowerSeries.one(("q",), order)
    for s in range(1, order + 1):
        rhs = rhs * _q(order, {0: 1, s: d})

    c = good_cyclic_counts_by_length(d, order)
    lhs_c = PowerSeries.one(("q",), order)
    for r, cr in c.items():
        if cr:
            lhs_c = lhs_c * one_minus_monomial_power(("q",), order, (r,), (-1) ** r * cr)

    necklaces = necklace_counts(d, order)
    lhs = PowerSeries.one(("q",), order)
    for r, (phi, _) in necklaces.items():
        lhs = lhs * one_minus_monomial_power(("q",), order, (r,), (-1) ** r * phi)
    for j in itertools.count(1):
        odd = 2 * j - 1
        if 2 * odd > order:
            break
        m_odd = necklaces[odd][1]
        for k in itertools.count(1):
            e = 2 * k * odd
            if e > order:
                break
            lhs = lhs * one_minus_monomial_power(("q",), order, (e,), -m_odd)

    report = _report(f"cidd1:{d}", lhs, rhs, {"d": d, "c_r": {str(r): v for r, v in c.items()}})
    c_mismatch = lhs_c.first_mismatch(rhs)
    if c_mismatch is not None:
        report.verified = False
        report.first_mismatch = c_mismatch if report.first_mismatch is None else min(report.first_mismatch, c_mismatch)
    report.meta["good_word_form_verified"] = c_mismatch is None
    return report


def verify_identity(which: str, order: int) -> SeriesReport:
    """``cid1``, ``cid2:m``, ``cidd:d`` or ``cidd1:d``, expanded to q^order."""
    name, _, param = which.partition(":")
    if name == "cid1":
        return identity_cid1(order)
    if not param.isdigit():
        raise SeriesError(f"identity {which!r} needs an integer parameter, e.g. {name}:2")
    value = int(param)
    if name == "cid2":
        return identity_cid2(value, order)
    if name == "cidd":
        return identity_cidd(value, order)
    if name == "cidd1":
        return identity_cidd1(value, order)
    raise SeriesError(f"unknown identity {which!r}; expected cid1, cid2:m, cidd:d or cidd1:d")


def trains_match_closed(m: int, order: int) -> SeriesReport:
    """zeta_trains(m) against zeta_closed of the truncated census."""
    census = GeneratorCensus(counts=truncated_census(m, order), max_weight=order)
    return _report(f"trains:{m}", zeta_trains(m, order), zeta_closed(census, order), {"m": m})


def series_report(name: str, series: PowerSeries, meta: dict | None = None) -> SeriesReport:
    return SeriesReport(name=name, coefficients=[str(c) for c in series.coefficients()], meta=dict(meta or {}))


def split_parity(dims: Iterable[tuple[tuple[int, int], int]]) -> tuple[dict[int, int], dict[int, int]]:
    """Per-weight totals of even and odd homological degree from ((h, w), dim) pairs."""
    even: dict[int, int] = {}
    odd: dict[int, int] = {}
    for (h, w), d in dims:
        target = odd if h % 2 else even
        target[w] = target.get(w, 0) + d
    return even, odd
