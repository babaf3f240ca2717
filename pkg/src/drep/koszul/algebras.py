"""Finite-dimensional weight-graded augmented algebras A = k + A-bar."""

from __future__ import annotations

import logging
import re
from fractions import Fraction
from typing import Mapping, Sequence

from drep.errors import PresentationError
from drep.graded import Alphabet, Generator
from drep.models import ValidationReport

logger = logging.getLogger(__name__)

Products = Mapping[tuple[str, str], Mapping[str, int | Fraction]]


class FiniteGradedAlgebra:
    """Augmentation ideal with a basis of weighted elements and structure constants.

    Basis elements sit in homological degree 0 (ordinary algebras). Products
    not listed are zero.
    """

    __slots__ = ("name", "basis", "_index", "_products")

    def __init__(self, basis: Sequence[Generator], products: Products | None = None, *, name: str = "") -> None:
        self.name = name
        self.basis: tuple[Generator, ...] = tuple(sorted(basis, key=lambda g: g.sort_key))
        self._index = {g.name: i for i, g in enumerate(self.basis)}
        if len(self._index) != len(self.basis):
            raise PresentationError(f"{name}: duplicate basis element")
        for g in self.basis:
            if g.hdeg != 0:
                raise PresentationError(f"{name}: basis element {g.name} must have hdeg 0", g.name)
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (a, b), image in (products or {}).items():
            i, j = self.index(a), self.index(b)
            row: dict[int, Fraction] = {}
            for c, coeff in image.items():
                k = self.index(c)
                if self.basis[k].weight != self.basis[i].weight + self.basis[j].weight:
                    raise PresentationError(f"{name}: {a}*{b} = {c} breaks the weight grading", c)
                if coeff:
                    row[k] = Fraction(coeff)
            if row:
                table[(i, j)] = row
        self._products = table

    def __len__(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"FiniteGradedAlgebra({self.name or '?'}, dim {len(self.basis)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PresentationError(f"{self.name}: unknown basis element {name!r}", name) from None

    def weight(self, i: int) -> int:
        return self.basis[i].weight

    def mul(self, i: int, j: int) -> dict[int, Fraction]:
        return dict(self._products.get((i, j), {}))

    @property
    def is_square_zero(self) -> bool:
        return not self._products

    def suspended_alphabet(self) -> Alphabet:
        """The letters s a, one per basis element, each of hdeg 1; positions match ``basis``."""
        return Alphabet(Generator(name=g.name, hdeg=1, weight=g.weight) for g in self.basis)

    def check_associativity(self) -> ValidationReport:
        report = ValidationReport(name="associativity", meta={"algebra": self.name})
        n = len(self.basis)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    report.checked += 1
                    left: dict[int, Fraction] = {}
                    for p, c in self.mul(i, j).items():
                        for q, c2 in self.mul(p, k).items():
                            left[q] = left.get(q, 0) + c * c2
                    right: dict[int, Fraction] = {}
                    for p, c in self.mul(j, k).items():
                        for q, c2 in self.mul(i, p).items():
                            right[q] = right.get(q, 0) + c * c2
                    diff = {q: left.get(q, 0) - right.get(q, 0) for q in set(left) | set(right)}
                    if any(diff.values()):
                        names = [self.basis[t].name for t in (i, j, k)]
                        report.add("*".join(names), "(ab)c != a(bc)")
        return report


def dual_numbers_algebra() -> FiniteGradedAlgebra:
    """k[x]/(x^2)."""
    return FiniteGradedAlgebra([Generator(name="x", hdeg=0, weight=1)], name="dual-numbers")


def square_zero_letter(d: int, i: int) -> str:
    return "x" if d == 1 else f"x{i}"


def square_zero_algebra(d: int) -> FiniteGradedAlgebra:
    """k + V with dim V = d and V * V = 0."""
    if not 1 <= d <= 9:
        raise PresentationError(f"square-zero needs 1 <= d <= 9, got {d}")
    basis = [Generator(name=square_zero_letter(d, i), hdeg=0, weight=1) for i in range(1, d + 1)]
    return FiniteGradedAlgebra(basis, name="dual-numbers" if d == 1 else f"square-zero:{d}")


def truncated_algebra(m: int) -> FiniteGradedAlgebra:
    """k[x]/(x^{m+1}) with basis x, x^2, ..., x^m of the augmentation ideal."""
    if m < 1:
        raise PresentationError(f"truncated needs m >= 1, got {m}")
    names = {p: "x" if p == 1 else f"x^{p}" for p in range(1, m + 1)}
    basis = [Generator(name=names[p], hdeg=0, weight=p) for p in names]
    products = {
        (names[p], names[q]): {names[p + q]: 1}
        for p in names
        for q in names
        if p + q <= m
    }
    return FiniteGradedAlgebra(basis, products, name="dual-numbers" if m == 1 else f"truncated:{m}")


_SPEC = re.compile(r"^(?P<name>[a-z\-]+)(?::(?P<param>\d+))?$")


def finite_algebra(spec: str) -> FiniteGradedAlgebra:
    """``dual-numbers``, ``square-zero:d`` or ``truncated:m``."""
    m = _SPEC.match(spec.strip())
    if m is None:
        raise PresentationError(f"cannot parse algebra {spec!r}")
    name, param = m.group("name"), m.group("param")
    if name == "dual-numbers" and param is None:
        return dual_numbers_algebra()
    if name == "square-zero":
        return square_zero_algebra(int(param or 1))
    if name == "truncated":
        return truncated_algebra(int(param or 1))
    raise PresentationError(f"unknown algebra {spec!r}; expected dual-numbers, square-zero:d or truncated:m")
