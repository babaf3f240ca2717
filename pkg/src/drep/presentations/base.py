"""Presentation types: free DG algebras, census-only data and free commutative DG algebras."""

from __future__ import annotations

import hashlib
import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from pydantic import BaseModel, Field

from drep.errors import (
    CellBudgetExceeded,
    IncompletePresentationError,
    MissingDifferentialError,
    PresentationError,
)
from drep.graded import (
    Alphabet,
    CommPoly,
    CommVariable,
    Generator,
    Monomial,
    NCPoly,
    VariableSet,
    Word,
)
from drep.homology import TruncatedComplex
from drep.models import ValidationReport

logger = logging.getLogger(__name__)


class GeneratorCensus(BaseModel):
    """Signed generator count per weight: d_i = #even - #odd generators of weight i."""

    counts: dict[int, int] = Field(default_factory=dict)
    max_weight: int = 0

    def d(self, weight: int) -> int:
        if weight > self.max_weight:
            raise IncompletePresentationError(
                f"census known only up to weight {self.max_weight}, asked for {weight}"
            )
        return self.counts.get(weight, 0)

    def as_list(self) -> list[int]:
        """[d_1, ..., d_max]."""
        return [self.counts.get(i, 0) for i in range(1, self.max_weight + 1)]


class BasePresentation(ABC):
    """Common surface of every presentation kind."""

    def __init__(self, *, name: str = "", complete_to_weight: Optional[int] = None) -> None:
        self.name = name
        self.complete_to_weight = complete_to_weight

    @property
    def has_differential(self) -> bool:
        return True

    @abstractmethod
    def census(self, max_weight: int) -> GeneratorCensus:
        """Signed generator counts up to ``max_weight``."""

    @abstractmethod
    def canonical_text(self) -> str:
        """Rendering in the presentation file format, independent of comments and spacing."""

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()

    def require_weight(self, max_weight: int) -> None:
        if self.complete_to_weight is not None and max_weight > self.complete_to_weight:
            raise IncompletePresentationError(
                f"presentation {self.name or '<anonymous>'} is complete only up to weight "
                f"{self.complete_to_weight}; weight {max_weight} was requested"
            )


# ---------------------------------------------------------------------------
# Free DG algebras
# ---------------------------------------------------------------------------


class DGAPresentation(BasePresentation):
    """A free DG algebra k<generators> with a differential given on generators."""

    def __init__(
        self,
        generators: Iterable[Generator],
        differential: Mapping[str, NCPoly] | None = None,
        *,
        name: str = "",
        complete_to_weight: Optional[int] = None,
        resolves: str = "",
        allow_negative: bool = False,
    ) -> None:
        super().__init__(name=name, complete_to_weight=complete_to_weight)
        self.alphabet = Alphabet(generators)
        self.resolves = resolves
        self.allow_negative = allow_negative
        differential = dict(differential or {})
        for gname in differential:
            if gname not in self.alphabet:
                raise PresentationError(f"differential given for unknown generator {gname!r}", gname)
        self._diff: tuple[NCPoly, ...] = tuple(
            differential.get(g.name) or NCPoly.zero(self.alphabet) for g in self.alphabet
        )
        self._words: dict[int, list[Word]] = {0: [()]}
        self._validate()

    def _validate(self) -> None:
        a = self.alphabet
        for pos, gen in enumerate(a):
            if gen.hdeg < 0 and not self.allow_negative:
                raise PresentationError(f"generator {gen.name} has negative hdeg {gen.hdeg}", gen.name)
            image = self._diff[pos]
            if image.alphabet != a:
                raise PresentationError(f"differential of {gen.name} uses a different alphabet", gen.name)
            if not image:
                continue
            if gen.hdeg == 0 and not self.allow_negative:
                raise PresentationError(f"generator {gen.name} has hdeg 0 but nonzero differential", gen.name)
            for word, _ in image.items():
                if a.word_weight(word) != gen.weight:
                    raise PresentationError(
                        f"weight mismatch: d {gen.name} contains {a.render_word(word)} of weight "
                        f"{a.word_weight(word)}, expected {gen.weight}",
                        gen.name,
                    )
                if a.word_hdeg(word) != gen.hdeg - 1:
                    raise PresentationError(
                        f"hdeg mismatch: d {gen.name} contains {a.render_word(word)} of hdeg "
                        f"{a.word_hdeg(word)}, expected {gen.hdeg - 1}",
                        gen.name,
                    )

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.alphabet.generators

    def d(self, pos: int) -> NCPoly:
        return self._diff[pos]

    def differential_of(self, name: str) -> NCPoly:
        return self._diff[self.alphabet.index(name)]

    def poly(self, name: str) -> NCPoly:
        return NCPoly.generator(self.alphabet, name)

    def extend_derivation(self, p: NCPoly) -> NCPoly:
        """d(ab) = (da) b + (-1)^{hdeg a} a (db)."""
        return p.apply_derivation(self.d, parity=1)

    def verify_d_squared(self, max_weight: int) -> ValidationReport:
        self.require_weight(max_weight)
        report = ValidationReport(name="d-squared", meta={"presentation": self.name, "max_weight": max_weight})
        for pos, gen in enumerate(self.alphabet):
            if gen.weight > max_weight:
                continue
            report.checked += 1
            residual = self.extend_derivation(self._diff[pos])
            if residual:
                report.add(gen.name, f"d^2 {gen.name} = {residual.render()}")
        logger.debug(f"d^2 check on {self.name}: {report.checked} generators, {len(report.violations)} violations")
        return report

    def census(self, max_weight: int) -> GeneratorCensus:
        self.require_weight(max_weight)
        counts: dict[int, int] = {}
        for gen in self.alphabet:
            if gen.weight <= max_weight:
                counts[gen.weight] = counts.get(gen.weight, 0) + (1 if gen.parity == 0 else -1)
        return GeneratorCensus(counts={w: c for w, c in counts.items() if c}, max_weight=max_weight)

    def words_of_weight(self, weight: int) -> list[Word]:
        """All words of exactly this weight, memoized."""
        if weight < 0:
            return []
        cached = self._words.get(weight)
        if cached is not None:
            return cached
        out: list[Word] = []
        for pos, gen in enumerate(self.alphabet):
            if gen.weight <= weight:
                out.extend((pos,) + rest for rest in self.words_of_weight(weight - gen.weight))
        out.sort()
        self._words[weight] = out
        return out

    def words(self, hdeg: int, weight: int) -> list[Word]:
        return [w for w in self.words_of_weight(weight) if self.alphabet.word_hdeg(w) == hdeg]

    def canonical_text(self) -> str:
        lines: list[str] = []
        if self.complete_to_weight is not None:
            lines.append(f"complete-to-weight {self.complete_to_weight}")
        for gen in self.alphabet:
            lines.append(f"generator {gen.name} hdeg {gen.hdeg} weight {gen.weight}")
        for pos, gen in enumerate(self.alphabet):
            if self._diff[pos]:
                lines.append(f"d {gen.name} = {self._diff[pos].render()}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"DGAPresentation({self.name or '?'}, {len(self.alphabet)} generators)"


class CensusPresentation(BasePresentation):
    """Generator census without a differential (resolutions whose signs are not materialized)."""

    def __init__(self, counts: Mapping[int, int], *, name: str, max_weight: int) -> None:
        super().__init__(name=name, complete_to_weight=max_weight)
        self._counts = {w: c for w, c in counts.items() if c and w <= max_weight}

    @property
    def has_differential(self) -> bool:
        return False

    def census(self, max_weight: int) -> GeneratorCensus:
        self.require_weight(max_weight)
        return GeneratorCensus(
            counts={w: c for w, c in self._counts.items() if w <= max_weight}, max_weight=max_weight
        )

    def canonical_text(self) -> str:
        body = " ".join(f"{w}:{c}" for w, c in sorted(self._counts.items()))
        return f"census {self.name} {body}\n"

    def require_differential(self) -> None:
        raise MissingDifferentialError(
            f"{self.name} carries census data only; a differential is required here"
        )


# ---------------------------------------------------------------------------
# Free graded-commutative DG algebras
# ---------------------------------------------------------------------------


class CommDGA(BasePresentation):
    """A free graded-commutative DG algebra on a VariableSet."""

    def __init__(
        self,
        variables: VariableSet,
        differential: Mapping[int, CommPoly] | None = None,
        *,
        name: str = "",
        complete_to_weight: Optional[int] = None,
    ) -> None:
        super().__init__(name=name, complete_to_weight=complete_to_weight)
        self.variables = variables
        differential = dict(differential or {})
        self._diff: tuple[CommPoly, ...] = tuple(
            differential.get(i) or CommPoly.zero(variables) for i in range(len(variables))
        )
        self._monomials: dict[int, dict[tuple[int, int], list[Monomial]]] = {}
        for i, var in enumerate(variables):
            image = self._diff[i]
            for mono, _ in image.items():
                if variables.monomial_weight(mono) != var.weight:
                    raise PresentationError(f"weight mismatch in d {var.name}", var.name)
                if variables.monomial_hdeg(mono) != var.hdeg - 1:
                    raise PresentationError(f"hdeg mismatch in d {var.name}", var.name)

    def d(self, pos: int) -> CommPoly:
        return self._diff[pos]

    def extend_derivation(self, p: CommPoly) -> CommPoly:
        return p.apply_derivation(self.d, parity=1)

    def verify_d_squared(self, max_weight: int) -> ValidationReport:
        report = ValidationReport(name="d-squared", meta={"presentation": self.name, "max_weight": max_weight})
        for i, var in enumerate(self.variables):
            if var.weight > max_weight:
                continue
            report.checked += 1
            residual = self.extend_derivation(self._diff[i])
            if residual:
                report.add(var.name, f"d^2 {var.name} = {residual.render()}")
        return report

    def census(self, max_weight: int) -> GeneratorCensus:
        counts: dict[int, int] = {}
        for var in self.variables:
            if var.weight <= max_weight:
                counts[var.weight] = counts.get(var.weight, 0) + (1 if var.parity == 0 else -1)
        return GeneratorCensus(counts={w: c for w, c in counts.items() if c}, max_weight=max_weight)

    def monomials_by_cell(self, max_weight: int, *, budget: Optional[int] = None) -> dict[tuple[int, int], list[Monomial]]:
        """All monomials of weight <= max_weight grouped by (hdeg, weight).

        The budget is checked as each monomial is enumerated, and again on cached cells.
        """
        cached = self._monomials.get(max_weight)
        if cached is not None:
            for cell, monos in cached.items():
                self._check_budget(cell, len(monos), budget)
            return cached
        vs = self.variables
        states: list[tuple[Monomial, int, int]] = [((), 0, 0)]
        sizes: dict[tuple[int, int], int] = {(0, 0): 1}
        self._check_budget((0, 0), 1, budget)
        for v, var in enumerate(vs):
            if var.weight > max_weight:
                continue
            extended: list[tuple[Monomial, int, int]] = []
            for mono, h, w in states:
                power = 1
                while w + power * var.weight <= max_weight:
                    cell = (h + power * var.hdeg, w + power * var.weight)
                    sizes[cell] = sizes.get(cell, 0) + 1
                    self._check_budget(cell, sizes[cell], budget)
                    extended.append((mono + (v,) * power, *cell))
                    if var.parity:
                        break
                    power += 1
            states.extend(extended)
        cells: dict[tuple[int, int], list[Monomial]] = {}
        for mono, h, w in states:
            cells.setdefault((h, w), []).append(mono)
        for monos in cells.values():
            monos.sort()
        self._monomials[max_weight] = cells
        return cells

    def _check_budget(self, cell: tuple[int, int], size: int, budget: Optional[int]) -> None:
        if budget is not None and size > budget:
            raise CellBudgetExceeded(
                f"{self.name}: cell (hdeg {cell[0]}, weight {cell[1]}) has {size} monomials or more "
                f"(budget {budget})",
                report={"hdeg": cell[0], "weight": cell[1], "size": size, "budget": budget},
            )

    def chain_complex(self, max_weight: int, *, budget: Optional[int] = None, include_unit: bool = True) -> TruncatedComplex:
        cells = self.monomials_by_cell(max_weight, budget=budget)
        if not include_unit:
            cells = {c: m for c, m in cells.items() if c[1] > 0}
        vs = self.variables

        def image(mono, cell):
            return dict(self.extend_derivation(CommPoly._from_clean(vs, {mono: Fraction(1)})).items())

        logger.debug(f"{self.name}: chain complex with {sum(len(m) for m in cells.values())} monomials")
        return TruncatedComplex.build(cells, image, name=self.name)

    def canonical_text(self) -> str:
        lines = ["commutative"]
        if self.complete_to_weight is not None:
            lines.append(f"complete-to-weight {self.complete_to_weight}")
        for var in self.variables:
            lines.append(f"generator {var.name} hdeg {var.hdeg} weight {var.weight}")
        for i, var in enumerate(self.variables):
            if self._diff[i]:
                lines.append(f"d {var.name} = {self._diff[i].render()}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"CommDGA({self.name or '?'}, {len(self.variables)} variables)"


def comm_variables_from_generators(generators: Iterable[Generator]) -> VariableSet:
    """Variables in file order, one per generator."""
    return VariableSet(
        CommVariable(key=(i,), name=g.name, hdeg=g.hdeg, weight=g.weight) for i, g in enumerate(generators)
    )


def render_census(census: GeneratorCensus) -> str:
    return ", ".join(f"d_{w}={c}" for w, c in sorted(census.counts.items())) or "0"


def require_dga(pres: BasePresentation) -> DGAPresentation:
    """Return ``pres`` if it is a free DG algebra with a differential."""
    if isinstance(pres, CensusPresentation):
        pres.require_differential()
    if not isinstance(pres, DGAPresentation):
        raise MissingDifferentialError(f"{pres!r} is not a free noncommutative DG algebra")
    return pres
