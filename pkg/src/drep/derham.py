"""Noncommutative differential forms, the commutative de Rham algebra and their comparison.

Forms on a free DG algebra R are the free algebra on generators g and Dg,
with Dg one homological degree below g. The total differential is
d_R + D where D(g) = Dg, D(Dg) = 0 and d_R(Dg) = -D(d_R g).
"""

from __future__ import annotations

import itertools
import logging
from typing import Optional

from drep.cyclic import cyclic_complex
from drep.errors import PresentationError
from drep.graded import Alphabet, CommPoly, CommVariable, Generator, NCPoly, VariableSet
from drep.homology import betti
from drep.invariants import stable_chain_complex
from drep.models import BettiTable, ValidationReport
from drep.presentations.base import BasePresentation, CommDGA, DGAPresentation, require_dga
from drep.representation import MatrixVariableAlgebra, rep_n

logger = logging.getLogger(__name__)

FORM_PREFIX = "D"


def form_name(name: str) -> str:
    return f"{FORM_PREFIX}{name}"


class FormPresentation(DGAPresentation):
    """T_R(Omega^1 R[-1]) with the total differential d_R + D."""

    def __init__(self, source: DGAPresentation) -> None:
        self.source = source
        gens: list[Generator] = []
        for g in source.generators:
            gens.append(g)
            gens.append(Generator(name=form_name(g.name), hdeg=g.hdeg - 1, weight=g.weight))
        names = {g.name for g in gens}
        if len(names) != len(gens):
            raise PresentationError(f"{source.name}: generator names collide with their {FORM_PREFIX}-forms")
        # set early so lift and partial work before the base initializer runs
        alphabet = self.alphabet = Alphabet(gens)
        self.form_of = {alphabet.index(g.name): alphabet.index(form_name(g.name)) for g in source.generators}
        diffs: dict[str, NCPoly] = {}
        for g in source.generators:
            dg = self.lift(source.differential_of(g.name))
            diffs[g.name] = dg + NCPoly.generator(alphabet, form_name(g.name))
            if dg:
                diffs[form_name(g.name)] = -self.partial(dg)
        super().__init__(
            gens,
            diffs,
            name=f"Forms({source.name})",
            complete_to_weight=source.complete_to_weight,
            resolves=source.resolves,
            allow_negative=True,
        )

    def lift(self, p: NCPoly) -> NCPoly:
        """Rewrite a polynomial of the source into the forms alphabet."""
        alphabet = self.alphabet
        src = p.alphabet
        positions = [alphabet.index(g.name) for g in src]
        return NCPoly(alphabet, {tuple(positions[a] for a in word): c for word, c in p.items()})

    def partial(self, p: NCPoly) -> NCPoly:
        """The universal derivation D, odd, with D(g) = Dg and D(Dg) = 0."""
        alphabet = p.alphabet

        def image(pos: int) -> NCPoly:
            target = self.form_of.get(pos)
            if target is None:
                return NCPoly.zero(alphabet)
            return NCPoly.word(alphabet, (target,))

        return p.apply_derivation(image, parity=1)

    def d_internal(self, p: NCPoly) -> NCPoly:
        """d_R extended to forms: d_R(Dg) = -D(d_R g)."""
        alphabet = self.alphabet
        cache: dict[int, NCPoly] = {}

        def image(pos: int) -> NCPoly:
            if pos not in cache:
                name = alphabet[pos].name
                if pos in self.form_of:
                    cache[pos] = self.lift(self.source.differential_of(name))
                else:
                    base = self.lift(self.source.differential_of(name[len(FORM_PREFIX) :]))
                    cache[pos] = -self.partial(base)
            return cache[pos]

        return p.apply_derivation(image, parity=1)

    def forms_report(self, max_length: int = 2) -> ValidationReport:
        """D^2 = 0, d_R D + D d_R = 0 and (d_R + D)^2 = 0 on every word of at most ``max_length`` letters."""
        alphabet = self.alphabet
        report = ValidationReport(name="forms", meta={"presentation": self.source.name, "max_length": max_length})
        for length in range(1, max_length + 1):
            for word in itertools.product(range(len(alphabet)), repeat=length):
                report.checked += 1
                x = NCPoly.word(alphabet, word)
                label = alphabet.render_word(word)
                dd = self.partial(self.partial(x))
                if dd:
                    report.add(label, f"D^2 {label} = {dd.render()}")
                mixed = self.d_internal(self.partial(x)) + self.partial(self.d_internal(x))
                if mixed:
                    report.add(label, f"(d D + D d) {label} = {mixed.render()}")
                total = self.extend_derivation(self.extend_derivation(x))
                if total:
                    report.add(label, f"(d + D)^2 {label} = {total.render()}")
        return report


def nc_forms(pres: BasePresentation) -> FormPresentation:
    forms = FormPresentation(require_dga(pres))
    report = forms.forms_report()
    if not report.ok:
        raise PresentationError(f"forms on {pres.name}: {report.violations[0].detail}")
    logger.debug(f"built {forms!r}")
    return forms


def reduced_hdr(pres: BasePresentation, max_weight: int, *, jobs: int = 1) -> BettiTable:
    """Homology of the cyclic quotient of the forms algebra, per weight."""
    pres.require_weight(max_weight)
    forms = nc_forms(pres)
    table = betti(cyclic_complex(forms, max_weight), jobs=jobs)
    table.meta.update({"presentation": pres.name, "kind": "reduced-karoubi-de-rham"})
    return table


def stable_derham(pres: BasePresentation, max_weight: int, *, jobs: int = 1, budget: Optional[int] = None) -> BettiTable:
    """Homology of Lambda[C(forms)] per weight; the unit sits in (0, 0)."""
    pres.require_weight(max_weight)
    forms = nc_forms(pres)
    table = betti(stable_chain_complex(forms, max_weight, budget=budget), jobs=jobs)
    table.meta.update({"presentation": pres.name, "kind": "stable-de-rham"})
    return table


# ---------------------------------------------------------------------------
# Commutative side
# ---------------------------------------------------------------------------


class CommFormAlgebra(CommDGA):
    """DR(B) = Sym_B(Omega^1 B[-1]) with d_B + D; variable keys are (0, *key) and (1, *key)."""

    def __init__(self, cdga: CommDGA) -> None:
        self.source = cdga
        src = cdga.variables
        variables = VariableSet(
            [CommVariable(key=(0,) + v.key, name=v.name, hdeg=v.hdeg, weight=v.weight) for v in src]
            + [CommVariable(key=(1,) + v.key, name=form_name(v.name), hdeg=v.hdeg - 1, weight=v.weight) for v in src]
        )
        self._plain = [variables.index((0,) + v.key) for v in src]
        self._form = [variables.index((1,) + v.key) for v in src]
        self._form_of = dict(zip(self._plain, self._form))
        diffs: dict[int, CommPoly] = {}
        for i in range(len(src)):
            dv = self.lift(cdga.d(i), variables)
            diffs[self._plain[i]] = dv + CommPoly.variable(variables, self._form[i])
            if dv:
                diffs[self._form[i]] = -self.partial(dv)
        super().__init__(variables, diffs, name=f"DR({cdga.name})", complete_to_weight=cdga.complete_to_weight)

    def lift(self, p: CommPoly, target: VariableSet | None = None) -> CommPoly:
        target = target if target is not None else self.variables
        return p.substitute(lambda v: self._plain[v], target)

    def plain(self, i: int) -> int:
        return self._plain[i]

    def form(self, i: int) -> int:
        return self._form[i]

    def partial(self, p: CommPoly) -> CommPoly:
        vs = p.variables

        def image(v: int) -> CommPoly:
            target = self._form_of.get(v)
            return CommPoly.zero(vs) if target is None else CommPoly.variable(vs, target)

        return p.apply_derivation(image, parity=1)


def comm_derham(cdga: CommDGA) -> CommFormAlgebra:
    return CommFormAlgebra(cdga)


def p3_check(pres: BasePresentation, n: int, max_weight: int) -> ValidationReport:
    """(Forms(R))_n against DR(R_n): match (Dg)_ij with D(g_ij) and compare differentials on generators."""
    dga = require_dga(pres)
    forms = nc_forms(dga)
    left = MatrixVariableAlgebra(forms, n)
    base = rep_n(dga, n)
    right = comm_derham(base)
    report = ValidationReport(name="forms-commute-with-rep", meta={"presentation": dga.name, "n": n, "max_weight": max_weight})

    def identify(v: int) -> Optional[int]:
        pos, i, j = left.variables[v].key
        name = forms.alphabet[pos].name
        if pos in forms.form_of:
            return right.plain(base.var(dga.alphabet.index(name), i, j))
        src = dga.alphabet.index(name[len(FORM_PREFIX) :])
        return right.form(base.var(src, i, j))

    for v, var in enumerate(left.variables):
        if var.weight > max_weight:
            continue
        report.checked += 1
        image = left.d(v).substitute(identify, right.variables)
        expected = right.d(identify(v))
        if image != expected:
            report.add(var.name, f"{image.render()} != {expected.render()}")
    logger.debug(f"P3 check {dga.name} n={n}: {report.checked} generators")
    return report

