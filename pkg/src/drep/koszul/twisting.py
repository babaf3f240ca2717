"""Twisting cochains: the Maurer-Cartan check and twisted tensor products.

Conventions: a twisting cochain tau: C -> R of degree -1 vanishes on the
counit and satisfies

    d_R tau(c) + tau(d_C c) + sum (-1)^{|c'|} tau(c') tau(c'') = 0

over the reduced coproduct c -> c' x c''. The twisted tensor product
C x_tau R carries

    d(c x r) = d_C c x r + (-1)^{|c|} c x d_R r + sum (-1)^{|c'|} c' x tau(c'') r

with the sum over the full coproduct (c' may be the counit).
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Mapping, Optional, Protocol

from drep.config import get_settings
from drep.cyclic import CyclicWord
from drep.errors import TwistingCochainError
from drep.graded import (
    CommPoly,
    CommVariable,
    Generator,
    Monomial,
    NCPoly,
    VariableSet,
    Word,
    comm_product,
    koszul_sign,
    mul_comm,
    mul_nc,
    normalize_comm,
)
from drep.homology import TruncatedComplex
from drep.koszul.algebras import FiniteGradedAlgebra
from drep.koszul.complexes import (
    MatrixLieAlgebra,
    ce_differential,
    connes_basis,
    lqt_theta,
    render_cyclic_tensor,
    tensor_words,
    wedges_by_cell,
)
from drep.models import ValidationReport
from drep.presentations.base import CommDGA, DGAPresentation, comm_variables_from_generators
from drep.presentations.builtins import square_zero, square_zero_name
from drep.representation import MatrixVariableAlgebra, rep_n

logger = logging.getLogger(__name__)

Cell = tuple[int, int]
Split = tuple[Hashable, Hashable, Fraction]


def _accumulate(out: dict, key, value: Fraction) -> None:
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# ---------------------------------------------------------------------------
# Coalgebras
# ---------------------------------------------------------------------------


class Coalgebra(Protocol):
    name: str

    def degree(self, c: Any) -> int: ...

    def weight(self, c: Any) -> int: ...

    def basis(self, max_degree: int, max_weight: int) -> dict[Cell, list[Any]]: ...

    def differential(self, c: Any) -> dict[Any, Fraction]: ...

    def coproduct(self, c: Any) -> list[Split]: ...

    def render(self, c: Any) -> str: ...


class BarCoalgebra:
    """Tensor coalgebra on s A-bar: bar differential and deconcatenation. Elements are words, () is the counit."""

    def __init__(self, alg: FiniteGradedAlgebra) -> None:
        self.algebra = alg
        self.letters = alg.suspended_alphabet()
        self.name = f"B({alg.name})"

    def degree(self, c: Word) -> int:
        return len(c)

    def weight(self, c: Word) -> int:
        return self.letters.word_weight(c)

    def basis(self, max_degree: int, max_weight: int) -> dict[Cell, list[Word]]:
        out: dict[Cell, list[Word]] = {(0, 0): [()]}
        for word in tensor_words(self.algebra, max_degree, max_weight):
            out.setdefault((len(word), self.weight(word)), []).append(word)
        return out

    def differential(self, c: Word) -> dict[Word, Fraction]:
        """sum_i (-1)^i [a_1 | ... | a_{i+1} a_{i+2} | ...] (0-based i)."""
        out: dict[Word, Fraction] = {}
        for i in range(len(c) - 1):
            for m, coeff in self.algebra.mul(c[i], c[i + 1]).items():
                _accumulate(out, c[:i] + (m,) + c[i + 2 :], (-1) ** i * coeff)
        return out

    def coproduct(self, c: Word) -> list[Split]:
        return [(c[:p], c[p:], Fraction(1)) for p in range(1, len(c))]

    def render(self, c: Word) -> str:
        return "[" + "|".join(self.algebra.basis[a].name for a in c) + "]" if c else "1"


class SymCoalgebra:
    """Cofree cocommutative coalgebra on a graded VariableSet with the unshuffle coproduct.

    Elements are canonical monomials; an optional coderivation supplies the differential.
    """

    def __init__(
        self,
        variables: VariableSet,
        differential: Optional[Callable[[Monomial], Mapping[Monomial, Fraction]]] = None,
        *,
        name: str = "",
    ) -> None:
        self.variables = variables
        self._d = differential
        self.name = name

    def degree(self, c: Monomial) -> int:
        return self.variables.monomial_hdeg(c)

    def weight(self, c: Monomial) -> int:
        return self.variables.monomial_weight(c)

    def basis(self, max_degree: int, max_weight: int) -> dict[Cell, list[Monomial]]:
        cells = CommDGA(self.variables, {}, name=self.name).monomials_by_cell(max_weight)
        return {cell: list(monos) for cell, monos in cells.items() if cell[0] <= max_degree}

    def differential(self, c: Monomial) -> dict[Monomial, Fraction]:
        return dict(self._d(c)) if self._d is not None and c else {}

    def coproduct(self, c: Monomial) -> list[Split]:
        parities = [self.variables.parities[v] for v in c]
        out: dict[tuple[Monomial, Monomial], Fraction] = {}
        positions = range(len(c))
        for size in range(1, len(c)):
            for first in itertools.combinations(positions, size):
                rest = tuple(p for p in positions if p not in first)
                sign = koszul_sign([p + 1 for p in first + rest], parities)
                key = (tuple(c[p] for p in first), tuple(c[p] for p in rest))
                _accumulate(out, key, sign)
        return [(left, right, coeff) for (left, right), coeff in out.items()]

    def render(self, c: Monomial) -> str:
        return self.variables.render_monomial(c)


def ce_coalgebra(lie: MatrixLieAlgebra) -> SymCoalgebra:
    """The CE coalgebra of gl_r(A-bar): exterior coalgebra on s gl_r(A-bar) with the CE differential."""
    return SymCoalgebra(lie.variables, lambda c: ce_differential(lie, c), name=f"CE(gl_{lie.r}({lie.algebra.name}))")


# ---------------------------------------------------------------------------
# Targets and cochains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraTarget:
    """The DG algebra a cochain lands in: zero element, product and differential."""

    name: str
    zero: Any
    mul: Callable[[Any, Any], Any]
    d: Callable[[Any], Any]
    source: Any = None


def nc_target(pres: DGAPresentation) -> AlgebraTarget:
    return AlgebraTarget(pres.name, NCPoly.zero(pres.alphabet), mul_nc, pres.extend_derivation, pres)


def comm_target(cdga: CommDGA) -> AlgebraTarget:
    return AlgebraTarget(cdga.name, CommPoly.zero(cdga.variables), mul_comm, cdga.extend_derivation, cdga)


@dataclass(frozen=True)
class TwistingCochainData:
    """A degree -1 map from a coalgebra to an algebra, given on basis elements."""

    name: str
    coalgebra: Coalgebra
    target: AlgebraTarget
    component: Callable[[Any], Any]

    def __call__(self, c: Any) -> Any:
        if not c:
            return self.target.zero
        return self.component(c)


def verify_twisting_cochain(tau: TwistingCochainData, max_degree: int, max_weight: int) -> ValidationReport:
    """Residual of the Maurer-Cartan equation on every basis element within the bounds."""
    coalg, tgt = tau.coalgebra, tau.target
    report = ValidationReport(
        name="maurer-cartan",
        meta={"cochain": tau.name, "max_degree": max_degree, "max_weight": max_weight},
    )
    for _, elements in sorted(coalg.basis(max_degree, max_weight).items()):
        for c in elements:
            if not c:
                continue
            report.checked += 1
            residual = tgt.d(tau(c))
            for c2, coeff in coalg.differential(c).items():
                residual = residual + tau(c2).scale(coeff)
            for c1, c2, coeff in coalg.coproduct(c):
                sign = -1 if coalg.degree(c1) % 2 else 1
                residual = residual + tgt.mul(tau(c1), tau(c2)).scale(sign * coeff)
            if residual:
                report.add(coalg.render(c), f"residual {residual.render()}")
    logger.debug(f"MC check of {tau.name}: {report.checked} elements, {len(report.violations)} violations")
    return report


def twisted_tensor(
    tau: TwistingCochainData, max_degree: int, max_weight: int, *, budget: Optional[int] = None
) -> TruncatedComplex:
    """C x_tau R truncated by total degree and weight; R must be graded-commutative."""
    cdga = tau.target.source
    if not isinstance(cdga, CommDGA):
        raise TwistingCochainError(f"twisted tensor products need a commutative target, got {tau.target.name}")
    budget = budget if budget is not None else get_settings().drep_cell_budget
    coalg = tau.coalgebra
    vs = cdga.variables
    cbasis = coalg.basis(max_degree, max_weight)
    rcells = cdga.monomials_by_cell(max_weight, budget=budget)
    bases: dict[Cell, list[tuple[Any, Monomial]]] = {}
    for (hc, wc), elements in cbasis.items():
        for (hr, wr), monos in rcells.items():
            if hc + hr > max_degree or wc + wr > max_weight:
                continue
            cell = bases.setdefault((hc + hr, wc + wr), [])
            cell.extend((c, m) for c in elements for m in monos)

    def image(label, cell):
        c, mono = label
        r = CommPoly(vs, {mono: Fraction(1)})
        out: dict[tuple[Any, Monomial], Fraction] = {}
        for c2, coeff in coalg.differential(c).items():
            _accumulate(out, (c2, mono), coeff)
        sign = -1 if coalg.degree(c) % 2 else 1
        for m2, coeff in cdga.extend_derivation(r).items():
            _accumulate(out, (c, m2), sign * coeff)
        if c:
            for c1, c2, coeff in [((), c, Fraction(1))] + coalg.coproduct(c):
                s1 = -1 if coalg.degree(c1) % 2 else 1
                for m2, k in mul_comm(tau(c2), r).items():
                    _accumulate(out, (c1, m2), s1 * coeff * k)
        return out

    return TruncatedComplex.build(
        bases,
        image,
        truncated={cell for cell in bases if cell[0] == max_degree},
        name=f"{coalg.name} x_tau {cdga.name}",
    )


# ---------------------------------------------------------------------------
# Standard and universal cochains
# ---------------------------------------------------------------------------


def standard_cochain(generators: list[Generator]) -> TwistingCochainData:
    """tau_V: Sym^c(V[1]) -> V[1] -> V -> Sym(V) for V spanned by ``generators`` (zero differential)."""
    shifted = VariableSet(
        CommVariable(key=(i,), name=f"s{g.name}", hdeg=g.hdeg + 1, weight=g.weight) for i, g in enumerate(generators)
    )
    sym = CommDGA(comm_variables_from_generators(generators), {}, name="Sym(V)")
    coalg = SymCoalgebra(shifted, name="Sym^c(V[1])")

    def component(c: Monomial) -> CommPoly:
        if len(c) != 1:
            return CommPoly.zero(sym.variables)
        return CommPoly.variable(sym.variables, sym.variables.index(shifted[c[0]].key))

    return TwistingCochainData("tau_V", coalg, comm_target(sym), component)


def square_zero_resolution(alg: FiniteGradedAlgebra, max_weight: int) -> DGAPresentation:
    if not alg.is_square_zero or any(g.weight != 1 for g in alg.basis):
        raise TwistingCochainError(f"no universal twisting cochain is known for {alg.name}")
    return square_zero(len(alg.basis), max_weight)


def universal_cochain(alg: FiniteGradedAlgebra, pres: DGAPresentation) -> TwistingCochainData:
    """f: B(A) -> R with f_k(a_{i1} ... a_{ik}) = y_{i1...ik} (f_k(x^k) = x_{k-1} for the dual numbers)."""
    d = len(alg.basis)
    if not alg.is_square_zero:
        raise TwistingCochainError(f"no universal twisting cochain is known for {alg.name}")

    def component(word: Word) -> NCPoly:
        name = square_zero_name(d, tuple(a + 1 for a in word))
        if name not in pres.alphabet:
            raise TwistingCochainError(f"f_{len(word)} needs generator {name}, beyond {pres.name}'s weight bound")
        return NCPoly.generator(pres.alphabet, name)

    return TwistingCochainData(f"f({alg.name})", BarCoalgebra(alg), nc_target(pres), component)


# ---------------------------------------------------------------------------
# The trace map and tau_{r,n}
# ---------------------------------------------------------------------------


def t_map(cw: CyclicWord, f: TwistingCochainData, rep: MatrixVariableAlgebra) -> CommPoly:
    """T(a_1 x ... x a_{k+1}) = sum_j (-1)^{jk} Tr_n f_{k+1}(a_{1+j}, ..., a_{k+1+j})."""
    word = cw.word
    k = len(word) - 1
    out = CommPoly.zero(rep.variables)
    for j in range(len(word)):
        image = f(word[j:] + word[:j])
        out = out + rep.trace_poly(image).scale(-1 if (j * k) % 2 else 1)
    return out


def _desuspension_sign(cw: CyclicWord) -> int:
    # cyclic degree k = len - 1
    return -1 if (len(cw.word) - 1) % 2 else 1


def tau_rn(alg: FiniteGradedAlgebra, r: int, n: int, max_weight: int) -> TwistingCochainData:
    """T o s^{-1} o theta from the CE coalgebra of gl_r(A-bar) to R_n."""
    pres = square_zero_resolution(alg, max_weight)
    rep = rep_n(pres, n)
    f = universal_cochain(alg, pres)
    lie = MatrixLieAlgebra(alg, r)

    def component(c: Monomial) -> CommPoly:
        out = CommPoly.zero(rep.variables)
        for cw, coeff in lqt_theta(lie, c).items():
            out = out + t_map(cw, f, rep).scale(coeff * _desuspension_sign(cw))
        return out

    return TwistingCochainData(f"tau_{r},{n}({alg.name})", ce_coalgebra(lie), comm_target(rep), component)


def connes_variables(alg: FiniteGradedAlgebra, max_k: int, max_weight: int) -> VariableSet:
    """CC(A)[1] as a graded vector space: one variable per cyclic tensor, degree k + 1."""
    return VariableSet(
        CommVariable(
            key=(cw.weight, cw.hdeg, cw.word),
            name=render_cyclic_tensor(alg, cw),
            hdeg=cw.hdeg,
            weight=cw.weight,
        )
        for cell in connes_basis(alg, max_k, max_weight).values()
        for cw in cell
    )


def _ordered_decompositions(coalg: Coalgebra, c: Any, parts: int) -> list[tuple[tuple[Any, ...], Fraction]]:
    if parts == 1:
        return [((c,), Fraction(1))]
    out: list[tuple[tuple[Any, ...], Fraction]] = []
    for first, rest, coeff in coalg.coproduct(c):
        for tail, c2 in _ordered_decompositions(coalg, rest, parts - 1):
            out.append(((first,) + tail, coeff * c2))
    return out


def sym_coalgebra_extension(
    theta: Callable[[Any], Mapping[CyclicWord, Fraction]],
    coalg: Coalgebra,
    c: Any,
    target: VariableSet,
) -> dict[Monomial, Fraction]:
    """Sym^c(theta)(c) = sum_m (1/m!) theta^m applied to the m-fold reduced coproduct, as monomials in ``target``."""
    out: dict[Monomial, Fraction] = {}
    if not c:
        return {(): Fraction(1)}
    for m in range(1, len(c) + 1):
        scale = Fraction(1, math.factorial(m))
        for pieces, coeff in _ordered_decompositions(coalg, c, m):
            expansions: list[tuple[tuple[int, ...], Fraction]] = [((), coeff * scale)]
            for piece in pieces:
                images = theta(piece)
                expansions = [
                    (factors + (target.index((cw.weight, cw.hdeg, cw.word)),), value * c2)
                    for factors, value in expansions
                    for cw, c2 in images.items()
                ]
            for factors, value in expansions:
                normal = normalize_comm(target, factors)
                if normal is not None:
                    _accumulate(out, normal[0], normal[1] * value)
    return out


def factorization_check(
    alg: FiniteGradedAlgebra,
    r: int,
    n: int,
    max_weight: int,
    *,
    theta: Optional[Callable[[Monomial], Mapping[CyclicWord, Fraction]]] = None,
) -> ValidationReport:
    """tau_{r,n} against Sym(T) o tau_V o Sym^c(theta), and Sym^c(theta) against the two coproducts.

    ``theta`` replaces the trace map on the factorized side only; tau_{r,n} always uses it.
    """
    tau = tau_rn(alg, r, n, max_weight)
    lie = MatrixLieAlgebra(alg, r)
    if theta is None:
        theta = lambda piece: lqt_theta(lie, piece)  # noqa: E731
    ce = ce_coalgebra(lie)
    cc_vars = connes_variables(alg, max_weight, max_weight)
    sym_cc = SymCoalgebra(cc_vars, name="Sym^c(CC[1])")
    tau_v = standard_cochain([Generator(name=f"c{i}", hdeg=v.hdeg - 1, weight=v.weight) for i, v in enumerate(cc_vars)])
    shifted = tau_v.coalgebra.variables
    sym_v = tau_v.target.source.variables
    rep = tau.target.source
    f = universal_cochain(alg, square_zero_resolution(alg, max_weight))
    # T on V, one image per cyclic tensor
    t_images: list[CommPoly] = []
    for v in cc_vars:
        cw = CyclicWord(*v.key)
        t_images.append(t_map(cw, f, rep).scale(_desuspension_sign(cw)))

    def sym_t(poly: CommPoly) -> CommPoly:
        out = CommPoly.zero(rep.variables)
        for mono, coeff in poly.items():
            factors = [t_images[sym_v[var].key[0]] for var in mono]
            out = out + comm_product(rep.variables, factors).scale(coeff)
        return out

    report = ValidationReport(name="tau-factorization", meta={"algebra": alg.name, "r": r, "n": n})

    def extension(c: Monomial) -> dict[Monomial, Fraction]:
        return sym_coalgebra_extension(theta, ce, c, cc_vars)

    for (k, _), wedges in sorted(wedges_by_cell(lie, max_weight, max_weight).items()):
        if k == 0:
            continue
        for c in wedges:
            report.checked += 1
            ext = extension(c)
            lifted = CommPoly(cc_vars, ext).substitute(lambda i: shifted.index((i,)), shifted)
            composite = CommPoly.zero(rep.variables)
            for mono, coeff in lifted.items():
                composite = composite + sym_t(tau_v(mono)).scale(coeff)
            if composite != tau(c):
                report.add(lie.render_wedge(c), "Sym(T) o tau_V o Sym^c(theta) differs from tau_{r,n}")
            left: dict[tuple[Monomial, Monomial], Fraction] = {}
            for mono, coeff in ext.items():
                for m1, m2, c2 in sym_cc.coproduct(mono):
                    _accumulate(left, (m1, m2), coeff * c2)
            right: dict[tuple[Monomial, Monomial], Fraction] = {}
            for c1, c2, coeff in ce.coproduct(c):
                e1, e2 = extension(c1), extension(c2)
                for m1, v1 in e1.items():
                    for m2, v2 in e2.items():
                        _accumulate(right, (m1, m2), coeff * v1 * v2)
            if left != right:
                report.add(lie.render_wedge(c), "Sym^c(theta) is not comultiplicative")
    return report
