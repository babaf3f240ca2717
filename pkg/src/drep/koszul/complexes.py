"""Connes' cyclic complex and Chevalley-Eilenberg complexes of matrix Lie algebras.

Cyclic tensors a_0 x ... x a_k are stored as cyclic words in the suspended
letters s a (all odd), so the signed cyclic action is the Koszul sign of
rotation and the cyclic calculus of :mod:`drep.cyclic` applies verbatim.
Wedges of gl_r(A-bar) are monomials in odd variables e_ij(a).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional

from drep.config import get_settings
from drep.cyclic import CyclicWord, canonical_cyclic, is_canonical_good
from drep.errors import ChainComplexError
from drep.graded import CommVariable, Monomial, VariableSet, Word, normalize_comm, render_terms
from drep.homology import TruncatedComplex
from drep.koszul.algebras import FiniteGradedAlgebra
from drep.linalg import SparseRow, left_kernel, solve_in_span
from drep.models import ValidationReport
from drep.presentations.base import CommDGA

logger = logging.getLogger(__name__)

Cell = tuple[int, int]


def _accumulate(out: dict, key, value: Fraction) -> None:
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# ---------------------------------------------------------------------------
# Connes' cyclic complex
# ---------------------------------------------------------------------------


def tensor_words(alg: FiniteGradedAlgebra, max_len: int, max_weight: int) -> Iterator[Word]:
    def extend(word: Word, weight: int) -> Iterator[Word]:
        if word:
            yield word
        if len(word) == max_len:
            return
        for a, g in enumerate(alg.basis):
            if weight + g.weight <= max_weight:
                yield from extend(word + (a,), weight + g.weight)

    yield from extend((), 0)


def connes_basis(alg: FiniteGradedAlgebra, max_k: int, max_weight: int) -> dict[Cell, list[CyclicWord]]:
    """Cyclic coinvariants of A-bar^{(k+1)} for k <= max_k, grouped by (k, weight)."""
    letters = alg.suspended_alphabet()
    out: dict[Cell, list[CyclicWord]] = {}
    for word in tensor_words(alg, max_k + 1, max_weight):
        if is_canonical_good(letters, word):
            cw = CyclicWord(weight=letters.word_weight(word), hdeg=len(word), word=word)
            out.setdefault((len(word) - 1, cw.weight), []).append(cw)
    for cell in out.values():
        cell.sort()
    return out


def connes_boundary(alg: FiniteGradedAlgebra, cw: CyclicWord) -> dict[CyclicWord, Fraction]:
    """b(a_0 x ... x a_k) = sum_i (-1)^i (... a_i a_{i+1} ...) + (-1)^k a_k a_0 x a_1 x ... x a_{k-1}."""
    letters = alg.suspended_alphabet()
    word = cw.word
    k = len(word) - 1
    out: dict[CyclicWord, Fraction] = {}
    if k < 1:
        return out

    def add(w: Word, value: Fraction) -> None:
        canon = canonical_cyclic(letters, w)
        if canon is not None:
            _accumulate(out, canon[0], canon[1] * value)

    for i in range(k):
        for c, coeff in alg.mul(word[i], word[i + 1]).items():
            add(word[:i] + (c,) + word[i + 2 :], (-1) ** i * coeff)
    for c, coeff in alg.mul(word[-1], word[0]).items():
        add((c,) + word[1:-1], (-1) ** k * coeff)
    return out


def connes_complex(alg: FiniteGradedAlgebra, max_k: int, max_weight: int) -> TruncatedComplex:
    """Reduced Connes complex, cyclic degree k <= max_k and weight <= max_weight."""
    basis = connes_basis(alg, max_k, max_weight)
    return TruncatedComplex.build(
        basis,
        lambda cw, cell: connes_boundary(alg, cw),
        truncated={cell for cell in basis if cell[0] == max_k},
        name=f"CC({alg.name})",
    )


def render_cyclic_tensor(alg: FiniteGradedAlgebra, cw: CyclicWord) -> str:
    return "(" + " x ".join(alg.basis[a].name for a in cw.word) + ")"


# ---------------------------------------------------------------------------
# gl_r(A-bar)
# ---------------------------------------------------------------------------


class MatrixLieAlgebra:
    """gl_r(A-bar) with basis e_ij(a); each basis element is an odd variable of the CE coalgebra.

    Variable keys are (weight of a, a, i, j) with 1-based matrix indices.
    """

    def __init__(self, alg: FiniteGradedAlgebra, r: int) -> None:
        if r < 1:
            raise ChainComplexError(f"matrix Lie algebras need r >= 1, got {r}")
        self.algebra = alg
        self.r = r
        self.variables = VariableSet(
            CommVariable(
                key=(g.weight, a, i, j),
                name=f"e{i}{j}({g.name})",
                hdeg=1,
                weight=g.weight,
            )
            for a, g in enumerate(alg.basis)
            for i in range(1, r + 1)
            for j in range(1, r + 1)
        )

    def __repr__(self) -> str:
        return f"MatrixLieAlgebra(gl_{self.r}({self.algebra.name}))"

    def element(self, a: int, i: int, j: int) -> int:
        return self.variables.index((self.algebra.weight(a), a, i, j))

    def entry(self, pos: int) -> tuple[int, int, int]:
        _, a, i, j = self.variables[pos].key
        return a, i, j

    def bracket(self, p: int, q: int) -> dict[int, Fraction]:
        """[e_ij(a), e_kl(b)] = delta_jk e_il(ab) - delta_li e_kj(ba)."""
        a, i, j = self.entry(p)
        b, k, l = self.entry(q)
        out: dict[int, Fraction] = {}
        if j == k:
            for c, coeff in self.algebra.mul(a, b).items():
                _accumulate(out, self.element(c, i, l), coeff)
        if l == i:
            for c, coeff in self.algebra.mul(b, a).items():
                _accumulate(out, self.element(c, k, j), -coeff)
        return out

    def gl_action(self, p: int, q: int, pos: int) -> dict[int, Fraction]:
        """[E_pq, e_ij(a)] = delta_qi e_pj(a) - delta_jp e_iq(a)."""
        a, i, j = self.entry(pos)
        out: dict[int, Fraction] = {}
        if q == i:
            _accumulate(out, self.element(a, p, j), Fraction(1))
        if j == p:
            _accumulate(out, self.element(a, i, q), Fraction(-1))
        return out

    def render_wedge(self, wedge: Monomial) -> str:
        if not wedge:
            return "1"
        return "^".join(self.variables[v].name for v in wedge)


def _wedge_add(out: dict[Monomial, Fraction], vs: VariableSet, factors: tuple[int, ...], value: Fraction) -> None:
    normal = normalize_comm(vs, factors)
    if normal is not None:
        mono, sign = normal
        _accumulate(out, mono, sign * value)


def ce_differential(lie: MatrixLieAlgebra, wedge: Monomial) -> dict[Monomial, Fraction]:
    """Sum over i < j of the Koszul sign of moving g_i, g_j to the front, times [g_i, g_j] ^ rest."""
    vs = lie.variables
    out: dict[Monomial, Fraction] = {}
    for i, j in itertools.combinations(range(len(wedge)), 2):
        sign = -1 if (i + j - 1) % 2 else 1
        rest = wedge[:i] + wedge[i + 1 : j] + wedge[j + 1 :]
        for c, coeff in lie.bracket(wedge[i], wedge[j]).items():
            _wedge_add(out, vs, (c,) + rest, sign * coeff)
    return out


def ce_differential_chain(lie: MatrixLieAlgebra, chain: Mapping[Monomial, Fraction]) -> dict[Monomial, Fraction]:
    out: dict[Monomial, Fraction] = {}
    for wedge, coeff in chain.items():
        for w2, c2 in ce_differential(lie, wedge).items():
            _accumulate(out, w2, coeff * c2)
    return out


def gl_action_on_wedge(lie: MatrixLieAlgebra, p: int, q: int, wedge: Monomial) -> dict[Monomial, Fraction]:
    """E_pq acting on a wedge as an even derivation."""
    vs = lie.variables
    out: dict[Monomial, Fraction] = {}
    for pos, g in enumerate(wedge):
        for c, coeff in lie.gl_action(p, q, g).items():
            _wedge_add(out, vs, wedge[:pos] + (c,) + wedge[pos + 1 :], coeff)
    return out


def wedges_by_cell(
    lie: MatrixLieAlgebra, max_k: int, max_weight: int, *, budget: Optional[int] = None
) -> dict[Cell, list[Monomial]]:
    """Wedges of gl_r(A-bar) grouped by (wedge degree, weight), unit included."""
    exterior = CommDGA(lie.variables, {}, name=f"CE(gl_{lie.r}({lie.algebra.name}))")
    cells = exterior.monomials_by_cell(max_weight, budget=budget)
    return {cell: monos for cell, monos in cells.items() if cell[0] <= max_k}


def invariant_wedges(lie: MatrixLieAlgebra, wedges: list[Monomial]) -> list[SparseRow]:
    """Basis of the gl_r(k)-invariant combinations of ``wedges`` (one cell)."""
    index = {w: t for t, w in enumerate(wedges)}
    ncell = len(wedges)
    r = lie.r
    rows: list[SparseRow] = []
    for wedge in wedges:
        row: SparseRow = {}
        for block, (p, q) in enumerate(itertools.product(range(1, r + 1), repeat=2)):
            for w2, c in gl_action_on_wedge(lie, p, q, wedge).items():
                row[block * ncell + index[w2]] = c
        rows.append(row)
    return left_kernel(rows, r * r * ncell)


@dataclass(frozen=True)
class CEComplex:
    """Relative CE complex: gl_r(k)-invariant wedges of gl_r(A-bar) with the CE differential."""

    lie: MatrixLieAlgebra
    wedges: Mapping[Cell, tuple[Monomial, ...]]
    invariants: Mapping[Cell, tuple[SparseRow, ...]]
    complex: TruncatedComplex

    def invariant_dims(self) -> dict[Cell, int]:
        return {cell: len(vecs) for cell, vecs in self.invariants.items() if vecs}

    def render_invariant(self, cell: Cell, label: int) -> str:
        wedges = self.wedges[cell]
        vec = self.invariants[cell][label]
        return render_terms((self.lie.render_wedge(wedges[t]), c) for t, c in sorted(vec.items()))


def ce_complex(
    alg: FiniteGradedAlgebra, r: int, max_k: int, max_weight: int, *, budget: Optional[int] = None
) -> CEComplex:
    budget = budget if budget is not None else get_settings().drep_cell_budget
    lie = MatrixLieAlgebra(alg, r)
    wedges = {cell: tuple(monos) for cell, monos in wedges_by_cell(lie, max_k, max_weight, budget=budget).items()}
    invariants: dict[Cell, tuple[SparseRow, ...]] = {}
    for cell, monos in sorted(wedges.items()):
        invariants[cell] = tuple(invariant_wedges(lie, list(monos)))
        logger.debug(f"{lie!r} cell {cell}: {len(monos)} wedges, {len(invariants[cell])} invariant")

    images: dict[Cell, list[dict[int, Fraction]]] = {}
    for (k, w), vecs in invariants.items():
        if k == 0 or not vecs:
            continue
        lower = (k - 1, w)
        lower_index = {m: t for t, m in enumerate(wedges.get(lower, ()))}
        targets: list[SparseRow] = []
        for vec in vecs:
            chain = {wedges[(k, w)][t]: c for t, c in vec.items()}
            image = ce_differential_chain(lie, chain)
            targets.append({lower_index[m]: c for m, c in image.items()})
        solved = solve_in_span(invariants.get(lower, ()), targets, len(lower_index))
        if solved is None:
            raise ChainComplexError(f"CE differential leaves the invariant wedges at cell {(k, w)}", cell=(k, w))
        images[(k, w)] = solved

    bases = {cell: list(range(len(vecs))) for cell, vecs in invariants.items() if vecs}
    complex_ = TruncatedComplex.build(
        bases,
        lambda label, cell: images.get(cell, [{}] * (label + 1))[label],
        truncated={cell for cell in bases if cell[0] == max_k},
        name=f"CE(gl_{r}({alg.name}), gl_{r}(k))",
    )
    return CEComplex(lie=lie, wedges=wedges, invariants=invariants, complex=complex_)


# ---------------------------------------------------------------------------
# The generalized-trace map to the cyclic complex
# ---------------------------------------------------------------------------


def _permutation_sign(perm: tuple[int, ...]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inversions % 2 else 1


def lqt_theta(lie: MatrixLieAlgebra, wedge: Monomial) -> dict[CyclicWord, Fraction]:
    """theta(xi_0 ^ ... ^ xi_k) = sum over sigma in S_k of sgn(sigma) Tr(xi_0 x xi_sigma(1) x ... x xi_sigma(k))."""
    out: dict[CyclicWord, Fraction] = {}
    if not wedge:
        return out
    letters = lie.algebra.suspended_alphabet()
    head, rest = wedge[0], wedge[1:]
    for perm in itertools.permutations(range(len(rest))):
        seq = (head,) + tuple(rest[p] for p in perm)
        entries = [lie.entry(v) for v in seq]
        if any(entries[t][2] != entries[(t + 1) % len(entries)][1] for t in range(len(entries))):
            continue
        canon = canonical_cyclic(letters, tuple(e[0] for e in entries))
        if canon is not None:
            _accumulate(out, canon[0], Fraction(_permutation_sign(perm) * canon[1]))
    return out


def lqt_theta_chain(lie: MatrixLieAlgebra, chain: Mapping[Monomial, Fraction]) -> dict[CyclicWord, Fraction]:
    out: dict[CyclicWord, Fraction] = {}
    for wedge, coeff in chain.items():
        for cw, c in lqt_theta(lie, wedge).items():
            _accumulate(out, cw, coeff * c)
    return out


def theta_chain_map_check(alg: FiniteGradedAlgebra, r: int, max_k: int, max_weight: int) -> ValidationReport:
    """theta o d_CE = b o theta on every wedge within the bounds."""
    lie = MatrixLieAlgebra(alg, r)
    report = ValidationReport(name="theta-chain-map", meta={"algebra": alg.name, "r": r, "max_weight": max_weight})
    for (k, _), monos in sorted(wedges_by_cell(lie, max_k, max_weight).items()):
        if k == 0:
            continue
        for wedge in monos:
            report.checked += 1
            left = lqt_theta_chain(lie, ce_differential(lie, wedge))
            right: dict[CyclicWord, Fraction] = {}
            for cw, c in lqt_theta(lie, wedge).items():
                for cw2, c2 in connes_boundary(alg, cw).items():
                    _accumulate(right, cw2, c * c2)
            if left != right:
                report.add(lie.render_wedge(wedge), "theta(d w) != b(theta w)")
    return report
