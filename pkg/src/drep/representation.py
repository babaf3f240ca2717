"""The representation functor on free DG algebras.

For a free DG algebra R on generators x^a, R_n is the free graded-commutative
algebra on matrix entries x^a_ij (1 <= i, j <= n) with d(x^a_ij) the (i, j)
entry of d(x^a) evaluated on the universal matrices X^a = (x^a_ij).
"""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import Optional

from drep.config import get_settings
from drep.cyclic import CyclicWord
from drep.errors import PresentationError
from drep.graded import CommPoly, CommVariable, Monomial, NCPoly, VariableSet, Word, normalize_comm
from drep.homology import TruncatedComplex
from drep.presentations.base import BasePresentation, CommDGA, DGAPresentation, require_dga

logger = logging.getLogger(__name__)

Matrix = list[list[CommPoly]]


def matrix_variable_name(name: str, i: int, j: int, n: int) -> str:
    return name if n == 1 else f"{name}_{i}_{j}"


class MatrixVariableAlgebra(CommDGA):
    """R_n for a free DG algebra R; variable keys are (generator position, i, j), 1-based."""

    def __init__(self, pres: DGAPresentation, n: int) -> None:
        if n < 1:
            raise PresentationError(f"matrix size must be >= 1, got {n}")
        self.source = pres
        self.n = n
        a = pres.alphabet
        variables = VariableSet(
            CommVariable(
                key=(pos, i, j),
                name=matrix_variable_name(gen.name, i, j, n),
                hdeg=gen.hdeg,
                weight=gen.weight,
            )
            for pos, gen in enumerate(a)
            for i in range(1, n + 1)
            for j in range(1, n + 1)
        )
        self._trace_cache: dict[Word, CommPoly] = {}
        # differential is filled in after the base initializer has set up the variables
        super().__init__(variables, {}, name=f"{pres.name}_{n}", complete_to_weight=pres.complete_to_weight)
        diffs = []
        for pos in range(len(a)):
            image = pres.d(pos)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    diffs.append(self.evaluate_poly_entry(image, i, j) if image else CommPoly.zero(variables))
        self._diff = tuple(diffs)

    def var(self, pos: int, i: int, j: int) -> int:
        return self.variables.index((pos, i, j))

    def _paths(self, word: Word, i: int, j: int):
        n = self.n
        for middle in itertools.product(range(1, n + 1), repeat=max(len(word) - 1, 0)):
            indices = (i,) + middle + (j,)
            yield [self.var(word[k], indices[k], indices[k + 1]) for k in range(len(word))]

    def evaluate_word_entry(self, word: Word, i: int, j: int) -> CommPoly:
        """Entry (i, j) of X^{w_1} ... X^{w_L}, normalized into the canonical variable order."""
        vs = self.variables
        if not word:
            return CommPoly.one(vs) if i == j else CommPoly.zero(vs)
        terms: dict[Monomial, Fraction] = {}
        for factors in self._paths(word, i, j):
            normal = normalize_comm(vs, factors)
            if normal is None:
                continue
            mono, sign = normal
            v = terms.get(mono, 0) + sign
            if v:
                terms[mono] = v
            else:
                terms.pop(mono, None)
        return CommPoly._from_clean(vs, terms)

    def evaluate_word_matrix(self, word: Word) -> Matrix:
        n = self.n
        return [[self.evaluate_word_entry(word, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]

    def evaluate_poly_entry(self, p: NCPoly, i: int, j: int) -> CommPoly:
        out = CommPoly.zero(self.variables)
        for word, coeff in p.items():
            out = out + self.evaluate_word_entry(word, i, j).scale(coeff)
        return out

    def trace_word(self, word: Word) -> CommPoly:
        cached = self._trace_cache.get(word)
        if cached is None:
            out = CommPoly.zero(self.variables)
            for i in range(1, self.n + 1):
                out = out + self.evaluate_word_entry(word, i, i)
            cached = self._trace_cache[word] = out
        return cached

    def trace_cyclic(self, cw: CyclicWord, sign: int = 1) -> CommPoly:
        return self.trace_word(cw.word).scale(sign)

    def trace_poly(self, p: NCPoly) -> CommPoly:
        out = CommPoly.zero(self.variables)
        for word, coeff in p.items():
            out = out + self.trace_word(word).scale(coeff)
        return out

    def gl_action(self, p: CommPoly, a: int, b: int) -> CommPoly:
        """E_ab acting by the commutator: (E_ab . X)_ij = delta_ia X_bj - X_ia delta_bj."""
        vs = self.variables

        def image(v: int) -> CommPoly:
            pos, i, j = vs[v].key
            terms: dict[Monomial, Fraction] = {}
            if i == a:
                key = (self.var(pos, b, j),)
                terms[key] = terms.get(key, 0) + 1
            if j == b:
                key = (self.var(pos, i, a),)
                terms[key] = terms.get(key, 0) - 1
            return CommPoly._from_clean(vs, {k: c for k, c in terms.items() if c})

        return p.apply_derivation(image, parity=0)

    def infinitesimal_invariance_check(self, p: CommPoly) -> list[tuple[tuple[int, int], CommPoly]]:
        """Nonzero residuals E_ab . p; the empty list means p is gl_n-invariant."""
        residuals = []
        for a in range(1, self.n + 1):
            for b in range(1, self.n + 1):
                r = self.gl_action(p, a, b)
                if r:
                    residuals.append(((a, b), r))
        return residuals

    def entry_variables(self, i: int, j: int) -> list[int]:
        return [v for v, var in enumerate(self.variables) if var.key[1:] == (i, j)]


def rep_n(pres: BasePresentation, n: int) -> MatrixVariableAlgebra:
    """R_n as a commutative DG algebra on matrix variables."""
    dga = require_dga(pres)
    alg = MatrixVariableAlgebra(dga, n)
    logger.debug(f"built {alg!r}")
    return alg


def evaluate_word_matrix(alg: MatrixVariableAlgebra, word: Word) -> Matrix:
    return alg.evaluate_word_matrix(word)


def trace_cyclic(alg: MatrixVariableAlgebra, cw: CyclicWord, sign: int = 1) -> CommPoly:
    return alg.trace_cyclic(cw, sign)


def infinitesimal_invariance_check(alg: MatrixVariableAlgebra, p: CommPoly) -> list[tuple[tuple[int, int], CommPoly]]:
    return alg.infinitesimal_invariance_check(p)


def stabilization_map(p: CommPoly, source: MatrixVariableAlgebra, target: MatrixVariableAlgebra) -> CommPoly:
    """x_ij -> (1 - delta_in)(1 - delta_jn) x_ij from R_n to R_{n-1}."""
    if source.n < 2 or target.n != source.n - 1:
        raise PresentationError(f"stabilization goes from n to n - 1, got {source.n} -> {target.n}")
    n = source.n

    def mapping(v: int) -> Optional[int]:
        pos, i, j = source.variables[v].key
        if i == n or j == n:
            return None
        return target.var(pos, i, j)

    return p.substitute(mapping, target.variables)


def rep_complex(pres: BasePresentation, n: int, max_weight: int, *, budget: Optional[int] = None) -> TruncatedComplex:
    """The full chain complex of R_n up to ``max_weight`` (weight 0 holds the unit)."""
    pres.require_weight(max_weight)
    if budget is None:
        budget = get_settings().drep_cell_budget
    return rep_n(pres, n).chain_complex(max_weight, budget=budget)
