"""Trace monomials: the stable complex, GL_n-invariant subcomplexes and the obstruction complex.

The stable complex is the free graded-commutative algebra on good cyclic
words with the cyclic differential extended as a derivation. Its monomials
map to R_n by the symmetrized trace; the image spans the GL_n-invariants, the
kernel is the obstruction complex.
"""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from drep.config import get_settings
from drep.cyclic import CyclicWord, cyclic_basis, cyclic_differential
from drep.errors import CellBudgetExceeded, ProcesiClosureError
from drep.graded import CommPoly, CommVariable, Monomial, VariableSet, comm_product
from drep.homology import TruncatedComplex, betti
from drep.linalg import SparseRow, independent_rows, left_kernel, nullspace, solve_in_span
from drep.models import BettiTable, StabilityRow
from drep.presentations.base import BasePresentation, CommDGA, require_dga
from drep.representation import MatrixVariableAlgebra, rep_n

logger = logging.getLogger(__name__)

Cell = tuple[int, int]

# ---------------------------------------------------------------------------
# Stable complex
# ---------------------------------------------------------------------------


class StableComplex(CommDGA):
    """Lambda[C(R)]: variables are good cyclic words, keyed by (weight, hdeg, word)."""

    def __init__(self, pres: BasePresentation, max_weight: int) -> None:
        dga = require_dga(pres)
        self.source = dga
        self.max_weight = max_weight
        basis = cyclic_basis(dga, max_weight)
        words = sorted(cw for cell in basis.values() for cw in cell)
        self.cyclic_words: tuple[CyclicWord, ...] = tuple(words)
        variables = VariableSet(
            CommVariable(key=(cw.weight, cw.hdeg, cw.word), name=cw.render(dga.alphabet), hdeg=cw.hdeg, weight=cw.weight)
            for cw in words
        )
        index = {cw: i for i, cw in enumerate(words)}
        diffs: dict[int, CommPoly] = {}
        for i, cw in enumerate(words):
            image = cyclic_differential(dga, cw)
            if image:
                diffs[i] = CommPoly._from_clean(variables, {(index[k],): c for k, c in image.items()})
        super().__init__(variables, diffs, name=f"Lambda[C({dga.name})]", complete_to_weight=max_weight)

    def cyclic_word(self, v: int) -> CyclicWord:
        return self.cyclic_words[v]

    def render_monomial(self, mono: Monomial) -> str:
        return self.variables.render_monomial(mono)


def stable_complex(pres: BasePresentation, max_weight: int) -> StableComplex:
    pres.require_weight(max_weight)
    return StableComplex(pres, max_weight)


def stable_chain_complex(pres: BasePresentation, max_weight: int, *, budget: Optional[int] = None) -> TruncatedComplex:
    if budget is None:
        budget = get_settings().drep_cell_budget
    return stable_complex(pres, max_weight).chain_complex(max_weight, budget=budget)


def free_closure_dims(table: BettiTable, max_weight: int) -> dict[Cell, int]:
    """Cell dimensions of the free graded-commutative algebra on a bigraded space (weights >= 1)."""
    variables = VariableSet(
        CommVariable(key=(c.weight, c.hdeg, k), name=f"h{c.hdeg}w{c.weight}_{k}", hdeg=c.hdeg, weight=c.weight)
        for c in table.cells
        if c.weight >= 1
        for k in range(c.dim)
    )
    cells = CommDGA(variables, name="closure").monomials_by_cell(max_weight)
    return {cell: len(monos) for cell, monos in cells.items()}


# ---------------------------------------------------------------------------
# Symmetrized trace
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceCell:
    """Trace monomials of one (hdeg, weight) cell and their expansions in R_n."""

    monomials: tuple[Monomial, ...]  # stable-complex monomials (the domain basis)
    expansions: tuple[CommPoly, ...]
    columns: tuple[Monomial, ...]  # R_n monomials appearing in some expansion
    rows: tuple[SparseRow, ...]
    independent: tuple[int, ...]  # positions of a maximal independent subset


def _expand(stable: StableComplex, alg: MatrixVariableAlgebra, mono: Monomial) -> CommPoly:
    factors = [alg.trace_cyclic(stable.cyclic_word(v)) for v in mono]
    return comm_product(alg.variables, factors)


def _trace_cell(stable: StableComplex, alg: MatrixVariableAlgebra, cell: Cell, budget: int) -> TraceCell:
    monos = tuple(stable.monomials_by_cell(stable.max_weight).get(cell, []))
    expansions = tuple(_expand(stable, alg, m) for m in monos)
    column_index: dict[Monomial, int] = {}
    rows: list[SparseRow] = []
    for p in expansions:
        row: SparseRow = {}
        for mono, c in p.items():
            col = column_index.setdefault(mono, len(column_index))
            row[col] = c
        rows.append(row)
        if len(column_index) > budget:
            raise CellBudgetExceeded(
                f"trace expansion of cell (hdeg {cell[0]}, weight {cell[1]}) at n = {alg.n} "
                f"exceeds {budget} monomials",
                report={"hdeg": cell[0], "weight": cell[1], "n": alg.n, "budget": budget},
            )
    columns = tuple(sorted(column_index, key=column_index.get))
    independent = tuple(independent_rows(rows, len(columns)))
    logger.debug(
        f"trace cell {cell} n={alg.n}: {len(monos)} trace monomials, {len(columns)} R_n monomials, "
        f"rank {len(independent)}"
    )
    return TraceCell(monos, expansions, columns, tuple(rows), independent)


class TraceCellCache:
    """Read-mostly cache of trace cells keyed by (presentation digest, n, hdeg, weight)."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._cells: dict[tuple[str, int, int, int, int], TraceCell] = {}

    def get(self, key):
        with self._lock:
            return self._cells.get(key)

    def put(self, key, value: TraceCell) -> TraceCell:
        with self._lock:
            return self._cells.setdefault(key, value)

    def clear(self) -> None:
        with self._lock:
            self._cells.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._cells)


_TRACE_CELLS = TraceCellCache()


class TraceData:
    """Bundle of the stable complex and R_n used by the invariant and obstruction complexes."""

    def __init__(self, pres: BasePresentation, n: int, max_weight: int, *, budget: Optional[int] = None) -> None:
        pres.require_weight(max_weight)
        self.pres = require_dga(pres)
        self.n = n
        self.max_weight = max_weight
        self.budget = budget if budget is not None else get_settings().drep_cell_budget
        self.stable = StableComplex(self.pres, max_weight)
        self.alg = rep_n(self.pres, n)
        self.digest = self.pres.digest()

    def cells(self) -> list[Cell]:
        return sorted(self.stable.monomials_by_cell(self.max_weight), key=lambda c: (c[1], c[0]))

    def cell(self, cell: Cell) -> TraceCell:
        key = (self.digest, self.max_weight, self.n, cell[0], cell[1])
        cached = _TRACE_CELLS.get(key)
        if cached is not None:
            return cached
        return _TRACE_CELLS.put(key, _trace_cell(self.stable, self.alg, cell, self.budget))

    def warm(self, jobs: int = 1) -> None:
        cells = self.cells()
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                list(pool.map(self.cell, cells))
        else:
            for c in cells:
                self.cell(c)


def sym_trace_matrix(pres: BasePresentation, n: int, hdeg: int, weight: int) -> TraceCell:
    """Matrix of Lambda[C(R)]_{h,w} -> (R_n)_{h,w}: one row per trace monomial, monomial coordinates."""
    return TraceData(pres, n, weight).cell((hdeg, weight))


# ---------------------------------------------------------------------------
# Invariant subcomplex
# ---------------------------------------------------------------------------


def _coords(p: CommPoly, index: dict[Monomial, int]) -> Optional[SparseRow]:
    row: SparseRow = {}
    for mono, c in p.items():
        col = index.get(mono)
        if col is None:
            return None
        row[col] = c
    return row


def invariant_subcomplex(
    pres: BasePresentation, n: int, max_weight: int, *, jobs: int = 1, data: Optional[TraceData] = None
) -> TruncatedComplex:
    """GL_n-invariants of R_n spanned by trace monomials, with the ambient differential."""
    data = data or TraceData(pres, n, max_weight)
    data.warm(jobs)
    alg = data.alg
    bases: dict[Cell, tuple[Monomial, ...]] = {}
    polys: dict[Cell, list[CommPoly]] = {}
    for cell in data.cells():
        tc = data.cell(cell)
        if tc.independent:
            bases[cell] = tuple(tc.monomials[i] for i in tc.independent)
            polys[cell] = [tc.expansions[i] for i in tc.independent]

    images: dict[Cell, list[SparseRow]] = {}
    for (h, w), basis in polys.items():
        targets = [alg.extend_derivation(p) for p in basis]
        if not any(targets):
            images[(h, w)] = [{} for _ in targets]
            continue
        lower = polys.get((h - 1, w), [])
        index: dict[Monomial, int] = {}
        for p in lower:
            for mono, _ in p.items():
                index.setdefault(mono, len(index))
        basis_rows = [_coords(p, index) for p in lower]
        target_rows = [_coords(t, index) for t in targets]
        solution = None
        if all(r is not None for r in target_rows):
            solution = solve_in_span(basis_rows, target_rows, len(index))  # type: ignore[arg-type]
        if solution is None:
            raise ProcesiClosureError(
                f"differential of an invariant in cell (hdeg {h}, weight {w}) at n = {n} "
                "is not a combination of trace monomials"
            )
        images[(h, w)] = solution

    label_index = {cell: {m: i for i, m in enumerate(b)} for cell, b in bases.items()}

    def image(label, cell):
        row = images[cell][label_index[cell][label]]
        lower = bases[(cell[0] - 1, cell[1])] if row else ()
        return {lower[k]: c for k, c in row.items()}

    return TruncatedComplex.build(bases, image, name=f"{data.pres.name}_{n}^GL")


def invariant_dimension(alg: MatrixVariableAlgebra, hdeg: int, weight: int) -> int:
    """dim of the gl_n-invariants in (R_n)_{h,w}, from the kernel of the infinitesimal action."""
    return len(gl_invariant_nullspace(alg, hdeg, weight))


# ---------------------------------------------------------------------------
# Obstruction complex
# ---------------------------------------------------------------------------


def obstruction_inclusion(
    pres: BasePresentation, n: int, max_weight: int, *, jobs: int = 1, data: Optional[TraceData] = None
) -> dict[Cell, list[SparseRow]]:
    """Basis of K(A, n) per cell, as rows over the monomial basis of the stable complex."""
    data = data or TraceData(pres, n, max_weight)
    data.warm(jobs)
    kernels: dict[Cell, list[SparseRow]] = {}
    for cell in data.cells():
        tc = data.cell(cell)
        if not tc.monomials:
            continue
        ker = left_kernel(list(tc.rows), len(tc.columns))
        if ker:
            kernels[cell] = ker
    return kernels


def obstruction_complex(
    pres: BasePresentation, n: int, max_weight: int, *, jobs: int = 1, data: Optional[TraceData] = None
) -> TruncatedComplex:
    """K(A, n): the kernel of the symmetrized trace, a subcomplex of the stable complex."""
    data = data or TraceData(pres, n, max_weight)
    stable = data.stable
    kernels = obstruction_inclusion(pres, n, max_weight, jobs=jobs, data=data)
    all_cells = stable.monomials_by_cell(data.max_weight)
    images: dict[Cell, list[SparseRow]] = {}
    for (h, w), vectors in kernels.items():
        domain = all_cells[(h, w)]
        lower_monos = all_cells.get((h - 1, w), [])
        lower_index = {m: i for i, m in enumerate(lower_monos)}
        targets: list[SparseRow] = []
        for vec in vectors:
            acc = CommPoly.zero(stable.variables)
            for i, c in vec.items():
                acc = acc + stable.extend_derivation(CommPoly._from_clean(stable.variables, {domain[i]: Fraction(1)})).scale(c)
            targets.append({lower_index[m]: c for m, c in acc.items()})
        if not any(targets):
            images[(h, w)] = [{} for _ in targets]
            continue
        lower = kernels.get((h - 1, w), [])
        solution = solve_in_span(lower, targets, len(lower_monos)) if lower else None
        if solution is None:
            raise ProcesiClosureError(f"obstruction complex is not closed under d at (hdeg {h}, weight {w})")
        images[(h, w)] = solution

    bases = {cell: tuple(range(len(v))) for cell, v in kernels.items()}
    return TruncatedComplex.build(
        bases, lambda label, cell: images[cell][label], name=f"K({data.pres.name}, {n})"
    )


# ---------------------------------------------------------------------------
# Stabilization scan
# ---------------------------------------------------------------------------


def empirical_stability(pres: BasePresentation, max_weight: int, max_n: int, *, jobs: int = 1) -> list[StabilityRow]:
    """Least n <= max_n from which invariant homology equals the stable homology, per weight."""
    stable = betti(stable_chain_complex(pres, max_weight), jobs=jobs)
    per_n: dict[int, BettiTable] = {}
    for n in range(1, max_n + 1):
        per_n[n] = betti(invariant_subcomplex(pres, n, max_weight, jobs=jobs), jobs=jobs)
        logger.info(f"stabilization scan: n = {n} done")
    rows: list[StabilityRow] = []
    for w in range(0, max_weight + 1):
        target = {h: d for (h, ww), d in stable.as_dict().items() if ww == w and d}
        row = StabilityRow(weight=w, stable_dims={str(h): d for h, d in sorted(target.items())})
        matches: dict[int, bool] = {}
        for n, table in per_n.items():
            got = {h: d for (h, ww), d in table.as_dict().items() if ww == w and d}
            row.dims_by_n[str(n)] = {str(h): d for h, d in sorted(got.items())}
            matches[n] = got == target
        onset = None
        for n in range(max_n, 0, -1):
            if not matches[n]:
                break
            onset = n
        row.onset = onset
        rows.append(row)
    return rows


def gl_invariant_nullspace(alg: MatrixVariableAlgebra, hdeg: int, weight: int) -> list[SparseRow]:
    """Basis of gl_n-invariants of a cell in monomial coordinates (for small cells)."""
    monos = alg.monomials_by_cell(weight).get((hdeg, weight), [])
    n = alg.n
    columns: dict[Monomial, int] = {m: i for i, m in enumerate(monos)}
    constraint_rows: list[SparseRow] = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            image_index: dict[Monomial, int] = {}
            transposed: dict[int, SparseRow] = {}
            for m in monos:
                p = CommPoly._from_clean(alg.variables, {m: Fraction(1)})
                for mono, c in alg.gl_action(p, a, b).items():
                    r = image_index.setdefault(mono, len(image_index))
                    transposed.setdefault(r, {})[columns[m]] = c
            constraint_rows.extend(transposed[r] for r in sorted(transposed))
    return nullspace(constraint_rows, len(monos))
