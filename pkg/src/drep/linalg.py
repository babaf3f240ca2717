"""Exact sparse linear algebra over the rationals.

Matrices are lists of sparse rows (``dict[column, Fraction]``) on the drep
side and sympy ``DomainMatrix`` objects over ``QQ`` for elimination.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

SparseRow = dict[int, Fraction]


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def to_domain_matrix(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> DomainMatrix:
    """Sparse rows to a ``DomainMatrix`` over QQ of shape (len(rows), ncols)."""
    data = {i: {j: _to_qq(v) for j, v in row.items() if v} for i, row in enumerate(rows)}
    data = {i: r for i, r in data.items() if r}
    return DomainMatrix(data, (len(rows), ncols), QQ)


def from_domain_matrix(matrix: DomainMatrix) -> list[SparseRow]:
    nrows = matrix.shape[0]
    sdm = matrix.to_sdm()
    out: list[SparseRow] = [{} for _ in range(nrows)]
    for i, row in sdm.items():
        out[i] = {j: _from_qq(v) for j, v in row.items() if v}
    return out


def transpose(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> list[SparseRow]:
    out: list[SparseRow] = [{} for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            if v:
                out[j][i] = v
    return out


def dense_to_sparse(matrix: Sequence[Sequence[int | Fraction]]) -> tuple[list[SparseRow], int]:
    ncols = len(matrix[0]) if matrix else 0
    rows = [{j: Fraction(v) for j, v in enumerate(r) if v} for r in matrix]
    return rows, ncols


def rank_exact(rows: Sequence[Mapping[int, Fraction]] | Sequence[Sequence[int | Fraction]], ncols: int | None = None) -> int:
    """Rank over QQ. Accepts sparse rows with ``ncols`` or a dense list of lists."""
    if ncols is None:
        rows, ncols = dense_to_sparse(rows)  # type: ignore[arg-type]
    if not rows or not ncols or not any(rows):
        return 0
    return to_domain_matrix(rows, ncols).rank()


def rref(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> tuple[list[SparseRow], tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if not rows or not ncols or not any(rows):
        return [], ()
    reduced, pivots = to_domain_matrix(rows, ncols).rref()
    out = from_domain_matrix(reduced)
    return [r for r in out if r], tuple(pivots)


def independent_rows(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> list[int]:
    """Indices of the greedy maximal independent subset of ``rows`` (first wins)."""
    if not rows:
        return []
    _, pivots = rref(transpose(rows, ncols), len(rows))
    return list(pivots)


def nullspace(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> list[SparseRow]:
    """Basis of {v : M v = 0} where M has the given rows; one basis vector per free column."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis: list[SparseRow] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec: SparseRow = {free: Fraction(1)}
        for row, p in zip(reduced, pivots):
            v = row.get(free)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis


def left_kernel(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> list[SparseRow]:
    """Basis of {c : sum_i c_i row_i = 0}."""
    return nullspace(transpose(rows, ncols), len(rows))


def solve_in_span(
    basis: Sequence[Mapping[int, Fraction]],
    targets: Sequence[Mapping[int, Fraction]],
    ncols: int,
) -> list[SparseRow] | None:
    """Coordinates of each target in the span of linearly independent ``basis`` rows.

    Returns None when some target is not in the span.
    """
    k = len(basis)
    if not targets:
        return []
    if not any(targets):
        return [{} for _ in targets]
    if k == 0:
        return None
    columns = transpose(list(basis) + list(targets), ncols)
    reduced, pivots = rref(columns, k + len(targets))
    if any(p >= k for p in pivots):
        return None
    if list(pivots) != list(range(k)):
        raise ValueError("solve_in_span needs linearly independent basis rows")
    out: list[SparseRow] = []
    for t in range(len(targets)):
        col = k + t
        out.append({i: row[col] for i, row in enumerate(reduced[:k]) if row.get(col)})
    return out


def apply_rows(coeffs: Mapping[int, Fraction], rows: Sequence[Mapping[int, Fraction]]) -> SparseRow:
    """The linear combination sum_i coeffs[i] * rows[i]."""
    out: SparseRow = {}
    for i, c in coeffs.items():
        if not c:
            continue
        for j, v in rows[i].items():
            s = out.get(j, 0) + c * v
            if s:
                out[j] = s
            else:
                out.pop(j, None)
    return out


def echelon_rank(matrix: Sequence[Sequence[int | Fraction]]) -> int:
    """Plain Fraction Gaussian elimination; slow, used to cross-check ``rank_exact``."""
    work = [[Fraction(v) for v in row] for row in matrix]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                factor = work[r][col] / work[rank][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        rank += 1
    return rank
