"""Bigraded truncated chain complexes and their homology over the rationals."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from drep.errors import ChainComplexError
from drep.linalg import SparseRow, apply_rows, rank_exact
from drep.models import BettiTable, ValidationReport

logger = logging.getLogger(__name__)

Cell = tuple[int, int]


@dataclass(frozen=True)
class TruncatedComplex:
    """A finite (hdeg, weight)-bigraded chain complex.

    ``bases[(h, w)]`` lists opaque labels; ``differential[(h, w)]`` holds one
    sparse row per basis element giving its image in cell ``(h - 1, w)``.
    Cells in ``truncated`` have an upper neighbour that was not computed.
    """

    bases: Mapping[Cell, tuple[Hashable, ...]]
    differential: Mapping[Cell, tuple[SparseRow, ...]]
    truncated: frozenset[Cell] = field(default_factory=frozenset)
    name: str = ""

    @classmethod
    def build(
        cls,
        bases: Mapping[Cell, Sequence[Hashable]],
        image: Callable[[Hashable, Cell], Mapping[Hashable, Fraction]],
        *,
        truncated: Iterable[Cell] = (),
        name: str = "",
    ) -> "TruncatedComplex":
        """Assemble a complex from labelled bases and a label-level differential."""
        clean = {cell: tuple(labels) for cell, labels in bases.items() if labels}
        index = {cell: {label: i for i, label in enumerate(labels)} for cell, labels in clean.items()}
        diff: dict[Cell, tuple[SparseRow, ...]] = {}
        for (h, w), labels in clean.items():
            target = index.get((h - 1, w), {})
            rows: list[SparseRow] = []
            for label in labels:
                row: SparseRow = {}
                for out_label, coeff in image(label, (h, w)).items():
                    if not coeff:
                        continue
                    pos = target.get(out_label)
                    if pos is None:
                        raise ChainComplexError(
                            f"differential of {label!r} leaves the stored basis of cell {(h - 1, w)}",
                            cell=(h, w),
                        )
                    row[pos] = row.get(pos, 0) + coeff
                rows.append({k: v for k, v in row.items() if v})
            diff[(h, w)] = tuple(rows)
        return cls(clean, diff, frozenset(truncated), name)

    def cells(self) -> list[Cell]:
        return sorted(self.bases, key=lambda c: (c[1], c[0]))

    def dim(self, hdeg: int, weight: int) -> int:
        return len(self.bases.get((hdeg, weight), ()))

    def dims(self) -> dict[Cell, int]:
        return {cell: len(labels) for cell, labels in self.bases.items()}

    def weights(self) -> list[int]:
        return sorted({w for _, w in self.bases})

    def basis(self, hdeg: int, weight: int) -> tuple[Hashable, ...]:
        return tuple(self.bases.get((hdeg, weight), ()))

    def matrix(self, hdeg: int, weight: int) -> tuple[SparseRow, ...]:
        return tuple(self.differential.get((hdeg, weight), ()))

    def check_d_squared(self) -> None:
        """Raise ChainComplexError naming the first cell where d^2 != 0."""
        for h, w in self.cells():
            lower = self.differential.get((h - 1, w))
            if not lower:
                continue
            for row in self.differential[(h, w)]:
                if row and apply_rows(row, lower):
                    raise ChainComplexError(f"d^2 != 0 on cell (hdeg {h}, weight {w})", cell=(h, w))


def _cell_rank(c: TruncatedComplex, cell: Cell) -> int:
    rows = c.differential.get(cell, ())
    h, w = cell
    ncols = c.dim(h - 1, w)
    if not rows or not ncols:
        return 0
    r = rank_exact(list(rows), ncols)
    logger.debug(f"{c.name or 'complex'}: rank d{cell} = {r} ({len(rows)} x {ncols})")
    return r


def differential_ranks(c: TruncatedComplex, *, jobs: int = 1) -> dict[Cell, int]:
    cells = c.cells()
    if jobs > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            ranks = list(pool.map(lambda cell: _cell_rank(c, cell), cells))
    else:
        ranks = [_cell_rank(c, cell) for cell in cells]
    return dict(zip(cells, ranks))


def betti(c: TruncatedComplex, *, jobs: int = 1, check: bool = True) -> BettiTable:
    """dim H = dim C - rank(d out) - rank(d in), per stored cell."""
    if check:
        c.check_d_squared()
    ranks = differential_ranks(c, jobs=jobs)
    dims: dict[Cell, int] = {}
    for (h, w), labels in c.bases.items():
        dims[(h, w)] = len(labels) - ranks.get((h, w), 0) - ranks.get((h + 1, w), 0)
    return BettiTable.from_dims(dims, set(c.truncated), meta={"complex": c.name} if c.name else None)


def euler(c: TruncatedComplex, table: BettiTable | None = None) -> dict[int, int]:
    """Per-weight alternating sum, checked against homology when a table is given."""
    out: dict[int, int] = {}
    for (h, w), labels in c.bases.items():
        out[w] = out.get(w, 0) + (-1) ** (h % 2) * len(labels)
    if table is not None and not c.truncated:
        from_homology = table.euler()
        for w in set(out) | set(from_homology):
            if out.get(w, 0) != from_homology.get(w, 0):
                raise ChainComplexError(
                    f"Euler characteristic of weight {w} differs between chains ({out.get(w, 0)}) "
                    f"and homology ({from_homology.get(w, 0)})"
                )
    return {w: v for w, v in sorted(out.items())}


def les_check(
    sub: TruncatedComplex,
    mid: TruncatedComplex,
    quot: TruncatedComplex,
    *,
    inclusion: Mapping[Cell, Sequence[SparseRow]] | None = None,
    jobs: int = 1,
) -> ValidationReport:
    """Check a short exact sequence of complexes at the level of dimensions and homology.

    Per weight, the homology dimensions of the long exact sequence must admit
    nonnegative ranks that close up at both ends. Without ``inclusion`` that is
    all: the maps themselves are not seen. ``inclusion[cell]`` gives one row per
    basis element of ``sub`` in the coordinates of ``mid``; when it is passed the
    map is also checked to be injective and to commute with the differentials.
    """
    report = ValidationReport(name="long-exact-sequence")
    cells = set(sub.bases) | set(mid.bases) | set(quot.bases)
    for h, w in sorted(cells):
        if mid.dim(h, w) != sub.dim(h, w) + quot.dim(h, w):
            raise ChainComplexError(
                f"dimension mismatch at (hdeg {h}, weight {w}): "
                f"{mid.dim(h, w)} != {sub.dim(h, w)} + {quot.dim(h, w)}",
                cell=(h, w),
            )
    if inclusion is not None:
        _check_inclusion(sub, mid, inclusion, report)
    hs, hm, hq = (betti(x, jobs=jobs) for x in (sub, mid, quot))
    chi_s, chi_m, chi_q = euler(sub, hs), euler(mid, hm), euler(quot, hq)
    for w in sorted({w for _, w in cells}):
        report.checked += 1
        if chi_m.get(w, 0) != chi_s.get(w, 0) + chi_q.get(w, 0):
            report.add(f"weight {w}", f"chi(mid)={chi_m.get(w, 0)} != chi(sub)+chi(quot)")
            continue
        top = max(h for h, ww in cells if ww == w)
        sequence: list[int] = []
        for h in range(top, -1, -1):
            sequence += [hs.dim(h, w), hm.dim(h, w), hq.dim(h, w)]
        rank = 0
        for pos, a in enumerate(sequence):
            rank = a - rank
            if rank < 0:
                report.add(f"weight {w}", f"negative rank at position {pos} of the long exact sequence")
                break
        else:
            if rank != 0:
                report.add(f"weight {w}", f"long exact sequence does not close (residual rank {rank})")
    return report


def _check_inclusion(
    sub: TruncatedComplex, mid: TruncatedComplex, inclusion: Mapping[Cell, Sequence[SparseRow]], report: ValidationReport
) -> None:
    for h, w in sub.cells():
        rows = list(inclusion.get((h, w), ()))
        report.checked += 1
        if len(rows) != sub.dim(h, w) or rank_exact(rows, mid.dim(h, w)) != len(rows):
            report.add(f"cell ({h}, {w})", "inclusion is not injective on this cell")
            continue
        lower = list(inclusion.get((h - 1, w), ()))
        if len(lower) != sub.dim(h - 1, w):
            continue
        for i, row in enumerate(rows):
            left = apply_rows(sub.differential[(h, w)][i], lower)
            right = apply_rows(row, mid.matrix(h, w))
            if left != right:
                report.add(f"cell ({h}, {w})", f"inclusion does not commute with d on basis element {i}")
                break
