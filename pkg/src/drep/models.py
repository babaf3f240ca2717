"""Pydantic models for every report that crosses the CLI boundary."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from typing import Any, Optional

from pydantic import BaseModel, Field
from ulid import ULID


def _now() -> datetime:
    return datetime.now(timezone.utc)


def _run_id() -> str:
    return str(ULID())


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------


class BettiCell(BaseModel):
    """Homology dimension of one (hdeg, weight) cell."""

    hdeg: int
    weight: int
    dim: int = Field(ge=0)
    lower_bound: bool = False  # top stored degree of a truncated weight


class BettiTable(BaseModel):
    """Homology dimensions per (hdeg, weight); absent cells are zero."""

    cells: list[BettiCell] = Field(default_factory=list)
    meta: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_dims(
        cls,
        dims: dict[tuple[int, int], int],
        lower_bounds: set[tuple[int, int]] | None = None,
        meta: dict[str, Any] | None = None,
    ) -> "BettiTable":
        lower_bounds = lower_bounds or set()
        cells = [
            BettiCell(hdeg=h, weight=w, dim=d, lower_bound=(h, w) in lower_bounds)
            for (h, w), d in sorted(dims.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ]
        return cls(cells=cells, meta=dict(meta or {}))

    def dim(self, hdeg: int, weight: int) -> int:
        for cell in self.cells:
            if cell.hdeg == hdeg and cell.weight == weight:
                return cell.dim
        return 0

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(c.hdeg, c.weight): c.dim for c in self.cells}

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in self.as_dict().items() if v}

    def weights(self) -> list[int]:
        return sorted({c.weight for c in self.cells})

    def euler(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for cell in self.cells:
            out[cell.weight] = out.get(cell.weight, 0) + (-1) ** (cell.hdeg % 2) * cell.dim
        return out

    def to_grid(self) -> str:
        """Render an (hdeg rows x weight columns) grid; ``*`` marks lower bounds."""
        if not self.cells:
            return "(empty)"
        hdegs = sorted({c.hdeg for c in self.cells})
        weights = self.weights()
        index = {(c.hdeg, c.weight): c for c in self.cells}
        width = max(4, *(len(str(c.dim)) + 1 for c in self.cells))
        lines = ["h\\w " + "".join(str(w).rjust(width) for w in weights)]
        for h in hdegs:
            row = []
            for w in weights:
                cell = index.get((h, w))
                text = "." if cell is None else f"{cell.dim}{'*' if cell.lower_bound else ''}"
                row.append(text.rjust(width))
            lines.append(str(h).ljust(4) + "".join(row))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class Violation(BaseModel):
    """One failed check inside a validation report."""

    subject: str
    detail: str


class ValidationReport(BaseModel):
    """Outcome of a structural check (d^2 = 0, Maurer-Cartan, P3 comparison, ...)."""

    name: str
    checked: int = 0
    violations: list[Violation] = Field(default_factory=list)
    meta: dict[str, Any] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, subject: str, detail: str) -> None:
        self.violations.append(Violation(subject=subject, detail=detail))


class SeriesReport(BaseModel):
    """Truncated series coefficients plus an optional verification verdict."""

    name: str
    coefficients: list[str] = Field(default_factory=list)
    verified: Optional[bool] = None
    first_mismatch: Optional[int] = None
    meta: dict[str, Any] = Field(default_factory=dict)


class StabilityRow(BaseModel):
    """Least n at which invariant homology of one weight reaches its stable value."""

    weight: int
    stable_dims: dict[str, int] = Field(default_factory=dict)
    dims_by_n: dict[str, dict[str, int]] = Field(default_factory=dict)
    onset: Optional[int] = None  # None = not reached


class CheckResult(BaseModel):
    """One line of the reproduction scoreboard."""

    key: str
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


# ---------------------------------------------------------------------------
# Run manifest
# ---------------------------------------------------------------------------


class RunManifest(BaseModel):
    """Identity of one CLI computation; ``cache_key`` ignores run_id and timestamp."""

    run_id: str = Field(default_factory=_run_id)
    command: str
    digest: str = ""
    params: dict[str, Any] = Field(default_factory=dict)
    version: str = ""
    created_at: datetime = Field(default_factory=_now)

    def cache_key(self) -> str:
        payload = json.dumps(
            {"command": self.command, "digest": self.digest, "params": self.params, "version": self.version},
            sort_keys=True,
            default=str,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()
