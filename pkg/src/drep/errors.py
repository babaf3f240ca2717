"""Exception hierarchy shared by all drep modules."""

from __future__ import annotations


class DrepError(Exception):
    """Base class for every error raised by drep."""


class PresentationSyntaxError(DrepError, ValueError):
    """A presentation file could not be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class PresentationError(DrepError, ValueError):
    """A presentation violates a degree, weight or naming invariant."""

    def __init__(self, message: str, generator: str | None = None) -> None:
        self.generator = generator
        super().__init__(message)


class IncompletePresentationError(DrepError, ValueError):
    """A computation asked for weights beyond the presentation's completeness bound."""


class MissingDifferentialError(DrepError, ValueError):
    """A census-only presentation was used where a differential is required."""


class AlphabetMismatchError(DrepError, ValueError):
    """Two polynomials over different generator or variable sets were combined."""


class ChainComplexError(DrepError):
    """A differential fails to square to zero."""

    def __init__(self, message: str, cell: tuple[int, int] | None = None) -> None:
        self.cell = cell
        super().__init__(message)


class CellBudgetExceeded(DrepError):
    """A cell is larger than the configured monomial budget."""

    def __init__(self, message: str, report: dict | None = None) -> None:
        self.report = report or {}
        super().__init__(message)


class ProcesiClosureError(DrepError):
    """The differential of a trace monomial left the span of trace monomials."""


class SeriesError(DrepError, ValueError):
    """Truncated series arithmetic met a non-integral or non-invertible value."""


class TwistingCochainError(DrepError, ValueError):
    """A twisting cochain was evaluated outside the components it defines."""
