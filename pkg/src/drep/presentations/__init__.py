"""Free DG-algebra presentations: file parsing, builtins and the generator census."""

from __future__ import annotations

from drep.presentations.base import (
    BasePresentation,
    CensusPresentation,
    CommDGA,
    DGAPresentation,
    GeneratorCensus,
    require_dga,
)
from drep.presentations.builtins import BUILTINS, builtin_resolution
from drep.presentations.parser import load_presentation_file, parse_presentation

BUILTIN_PREFIX = "builtin:"


def load_presentation(source: str, max_weight: int) -> BasePresentation:
    """Resolve a CLI presentation argument: a file path or ``builtin:name[:param]``."""
    if source.startswith(BUILTIN_PREFIX):
        return builtin_resolution(source[len(BUILTIN_PREFIX) :], max_weight)
    return load_presentation_file(source)


def weight_census(pres: BasePresentation, max_weight: int) -> GeneratorCensus:
    return pres.census(max_weight)


__all__ = [
    "BUILTINS",
    "BasePresentation",
    "CensusPresentation",
    "CommDGA",
    "DGAPresentation",
    "GeneratorCensus",
    "builtin_resolution",
    "load_presentation",
    "load_presentation_file",
    "parse_presentation",
    "require_dga",
    "weight_census",
]
