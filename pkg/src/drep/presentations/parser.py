"""Line-oriented presentation file format.

    # comment
    complete-to-weight 4
    generator x hdeg 0 weight 1
    generator t hdeg 1 weight 2
    d t = x*x - 1/2*x*x

A leading ``commutative`` line turns the file into a free graded-commutative
DG algebra (the format ``drep rep`` emits).
"""

from __future__ import annotations

import logging
import re
from fractions import Fraction
from pathlib import Path

from drep.errors import PresentationError, PresentationSyntaxError
from drep.graded import Alphabet, CommPoly, Generator, NCPoly
from drep.presentations.base import CommDGA, DGAPresentation, comm_variables_from_generators

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[*+\-^]))")
_GENERATOR = re.compile(r"^generator\s+(\S+)\s+hdeg\s+(-?\d+)\s+weight\s+(-?\d+)$")
_DIFFERENTIAL = re.compile(r"^d\s+(\S+)\s*=\s*(.*)$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

Term = tuple[Fraction, list[str]]


def parse_terms(text: str, line: int | None = None) -> list[Term]:
    """Split ``2*x*y - 1/3*y^2 + z`` into (coefficient, factor names) pairs."""
    text = text.replace("−", "-").strip()
    if not text:
        raise PresentationSyntaxError("empty polynomial", line)
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationSyntaxError(f"unexpected character {text[pos:].strip()[0]!r}", line)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()

    terms: list[Term] = []
    i = 0
    while i < len(tokens):
        sign = Fraction(1)
        while i < len(tokens) and tokens[i] in (("op", "+"), ("op", "-")):
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coeff = sign
        factors: list[str] = []
        expect_factor = True
        while i < len(tokens) and tokens[i] not in (("op", "+"), ("op", "-")):
            kind, value = tokens[i]
            if not expect_factor:
                if (kind, value) != ("op", "*"):
                    raise PresentationSyntaxError(f"expected '*' before {value!r}", line)
                expect_factor = True
                i += 1
                continue
            if kind == "num":
                coeff *= Fraction(value)
            elif kind == "name":
                power = 1
                if i + 1 < len(tokens) and tokens[i + 1] == ("op", "^"):
                    if i + 2 >= len(tokens) or tokens[i + 2][0] != "num" or "/" in tokens[i + 2][1]:
                        raise PresentationSyntaxError(f"bad exponent after {value!r}", line)
                    power = int(tokens[i + 2][1])
                    i += 2
                factors.extend([value] * power)
            else:
                raise PresentationSyntaxError(f"unexpected {value!r}", line)
            expect_factor = False
            i += 1
        if expect_factor:
            raise PresentationSyntaxError("dangling operator", line)
        terms.append((coeff, factors))
    return terms


def _nc_from_terms(pres_alphabet: Alphabet, terms: list[Term], line: int) -> NCPoly:
    out: dict[tuple[int, ...], Fraction] = {}
    for coeff, factors in terms:
        if factors == [] and coeff == 0:
            continue
        try:
            word = tuple(pres_alphabet.index(f) for f in factors)
        except KeyError as e:
            raise PresentationError(f"line {line}: unknown generator {e.args[0]!r} in differential", e.args[0])
        out[word] = out.get(word, 0) + coeff
    return NCPoly(pres_alphabet, out)


def parse_presentation(text: str, *, name: str = "") -> DGAPresentation | CommDGA:
    """Parse presentation text; commutative files yield a CommDGA."""
    generators: list[Generator] = []
    seen: set[str] = set()
    raw_diffs: list[tuple[int, str, str]] = []
    complete: int | None = None
    resolves = ""
    commutative = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "commutative":
            if generators or raw_diffs:
                raise PresentationSyntaxError("'commutative' must precede all generators", lineno)
            commutative = True
            continue
        if line.startswith("complete-to-weight"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise PresentationSyntaxError("expected 'complete-to-weight <int>'", lineno)
            complete = int(parts[1])
            continue
        if line.startswith("resolves "):
            resolves = line[len("resolves ") :].strip()
            continue
        m = _GENERATOR.match(line)
        if m:
            gname, hdeg, weight = m.group(1), int(m.group(2)), int(m.group(3))
            if not _NAME.match(gname):
                raise PresentationSyntaxError(f"invalid generator name {gname!r}", lineno)
            if gname in seen:
                raise PresentationError(f"line {lineno}: generator {gname} declared twice", gname)
            if weight < 1:
                raise PresentationError(f"line {lineno}: generator {gname} needs weight >= 1", gname)
            if hdeg < 0:
                raise PresentationError(f"line {lineno}: generator {gname} needs hdeg >= 0", gname)
            seen.add(gname)
            generators.append(Generator(name=gname, hdeg=hdeg, weight=weight))
            continue
        m = _DIFFERENTIAL.match(line)
        if m:
            raw_diffs.append((lineno, m.group(1), m.group(2)))
            continue
        raise PresentationSyntaxError(f"cannot parse {line!r}", lineno)

    parsed: dict[str, list[Term]] = {}
    for lineno, gname, body in raw_diffs:
        if gname not in seen:
            raise PresentationError(f"line {lineno}: differential of unknown generator {gname!r}", gname)
        if gname in parsed:
            raise PresentationError(f"line {lineno}: second differential for {gname}", gname)
        terms = parse_terms(body, lineno)
        parsed[gname] = terms

    if commutative:
        variables = comm_variables_from_generators(generators)
        diffs: dict[int, CommPoly] = {}
        for lineno, gname, _ in raw_diffs:
            out: dict[tuple[int, ...], Fraction] = {}
            for coeff, factors in parsed[gname]:
                try:
                    mono = tuple(variables.index_by_name(f) for f in factors)
                except KeyError as e:
                    raise PresentationError(f"line {lineno}: unknown generator {e.args[0]!r} in differential", e.args[0])
                out[mono] = out.get(mono, 0) + coeff
            diffs[variables.index_by_name(gname)] = CommPoly(variables, {m: c for m, c in out.items() if c})
        logger.debug(f"parsed commutative presentation with {len(variables)} variables")
        return CommDGA(variables, diffs, name=name, complete_to_weight=complete)

    alphabet = Alphabet(generators)
    nc_diffs = {
        gname: _nc_from_terms(alphabet, parsed[gname], lineno) for lineno, gname, _ in raw_diffs
    }
    logger.debug(f"parsed presentation with {len(alphabet)} generators")
    return DGAPresentation(
        generators, nc_diffs, name=name, complete_to_weight=complete, resolves=resolves
    )


def load_presentation_file(path: str | Path) -> DGAPresentation | CommDGA:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise PresentationError(f"cannot read presentation {str(path)!r}: {e.strerror or e}") from e
    return parse_presentation(text, name=path.stem)
