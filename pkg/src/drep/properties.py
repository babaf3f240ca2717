"""Seeded randomized property suites over small instances."""

from __future__ import annotations

import logging
import random
from typing import Callable

from drep.cyclic import canonical_cyclic, cyclic_derivative, cyclic_projection, is_bad, norm_operator, rotations
from drep.graded import Alphabet, Generator, NCPoly, koszul_sign
from drep.models import ValidationReport
from drep.presentations.builtins import commuting_plane
from drep.representation import MatrixVariableAlgebra, stabilization_map

logger = logging.getLogger(__name__)

DEFAULT_INSTANCES = 200

# letters of both parities and mixed weights
MIXED = Alphabet(
    [
        Generator(name="a", hdeg=0, weight=1),
        Generator(name="b", hdeg=1, weight=1),
        Generator(name="c", hdeg=1, weight=2),
        Generator(name="e", hdeg=2, weight=1),
    ]
)


def _random_word(rng: random.Random, alphabet: Alphabet, min_len: int, max_len: int) -> tuple[int, ...]:
    return tuple(rng.randrange(len(alphabet)) for _ in range(rng.randint(min_len, max_len)))


def koszul_sign_coherence(seed: int = 0, instances: int = DEFAULT_INSTANCES) -> ValidationReport:
    """Reordering in two steps carries the product of the two signs."""
    rng = random.Random(seed)
    report = ValidationReport(name="koszul-sign-coherence", meta={"seed": seed})
    for _ in range(instances):
        size = rng.randint(1, 7)
        parities = [rng.randint(0, 1) for _ in range(size)]
        inner = rng.sample(range(1, size + 1), size)
        outer = rng.sample(range(1, size + 1), size)
        composite = [inner[p - 1] for p in outer]
        moved = [parities[q - 1] for q in inner]
        report.checked += 1
        if koszul_sign(composite, parities) != koszul_sign(inner, parities) * koszul_sign(outer, moved):
            report.add(f"{inner} then {outer}", f"parities {parities}")
    return report


def canonicalization_consistency(seed: int = 0, instances: int = DEFAULT_INSTANCES) -> ValidationReport:
    """Every rotation lands on the same representative; N(w) vanishes exactly on bad words."""
    rng = random.Random(seed)
    report = ValidationReport(name="cyclic-canonicalization", meta={"seed": seed})
    for _ in range(instances):
        word = _random_word(rng, MIXED, 1, 6)
        label = MIXED.render_word(word)
        report.checked += 1
        canon = canonical_cyclic(MIXED, word)
        if (canon is None) != is_bad(MIXED, word):
            report.add(label, "canonical_cyclic and is_bad disagree")
            continue
        if bool(norm_operator(MIXED, word)) == is_bad(MIXED, word):
            report.add(label, "N(w) = 0 must hold exactly for bad words")
        for rotated, sign in rotations(MIXED, word):
            other = canonical_cyclic(MIXED, rotated)
            if canon is None or other is None:
                if (canon is None) != (other is None):
                    report.add(label, f"rotation {MIXED.render_word(rotated)} changes goodness")
                continue
            if other[0] != canon[0] or sign * other[1] != canon[1]:
                report.add(label, f"rotation {MIXED.render_word(rotated)} lands on another class or sign")
        expected = {} if canon is None else {canon[0]: len(word) * canon[1]}
        if cyclic_projection(norm_operator(MIXED, word)) != expected:
            report.add(label, "projection of N(w) is not len(w) times [w]")
    return report


def commutators_have_zero_cyclic_derivative(seed: int = 0, instances: int = DEFAULT_INSTANCES) -> ValidationReport:
    """d/dg (uv - (-1)^{|u||v|} vu) = 0 for every generator g."""
    rng = random.Random(seed)
    report = ValidationReport(name="cyclic-derivative-commutators", meta={"seed": seed})
    for _ in range(instances):
        u = _random_word(rng, MIXED, 1, 3)
        v = _random_word(rng, MIXED, 1, 3)
        sign = -1 if MIXED.word_parity(u) and MIXED.word_parity(v) else 1
        commutator = NCPoly.word(MIXED, u + v) - NCPoly.word(MIXED, v + u, sign)
        report.checked += 1
        for g in MIXED:
            residual = cyclic_derivative(commutator, g.name)
            if residual:
                report.add(f"[{MIXED.render_word(u)}, {MIXED.render_word(v)}]", f"d/d{g.name} = {residual.render()}")
    return report


def _trace_suite(
    name: str, seed: int, instances: int, check: Callable[[tuple[int, ...], int], str | None]
) -> ValidationReport:
    rng = random.Random(seed)
    plane = commuting_plane()
    report = ValidationReport(name=name, meta={"seed": seed, "presentation": plane.name})
    for _ in range(instances):
        word = _random_word(rng, plane.alphabet, 1, 4)
        n = rng.choice((2, 3) if len(word) <= 3 else (2,))
        report.checked += 1
        problem = check(word, n)
        if problem:
            report.add(f"Tr_{n}({plane.alphabet.render_word(word)})", problem)
    return report


_REPS: dict[int, MatrixVariableAlgebra] = {}


def _rep(n: int) -> MatrixVariableAlgebra:
    if n not in _REPS:
        _REPS[n] = MatrixVariableAlgebra(commuting_plane(), n)
    return _REPS[n]


def trace_invariance(seed: int = 0, instances: int = DEFAULT_INSTANCES) -> ValidationReport:
    """Traces of words are killed by the infinitesimal gl_n action."""

    def check(word: tuple[int, ...], n: int) -> str | None:
        residuals = _rep(n).infinitesimal_invariance_check(_rep(n).trace_word(word))
        return f"E_{residuals[0][0]} acts by {residuals[0][1].render()}" if residuals else None

    return _trace_suite("trace-invariance", seed, instances, check)


def trace_stabilization(seed: int = 0, instances: int = DEFAULT_INSTANCES) -> ValidationReport:
    """mu(Tr_n(w)) = Tr_{n-1}(w)."""

    def check(word: tuple[int, ...], n: int) -> str | None:
        big, small = _rep(n), _rep(n - 1)
        image = stabilization_map(big.trace_word(word), big, small)
        expected = small.trace_word(word)
        return None if image == expected else f"{image.render()} != {expected.render()}"

    return _trace_suite("trace-stabilization", seed, instances, check)


PROPERTY_SUITES: dict[str, Callable[..., ValidationReport]] = {
    "koszul-signs": koszul_sign_coherence,
    "canonicalization": canonicalization_consistency,
    "cyclic-derivative": commutators_have_zero_cyclic_derivative,
    "trace-invariance": trace_invariance,
    "trace-stabilization": trace_stabilization,
}


def run_property_suites(seed: int = 0, instances: int = DEFAULT_INSTANCES) -> list[ValidationReport]:
    reports = [suite(seed, instances) for suite in PROPERTY_SUITES.values()]
    for r in reports:
        logger.debug(f"property suite {r.name}: {r.checked} instances, {len(r.violations)} failures")
    return reports
