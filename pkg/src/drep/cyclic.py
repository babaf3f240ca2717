"""Cyclic words: signed rotation, the norm operator, cyclic derivatives and the cyclic complex.

A word is *bad* when some rotation returns it with sign -1; its norm then
vanishes and it lies in the graded commutator subspace. Good words, up to
rotation, form a basis of the cyclic quotient R/[R, R].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from drep.errors import PresentationError
from drep.graded import Alphabet, NCPoly, Word
from drep.homology import TruncatedComplex
from drep.presentations.base import BasePresentation, require_dga

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class CyclicWord:
    """Canonical representative of a good cyclic word; ordered by (weight, hdeg, word)."""

    weight: int
    hdeg: int
    word: Word

    @property
    def parity(self) -> int:
        return self.hdeg % 2

    def render(self, alphabet: Alphabet) -> str:
        return f"[{alphabet.render_word(self.word)}]"


def rotate(alphabet: Alphabet, word: Word) -> tuple[Word, int]:
    """Move the last letter to the front with sign (-1)^{|last| * |rest|}."""
    if not word:
        raise PresentationError("cannot rotate the empty word")
    last = alphabet.parity(word[-1])
    rest = alphabet.word_parity(word[:-1])
    return (word[-1],) + word[:-1], -1 if (last and rest) else 1


def rotations(alphabet: Alphabet, word: Word) -> list[tuple[Word, int]]:
    """[(tau^k w, cumulative sign)] for k = 0 .. len(w) - 1."""
    out = [(word, 1)]
    current, sign = word, 1
    for _ in range(1, len(word)):
        current, s = rotate(alphabet, current)
        sign *= s
        out.append((current, sign))
    return out


def norm_operator(alphabet: Alphabet, word: Word) -> NCPoly:
    """N = 1 + tau + ... + tau^{n-1}; N(1) = 1."""
    if not word:
        return NCPoly.one(alphabet)
    terms: dict[Word, Fraction] = {}
    for w, s in rotations(alphabet, word):
        terms[w] = terms.get(w, 0) + s
    return NCPoly(alphabet, terms)


def is_bad(alphabet: Alphabet, word: Word) -> bool:
    return any(w == word and s < 0 for w, s in rotations(alphabet, word)[1:])


def canonical_cyclic(alphabet: Alphabet, word: Word) -> Optional[tuple[CyclicWord, int]]:
    """(representative, sign) with [word] = sign * [representative], or None for bad words.

    The representative is the lexicographically minimal rotation; among equal
    rotations the smallest rotation index wins.
    """
    if not word:
        raise PresentationError("the empty word has no cyclic class in the reduced quotient")
    rots = rotations(alphabet, word)
    best_word, best_sign = rots[0]
    for w, s in rots[1:]:
        if w == word and s < 0:
            return None
        if w < best_word:
            best_word, best_sign = w, s
    cw = CyclicWord(weight=alphabet.word_weight(best_word), hdeg=alphabet.word_hdeg(best_word), word=best_word)
    return cw, best_sign


def is_canonical_good(alphabet: Alphabet, word: Word) -> bool:
    """True when ``word`` is good and is its own minimal rotation."""
    for w, s in rotations(alphabet, word)[1:]:
        if w == word and s < 0:
            return False
        if w < word:
            return False
    return True


def cyclic_projection(p: NCPoly) -> dict[CyclicWord, Fraction]:
    """Image of p in the cyclic quotient, as coordinates on good cyclic words."""
    out: dict[CyclicWord, Fraction] = {}
    for w, c in p.items():
        if not w:
            continue
        canon = canonical_cyclic(p.alphabet, w)
        if canon is None:
            continue
        cw, s = canon
        v = out.get(cw, 0) + s * c
        if v:
            out[cw] = v
        else:
            out.pop(cw, None)
    return out


def cyclic_derivative(p: NCPoly, generator: str | int) -> NCPoly:
    """T_g o N: rotate every word through, keep those starting with g and strip it."""
    a = p.alphabet
    g = a.index(generator) if isinstance(generator, str) else generator
    terms: dict[Word, Fraction] = {}
    for w, c in p.items():
        if not w:
            continue
        for rw, s in rotations(a, w):
            if rw[0] == g:
                key = rw[1:]
                terms[key] = terms.get(key, 0) + s * c
    return NCPoly(a, terms)


def cyclic_basis(pres: BasePresentation, max_weight: int) -> dict[tuple[int, int], list[CyclicWord]]:
    """Good cyclic words of weight 1..max_weight grouped by (hdeg, weight)."""
    dga = require_dga(pres)
    dga.require_weight(max_weight)
    a = dga.alphabet
    out: dict[tuple[int, int], list[CyclicWord]] = {}
    for weight in range(1, max_weight + 1):
        for word in dga.words_of_weight(weight):
            if is_canonical_good(a, word):
                cw = CyclicWord(weight=weight, hdeg=a.word_hdeg(word), word=word)
                out.setdefault((cw.hdeg, weight), []).append(cw)
    for cell in out.values():
        cell.sort()
    logger.debug(f"cyclic basis of {dga.name} to weight {max_weight}: {sum(map(len, out.values()))} words")
    return out


def cyclic_differential(pres: BasePresentation, cw: CyclicWord) -> dict[CyclicWord, Fraction]:
    """d on the cyclic quotient: apply the presentation's d, then project."""
    dga = require_dga(pres)
    return cyclic_projection(dga.extend_derivation(NCPoly.word(dga.alphabet, cw.word)))


def cyclic_complex(pres: BasePresentation, max_weight: int) -> TruncatedComplex:
    """The reduced cyclic complex C(R) truncated at ``max_weight``."""
    basis = cyclic_basis(pres, max_weight)
    return TruncatedComplex.build(
        basis,
        lambda cw, cell: cyclic_differential(pres, cw),
        name=f"C({pres.name})",
    )
