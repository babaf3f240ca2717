"""Exact scalars, bigraded generators, free and graded-commutative polynomials.

Everything here is immutable after construction. Words are tuples of
generator positions in an :class:`Alphabet`; commutative monomials are sorted
tuples of variable positions in a :class:`VariableSet` (repetitions allowed
for even variables only).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from pydantic import BaseModel, ConfigDict, Field

from drep.errors import AlphabetMismatchError

Scalar = Fraction
Word = tuple[int, ...]
Monomial = tuple[int, ...]

ONE = Fraction(1)
MINUS_ONE = Fraction(-1)


def as_scalar(value: int | str | Fraction) -> Fraction:
    """Coerce an int, a ``p/q`` string or a Fraction into a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def render_scalar(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# Generators and alphabets
# ---------------------------------------------------------------------------


class Generator(BaseModel):
    """A bigraded generator: homological degree and positive polynomial weight."""

    model_config = ConfigDict(frozen=True)

    name: str
    hdeg: int = 0
    weight: int = Field(default=1, ge=1)

    @property
    def parity(self) -> int:
        return self.hdeg % 2

    @property
    def sort_key(self) -> tuple[int, int, str]:
        return (self.weight, self.hdeg, self.name)


class Alphabet:
    """An ordered generator set; the order is (weight, hdeg, name)."""

    __slots__ = ("generators", "_index", "_parities")

    def __init__(self, generators: Iterable[Generator]) -> None:
        gens = sorted(generators, key=lambda g: g.sort_key)
        index: dict[str, int] = {}
        for pos, gen in enumerate(gens):
            if gen.name in index:
                raise AlphabetMismatchError(f"duplicate generator name {gen.name!r}")
            index[gen.name] = pos
        self.generators: tuple[Generator, ...] = tuple(gens)
        self._index = index
        self._parities = tuple(g.parity for g in gens)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __getitem__(self, pos: int) -> Generator:
        return self.generators[pos]

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __repr__(self) -> str:
        return f"Alphabet({', '.join(g.name for g in self.generators)})"

    def index(self, name: str) -> int:
        return self._index[name]

    def parity(self, pos: int) -> int:
        return self._parities[pos]

    def word_hdeg(self, word: Word) -> int:
        return sum(self.generators[p].hdeg for p in word)

    def word_weight(self, word: Word) -> int:
        return sum(self.generators[p].weight for p in word)

    def word_parity(self, word: Word) -> int:
        return sum(self._parities[p] for p in word) % 2

    def render_word(self, word: Word) -> str:
        if not word:
            return "1"
        return "*".join(self.generators[p].name for p in word)


# ---------------------------------------------------------------------------
# Koszul signs
# ---------------------------------------------------------------------------


def koszul_sign(permutation: Sequence[int], parities: Sequence[int]) -> Fraction:
    """Sign of reordering graded elements.

    ``permutation[i]`` is the (1-based) original position of the element that
    ends up in position ``i``; ``parities`` are indexed by original position.
    """
    if len(permutation) != len(parities):
        raise ValueError(
            f"permutation has length {len(permutation)} but {len(parities)} parities were given"
        )
    if sorted(permutation) != list(range(1, len(permutation) + 1)):
        raise ValueError(f"{list(permutation)} is not a permutation of 1..{len(permutation)}")
    odd = [p for p in permutation if parities[p - 1] % 2]
    inversions = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i] > odd[j])
    return MINUS_ONE if inversions % 2 else ONE


def _odd_inversions(seq: Sequence[int], parities: Sequence[int]) -> int:
    count = 0
    for i in range(len(seq)):
        a = seq[i]
        if not parities[a]:
            continue
        for j in range(i + 1, len(seq)):
            b = seq[j]
            if b < a and parities[b]:
                count += 1
    return count


# ---------------------------------------------------------------------------
# Free noncommutative polynomials
# ---------------------------------------------------------------------------


class NCPoly:
    """Finite sum of (Scalar, Word) pairs over an :class:`Alphabet`."""

    __slots__ = ("alphabet", "_terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[Word, Fraction] | None = None) -> None:
        self.alphabet = alphabet
        self._terms: dict[Word, Fraction] = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def _from_clean(cls, alphabet: Alphabet, terms: dict[Word, Fraction]) -> "NCPoly":
        out = cls.__new__(cls)
        out.alphabet = alphabet
        out._terms = terms
        return out

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "NCPoly":
        return cls._from_clean(alphabet, {})

    @classmethod
    def one(cls, alphabet: Alphabet) -> "NCPoly":
        return cls._from_clean(alphabet, {(): ONE})

    @classmethod
    def word(cls, alphabet: Alphabet, word: Word, coeff: int | Fraction = 1) -> "NCPoly":
        return cls(alphabet, {tuple(word): as_scalar(coeff)})

    @classmethod
    def generator(cls, alphabet: Alphabet, name: str) -> "NCPoly":
        return cls._from_clean(alphabet, {(alphabet.index(name),): ONE})

    def _check(self, other: "NCPoly") -> None:
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(f"{self.alphabet!r} and {other.alphabet!r} differ")

    def items(self) -> list[tuple[Word, Fraction]]:
        """Terms in canonical order: (weight, hdeg, word)."""
        a = self.alphabet
        return sorted(self._terms.items(), key=lambda t: (a.word_weight(t[0]), a.word_hdeg(t[0]), t[0]))

    def coefficient(self, word: Word) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def words(self) -> list[Word]:
        return [w for w, _ in self.items()]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NCPoly):
            return self.alphabet == other.alphabet and self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.alphabet, frozenset(self._terms.items())))

    def __add__(self, other: "NCPoly") -> "NCPoly":
        self._check(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NCPoly._from_clean(self.alphabet, out)

    def __neg__(self) -> "NCPoly":
        return NCPoly._from_clean(self.alphabet, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, factor: int | Fraction) -> "NCPoly":
        factor = as_scalar(factor)
        if not factor:
            return NCPoly.zero(self.alphabet)
        return NCPoly._from_clean(self.alphabet, {w: c * factor for w, c in self._terms.items()})

    def __mul__(self, other: "NCPoly | int | Fraction") -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul_nc(self, other)

    def __rmul__(self, other: int | Fraction) -> "NCPoly":
        return self.scale(other)

    def is_homogeneous(self) -> bool:
        a = self.alphabet
        return len({(a.word_hdeg(w), a.word_weight(w)) for w in self._terms}) <= 1

    @property
    def hdeg(self) -> int | None:
        """Homological degree of a homogeneous nonzero polynomial (None otherwise)."""
        degs = {self.alphabet.word_hdeg(w) for w in self._terms}
        return degs.pop() if len(degs) == 1 else None

    @property
    def weight(self) -> int | None:
        weights = {self.alphabet.word_weight(w) for w in self._terms}
        return weights.pop() if len(weights) == 1 else None

    def apply_derivation(self, image: Callable[[int], "NCPoly"], *, parity: int) -> "NCPoly":
        """Extend generator images by the graded Leibniz rule.

        A derivation of the given parity satisfies
        D(ab) = D(a) b + (-1)^{parity * |a|} a D(b).
        """
        a = self.alphabet
        out: dict[Word, Fraction] = {}
        cache: dict[int, NCPoly] = {}
        for word, coeff in self._terms.items():
            prefix_parity = 0
            for pos, gen in enumerate(word):
                img = cache.get(gen)
                if img is None:
                    img = cache[gen] = image(gen)
                if img._terms:
                    sign = -1 if (parity and prefix_parity) else 1
                    head, tail = word[:pos], word[pos + 1 :]
                    for w2, c2 in img._terms.items():
                        key = head + w2 + tail
                        v = out.get(key, 0) + sign * coeff * c2
                        if v:
                            out[key] = v
                        else:
                            out.pop(key, None)
                prefix_parity ^= a.parity(gen)
        return NCPoly._from_clean(a, out)

    def render(self) -> str:
        return render_terms(((self.alphabet.render_word(w), c) for w, c in self.items()))

    def __repr__(self) -> str:
        return f"NCPoly({self.render()})"


def mul_nc(p: NCPoly, q: NCPoly) -> NCPoly:
    """Concatenation product of free-algebra elements."""
    p._check(q)
    out: dict[Word, Fraction] = {}
    for w1, c1 in p._terms.items():
        for w2, c2 in q._terms.items():
            key = w1 + w2
            v = out.get(key, 0) + c1 * c2
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return NCPoly._from_clean(p.alphabet, out)


def render_terms(terms: Iterable[tuple[str, Fraction]]) -> str:
    """Render ``(monomial, coefficient)`` pairs as ``a - 2*b + 1/2*c``."""
    pieces: list[str] = []
    for body, coeff in terms:
        mag = abs(coeff)
        if body == "1":
            text = render_scalar(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{render_scalar(mag)}*{body}"
        if not pieces:
            pieces.append(text if coeff > 0 else f"-{text}")
        else:
            pieces.append(f" + {text}" if coeff > 0 else f" - {text}")
    return "".join(pieces) if pieces else "0"


# ---------------------------------------------------------------------------
# Free graded-commutative polynomials
# ---------------------------------------------------------------------------


class CommVariable(BaseModel):
    """A variable of a free graded-commutative algebra; ``key`` fixes its order."""

    model_config = ConfigDict(frozen=True)

    key: tuple
    name: str
    hdeg: int
    weight: int = Field(ge=1)

    @property
    def parity(self) -> int:
        return self.hdeg % 2


class VariableSet:
    """An ordered set of commutative variables (sorted by ``key``)."""

    __slots__ = ("variables", "parities", "hdegs", "weights", "_by_key", "_by_name")

    def __init__(self, variables: Iterable[CommVariable]) -> None:
        vs = sorted(variables, key=lambda v: v.key)
        self.variables: tuple[CommVariable, ...] = tuple(vs)
        self.parities = tuple(v.parity for v in vs)
        self.hdegs = tuple(v.hdeg for v in vs)
        self.weights = tuple(v.weight for v in vs)
        self._by_key = {v.key: i for i, v in enumerate(vs)}
        self._by_name = {v.name: i for i, v in enumerate(vs)}
        if len(self._by_key) != len(vs):
            raise AlphabetMismatchError("duplicate variable keys")

    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self) -> Iterator[CommVariable]:
        return iter(self.variables)

    def __getitem__(self, pos: int) -> CommVariable:
        return self.variables[pos]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VariableSet) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def __repr__(self) -> str:
        shown = ", ".join(v.name for v in self.variables[:8])
        more = ", ..." if len(self.variables) > 8 else ""
        return f"VariableSet({shown}{more})"

    def index(self, key: tuple) -> int:
        return self._by_key[key]

    def index_by_name(self, name: str) -> int:
        return self._by_name[name]

    def monomial_hdeg(self, mono: Monomial) -> int:
        return sum(self.hdegs[v] for v in mono)

    def monomial_weight(self, mono: Monomial) -> int:
        return sum(self.weights[v] for v in mono)

    def render_monomial(self, mono: Monomial) -> str:
        if not mono:
            return "1"
        return "*".join(self.variables[v].name for v in mono)


def normalize_comm(variables: VariableSet, factors: Sequence[int]) -> tuple[Monomial, Fraction] | None:
    """Sort an ordered product of variables into canonical form.

    Returns the sorted monomial and the Koszul sign of the sort, or None when
    an odd variable repeats (the product vanishes).
    """
    parities = variables.parities
    mono = tuple(sorted(factors))
    for i in range(1, len(mono)):
        if mono[i] == mono[i - 1] and parities[mono[i]]:
            return None
    sign = MINUS_ONE if _odd_inversions(factors, parities) % 2 else ONE
    return mono, sign


class CommPoly:
    """Finite sum of (Scalar, CommMonomial) pairs over a :class:`VariableSet`."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: VariableSet, terms: Mapping[Monomial, Fraction] | None = None) -> None:
        self.variables = variables
        out: dict[Monomial, Fraction] = {}
        for factors, coeff in (terms or {}).items():
            if not coeff:
                continue
            normal = normalize_comm(variables, factors)
            if normal is None:
                continue
            mono, sign = normal
            v = out.get(mono, 0) + sign * coeff
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        self._terms = out

    @classmethod
    def _from_clean(cls, variables: VariableSet, terms: dict[Monomial, Fraction]) -> "CommPoly":
        out = cls.__new__(cls)
        out.variables = variables
        out._terms = terms
        return out

    @classmethod
    def zero(cls, variables: VariableSet) -> "CommPoly":
        return cls._from_clean(variables, {})

    @classmethod
    def one(cls, variables: VariableSet) -> "CommPoly":
        return cls._from_clean(variables, {(): ONE})

    @classmethod
    def variable(cls, variables: VariableSet, pos: int, coeff: int | Fraction = 1) -> "CommPoly":
        return cls._from_clean(variables, {(pos,): as_scalar(coeff)})

    def _check(self, other: "CommPoly") -> None:
        if self.variables is not other.variables and self.variables != other.variables:
            raise AlphabetMismatchError(f"{self.variables!r} and {other.variables!r} differ")

    def items(self) -> list[tuple[Monomial, Fraction]]:
        vs = self.variables
        return sorted(self._terms.items(), key=lambda t: (vs.monomial_weight(t[0]), vs.monomial_hdeg(t[0]), t[0]))

    def monomials(self) -> list[Monomial]:
        return list(self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CommPoly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self._terms.items())))

    def __add__(self, other: "CommPoly") -> "CommPoly":
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return CommPoly._from_clean(self.variables, out)

    def __neg__(self) -> "CommPoly":
        return CommPoly._from_clean(self.variables, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "CommPoly") -> "CommPoly":
        return self + (-other)

    def scale(self, factor: int | Fraction) -> "CommPoly":
        factor = as_scalar(factor)
        if not factor:
            return CommPoly.zero(self.variables)
        return CommPoly._from_clean(self.variables, {m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other: "CommPoly | int | Fraction") -> "CommPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul_comm(self, other)

    def __rmul__(self, other: int | Fraction) -> "CommPoly":
        return self.scale(other)

    def is_homogeneous(self) -> bool:
        vs = self.variables
        return len({(vs.monomial_hdeg(m), vs.monomial_weight(m)) for m in self._terms}) <= 1

    @property
    def hdeg(self) -> int | None:
        degs = {self.variables.monomial_hdeg(m) for m in self._terms}
        return degs.pop() if len(degs) == 1 else None

    @property
    def weight(self) -> int | None:
        weights = {self.variables.monomial_weight(m) for m in self._terms}
        return weights.pop() if len(weights) == 1 else None

    def apply_derivation(self, image: Callable[[int], "CommPoly"], *, parity: int) -> "CommPoly":
        """Extend variable images by the graded Leibniz rule (see NCPoly.apply_derivation)."""
        vs = self.variables
        parities = vs.parities
        out: dict[Monomial, Fraction] = {}
        cache: dict[int, CommPoly] = {}
        for mono, coeff in self._terms.items():
            prefix_parity = 0
            for pos, var in enumerate(mono):
                img = cache.get(var)
                if img is None:
                    img = cache[var] = image(var)
                if img._terms:
                    sign = -1 if (parity and prefix_parity) else 1
                    head, tail = mono[:pos], mono[pos + 1 :]
                    for m2, c2 in img._terms.items():
                        normal = normalize_comm(vs, head + m2 + tail)
                        if normal is None:
                            continue
                        key, s = normal
                        v = out.get(key, 0) + sign * s * coeff * c2
                        if v:
                            out[key] = v
                        else:
                            out.pop(key, None)
                prefix_parity ^= parities[var]
        return CommPoly._from_clean(vs, out)

    def substitute(self, mapping: Callable[[int], int | None], target: VariableSet) -> "CommPoly":
        """Rename variables into ``target`` (None sends a variable to zero), re-normalizing signs."""
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            seq = []
            for var in mono:
                new = mapping(var)
                if new is None:
                    break
                seq.append(new)
            else:
                normal = normalize_comm(target, seq)
                if normal is None:
                    continue
                key, s = normal
                v = out.get(key, 0) + s * coeff
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return CommPoly._from_clean(target, out)

    def render(self) -> str:
        return render_terms(((self.variables.render_monomial(m), c) for m, c in self.items()))

    def __repr__(self) -> str:
        return f"CommPoly({self.render()})"


def mul_comm(p: CommPoly, q: CommPoly) -> CommPoly:
    """Graded-commutative product; every term is re-normalized with its Koszul sign."""
    p._check(q)
    vs = p.variables
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in p._terms.items():
        for m2, c2 in q._terms.items():
            normal = normalize_comm(vs, m1 + m2)
            if normal is None:
                continue
            key, s = normal
            v = out.get(key, 0) + s * c1 * c2
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return CommPoly._from_clean(vs, out)


def comm_product(variables: VariableSet, factors: Sequence[CommPoly]) -> CommPoly:
    """Ordered product of several commutative polynomials."""
    out = CommPoly.one(variables)
    for f in factors:
        out = mul_comm(out, f)
    return out
