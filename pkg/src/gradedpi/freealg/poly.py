"""Polynomials in the free non-unitary superalgebra F<Y u Z>.

A monomial is a non-empty tuple of :class:`Variable`; there is no empty
word, so there is no unit.  Coefficients are stored as field codes.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from functools import cached_property
from typing import NamedTuple

from ..ff import FieldElement, FieldError, FieldSpec

Y, Z = 0, 1


class Variable(NamedTuple):
    """``kind`` is 0 for y and 1 for z, so tuple order puts every y before every z."""

    kind: int
    index: int

    def __str__(self):
        return ("y" if self.kind == Y else "z") + str(self.index)

    @property
    def is_odd(self) -> bool:
        return self.kind == Z


def y(i: int) -> Variable:
    if i < 1:
        raise ValueError("variable index must be >= 1")
    return Variable(Y, i)


def z(i: int) -> Variable:
    if i < 1:
        raise ValueError("variable index must be >= 1")
    return Variable(Z, i)


Word = tuple[Variable, ...]


def word_key(word: Word):
    """Graded-lexicographic key."""
    return (len(word), word)


def parity(word: Word) -> int:
    return sum(v.kind for v in word) % 2


def format_word(word: Word) -> str:
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        parts.append(str(word[i]) + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "*".join(parts)


class _Arith:
    """Python-list copies of the field tables; faster than numpy for scalars."""

    _cache: dict = {}

    def __new__(cls, spec: FieldSpec):
        try:
            return cls._cache[spec]
        except KeyError:
            obj = super().__new__(cls)
            obj.add = spec.add_table.tolist()
            obj.mul = spec.mul_table.tolist()
            obj.neg = spec.neg_table.tolist()
            cls._cache[spec] = obj
            return obj


class GradedPolynomial:
    def __init__(self, spec: FieldSpec, terms: Mapping[Word, int] | None = None):
        self.spec = spec
        self._terms = {w: c for w, c in (terms or {}).items() if c}
        for w in self._terms:
            if not w:
                raise ValueError("the free algebra is non-unitary: empty word")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, spec):
        return cls(spec)

    @classmethod
    def var(cls, spec, v: Variable):
        return cls(spec, {(v,): 1})

    @classmethod
    def monomial(cls, spec, word: Sequence[Variable], coeff=1):
        c = spec.element(coeff).code
        return cls(spec, {tuple(word): c})

    # -- views ------------------------------------------------------------------

    @property
    def terms(self) -> dict[Word, FieldElement]:
        return {w: FieldElement(self.spec, self._terms[w]) for w in self.words()}

    def items(self):
        """(word, code) pairs in canonical order."""
        return [(w, self._terms[w]) for w in self.words()]

    def words(self) -> list[Word]:
        return sorted(self._terms, key=word_key)

    def coeff(self, word) -> FieldElement:
        return FieldElement(self.spec, self._terms.get(tuple(word), 0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @cached_property
    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        return max((len(w) for w in self._terms), default=0)

    @cached_property
    def min_degree(self) -> int:
        return min((len(w) for w in self._terms), default=0)

    def variables(self) -> list[Variable]:
        return sorted({v for w in self._terms for v in w})

    def is_homogeneous_parity(self, g: int) -> bool:
        return all(parity(w) == g for w in self._terms)

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        if other.spec != self.spec:
            raise FieldError("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        add = _Arith(self.spec).add
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = add[out.get(w, 0)][c]
        return GradedPolynomial(self.spec, out)

    def __neg__(self):
        neg = _Arith(self.spec).neg
        return GradedPolynomial(self.spec, {w: neg[c] for w, c in self._terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def scale(self, a) -> GradedPolynomial:
        a = self.spec.element(a).code
        mul = _Arith(self.spec).mul
        return GradedPolynomial(self.spec, {w: mul[a][c] for w, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        ar = _Arith(self.spec)
        add, mul = ar.add, ar.mul
        out: dict[Word, int] = {}
        for w1, c1 in self._terms.items():
            row = mul[c1]
            for w2, c2 in other._terms.items():
                w = w1 + w2
                out[w] = add[out.get(w, 0)][row[c2]]
        return GradedPolynomial(self.spec, out)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 1:
            raise ValueError("non-unitary algebra: exponent must be >= 1")
        out = self
        for _ in range(e - 1):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.spec == other.spec and self._terms == other._terms

    def __hash__(self):
        return hash((self.spec, frozenset(self._terms.items())))

    # -- printing ---------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            mono = format_word(w)
            parts.append(mono if c == 1 else f"{self.spec.format_code(c)}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"GradedPolynomial({self.spec}, {self})"


def grading_split(f: GradedPolynomial) -> tuple[GradedPolynomial, GradedPolynomial]:
    even = {w: c for w, c in f._terms.items() if parity(w) == 0}
    odd = {w: c for w, c in f._terms.items() if parity(w) == 1}
    return GradedPolynomial(f.spec, even), GradedPolynomial(f.spec, odd)


def commutator(u: GradedPolynomial, v: GradedPolynomial) -> GradedPolynomial:
    return u * v - v * u


def left_normed(args: Sequence[GradedPolynomial]) -> GradedPolynomial:
    if len(args) < 2:
        raise ValueError("a commutator needs at least two arguments")
    out = args[0]
    for a in args[1:]:
        out = commutator(out, a)
    return out


def powered_commutator(u: GradedPolynomial, steps: Iterable[tuple[GradedPolynomial, int]]) -> GradedPolynomial:
    """[u, v1^(r1), v2^(r2), ...]; r = 0 leaves the bracket unchanged."""
    out = u
    for v, r in steps:
        if r < 0:
            raise ValueError("commutator power must be >= 0")
        for _ in range(r):
            out = commutator(out, v)
    return out


class ParityError(ValueError):
    pass


def substitute(f: GradedPolynomial, assignment: Mapping[Variable, GradedPolynomial]) -> GradedPolynomial:
    """Apply the graded endomorphism fixing every unassigned variable."""
    for v, img in assignment.items():
        if img.spec != f.spec:
            raise FieldError("substitution over a different field")
        if not img.is_homogeneous_parity(1 if v.is_odd else 0):
            raise ParityError(f"{v} must map to an {'odd' if v.is_odd else 'even'} polynomial")
    cache: dict[Word, GradedPolynomial] = {}

    def image(word: Word) -> GradedPolynomial:
        if word in cache:
            return cache[word]
        if len(word) == 1:
            v = word[0]
            res = assignment[v] if v in assignment else GradedPolynomial.var(f.spec, v)
        else:
            res = image(word[:-1]) * image(word[-1:])
        cache[word] = res
        return res

    ar = _Arith(f.spec)
    out: dict[Word, int] = {}
    for w, c in f._terms.items():
        row = ar.mul[c]
        for w2, c2 in image(w)._terms.items():
            out[w2] = ar.add[out.get(w2, 0)][row[c2]]
    return GradedPolynomial(f.spec, out)


def random_polynomial(
    spec: FieldSpec,
    rng,
    letters: Sequence[Variable],
    max_deg: int,
    terms: int = 4,
    min_deg: int = 1,
) -> GradedPolynomial:
    """Seeded random polynomial with up to ``terms`` words of length min_deg..max_deg."""
    letters = list(letters)
    out: dict[Word, int] = {}
    add = _Arith(spec).add
    for _ in range(terms):
        length = int(rng.integers(min_deg, max_deg + 1))
        word = tuple(letters[int(i)] for i in rng.integers(0, len(letters), size=length))
        c = int(rng.integers(1, spec.q))
        out[word] = add[out.get(word, 0)][c]
    return GradedPolynomial(spec, out)
