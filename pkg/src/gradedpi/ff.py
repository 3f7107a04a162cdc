"""Exact arithmetic in GF(q), q = p^k.

Elements are encoded as integers ``code = c0 + c1*p + ... + c(k-1)*p^(k-1)``
where ``(c0, ..., c(k-1))`` are coordinates in the power basis of the
modulus.  Scalar work goes through :class:`FieldElement`; bulk work (matrix
evaluation, row reduction) goes through the vectorised helpers on
:class:`FieldSpec`, which operate on numpy arrays of codes.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DEFAULT_MAX_Q = 9


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Factor ``q = p^k``; raise FieldError if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, k


# -- polynomials over GF(p), coefficient lists low-degree-first -------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _trim(a)
    return a


def is_irreducible(poly, p: int) -> bool:
    """Brute-force irreducibility test for a monic polynomial over GF(p).

    Tries every monic divisor of degree 1..deg/2.
    """
    poly = _trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (low-degree-first)."""
    if k == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=k):
        cand = low + (1,)
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple[int, ...] = field(compare=True)

    @property
    def q(self) -> int:
        return self.p**self.k

    def __str__(self):
        return f"GF({self.q})"

    # -- code <-> coordinates -------------------------------------------------

    def coords_of(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def code_of(self, coords) -> int:
        if len(coords) != self.k:
            raise FieldError(f"expected {self.k} coordinates, got {len(coords)}")
        code = 0
        for c in reversed(coords):
            if not 0 <= c < self.p:
                raise FieldError(f"coordinate {c} outside 0..{self.p - 1}")
            code = code * self.p + c
        return code

    def _mul_codes(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        ca, cb = self.coords_of(a), self.coords_of(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        if k > 1:
            prod = _poly_mod(prod, self.modulus, p)
        prod = list(prod) + [0] * (k - len(prod))
        return self.code_of(tuple(prod[:k]))

    # -- tables ---------------------------------------------------------------

    @cached_property
    def coord_table(self) -> np.ndarray:
        return np.array([self.coords_of(c) for c in range(self.q)], dtype=np.int64).reshape(self.q, self.k)

    @cached_property
    def add_table(self) -> np.ndarray:
        ct = self.coord_table
        s = (ct[:, None, :] + ct[None, :, :]) % self.p
        weights = self.p ** np.arange(self.k)
        return (s * weights).sum(axis=-1).astype(np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        ct = (-self.coord_table) % self.p
        return (ct * self.p ** np.arange(self.k)).sum(axis=-1).astype(np.int64)

    @cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        t = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                t[a, b] = t[b, a] = self._mul_codes(a, b)
        return t

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[0] is 0 and must not be used."""
        t = np.zeros(self.q, dtype=np.int64)
        mt = self.mul_table
        for a in range(1, self.q):
            t[a] = int(np.nonzero(mt[a] == 1)[0][0])
        return t

    @cached_property
    def _basis_products(self) -> np.ndarray:
        """Coordinates of t^e reduced by the modulus, e = 0..2k-2."""
        out = np.zeros((2 * self.k - 1, self.k), dtype=np.int64)
        for e in range(2 * self.k - 1):
            mono = [0] * e + [1]
            red = _poly_mod(mono, self.modulus, self.p) if e >= self.k else mono
            out[e, : len(red)] = red
        return out

    # -- scalar constructors ------------------------------------------------

    def __call__(self, value) -> FieldElement:
        return self.element(value)

    def element(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (tuple, list)):
            return FieldElement(self, self.code_of(tuple(int(c) for c in value)))
        # integers land in the prime subfield
        return FieldElement(self, int(value) % self.p)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> list[FieldElement]:
        return field_enumerate(self)

    def format_code(self, code: int) -> str:
        if self.k == 1:
            return str(code)
        return "{" + ",".join(str(c) for c in self.coords_of(code)) + "}"

    def parse_literal(self, text: str) -> int:
        """Parse an element literal (``3`` or ``{1,0,1}``) to its code."""
        text = text.strip()
        m = re.fullmatch(r"\{\s*(\d+(?:\s*,\s*\d+)*)\s*\}", text)
        if m:
            coords = [int(c) for c in m.group(1).split(",")]
            return self.code_of(tuple(coords))
        if text.isdigit():
            return int(text) % self.p
        raise FieldError(f"bad field literal {text!r}")

    # -- vectorised code arithmetic -------------------------------------------

    def vadd(self, a, b):
        if self.k == 1:
            return (np.asarray(a) + b) % self.p
        return self.add_table[a, b]

    def vsub(self, a, b):
        if self.k == 1:
            return (np.asarray(a) - b) % self.p
        return self.sub_table[a, b]

    def vmul(self, a, b):
        if self.k == 1:
            return (np.asarray(a) * b) % self.p
        return self.mul_table[a, b]

    def vneg(self, a):
        if self.k == 1:
            return (-np.asarray(a)) % self.p
        return self.neg_table[a]

    def vsum(self, a, axis=-1):
        """Field sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return a.sum(axis=axis) % self.p
        coords = self.coord_table[a].sum(axis=axis if axis >= 0 else axis - 1) % self.p
        return (coords * self.p ** np.arange(self.k)).sum(axis=-1)

    def matmul(self, a, b) -> np.ndarray:
        """Matrix product of code arrays (numpy matmul broadcasting rules)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a @ b) % self.p
        ca = self.coord_table[a]
        cb = self.coord_table[b]
        k, p = self.k, self.p
        acc = None
        for e in range(2 * k - 1):
            part = None
            for i in range(max(0, e - k + 1), min(e, k - 1) + 1):
                term = (ca[..., i] @ cb[..., e - i]) % p
                part = term if part is None else part + term
            contrib = (part % p)[..., None] * self._basis_products[e]
            acc = contrib if acc is None else acc + contrib
        acc %= p
        return (acc * p ** np.arange(k)).sum(axis=-1)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    code: int

    @property
    def coords(self) -> tuple[int, ...]:
        return self.spec.coords_of(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("mixed fields")
            return other.code
        return self.spec.element(other).code

    def __add__(self, other):
        return FieldElement(self.spec, int(self.spec.add_table[self.code, self._other(other)]))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.spec, int(self.spec.sub_table[self.code, self._other(other)]))

    def __rsub__(self, other):
        return FieldElement(self.spec, int(self.spec.sub_table[self._other(other), self.code]))

    def __mul__(self, other):
        return FieldElement(self.spec, int(self.spec.mul_table[self.code, self._other(other)]))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.spec, int(self.spec.neg_table[self.code]))

    def inverse(self) -> FieldElement:
        if self.code == 0:
            raise ZeroDivisionError("inverse of zero in " + str(self.spec))
        return FieldElement(self.spec, int(self.spec.inv_table[self.code]))

    def __truediv__(self, other):
        return self * FieldElement(self.spec, self._other(other)).inverse()

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result, base = self.spec.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __str__(self):
        return self.spec.format_code(self.code)

    def __repr__(self):
        return f"FieldElement({self.spec}, {self})"


def field_make(p: int, k: int = 1, max_q: int | None = DEFAULT_MAX_Q) -> FieldSpec:
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if max_q is not None and p**k > max_q:
        raise FieldError(f"q = {p**k} exceeds the field size limit {max_q}")
    return FieldSpec(p, k, smallest_irreducible(p, k))


def field_of_order(q: int, max_q: int | None = DEFAULT_MAX_Q) -> FieldSpec:
    p, k = prime_power(q)
    return field_make(p, k, max_q=max_q)


def field_enumerate(spec: FieldSpec) -> list[FieldElement]:
    # coordinate-lexicographic, c0 most significant
    out = []
    for coords in itertools.product(range(spec.p), repeat=spec.k):
        out.append(FieldElement(spec, spec.code_of(coords)))
    return out
