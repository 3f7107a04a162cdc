"""Ordered q-commutators and the canonical spanning families.

Exponent vectors are indexed by the variables y1..ym; a zero entry means
the variable does not occur, so each family member is built exactly once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..ff import FieldSpec
from .poly import GradedPolynomial, commutator, y, z

PRESETS = ("ut2-canonical", "ut3-A", "ut3-B")


class UnknownPreset(ValueError):
    pass


def _yvar(spec, i):
    return GradedPolynomial.var(spec, y(i))


def _step_label(i: int, r: int) -> str:
    return f"y{i}" if r == 1 else f"y{i}^({r})"


@dataclass(frozen=True, order=True)
class OrderedQCommutator:
    """Descriptor of an ordered q-commutator.

    family 1: indices (j1, ..., jn), exponents (s1, ..., sn) and the
    polynomial [y_j1, y_j2^(s2), y_j1^(s1-1), y_j3^(s3), ..., y_jn^(sn)].

    family 2: indices (l1, ..., lk), exponents (t2, ..., tk) and the
    polynomial [y_l1^q - y_l1, y_l2^(t2), ..., y_lk^(tk)].
    """

    family: int
    indices: tuple[int, ...]
    exponents: tuple[int, ...]

    def validate(self, q: int) -> None:
        idx, ex = self.indices, self.exponents
        if len(set(idx)) != len(idx):
            raise ValueError("indices must be distinct")
        if self.family == 1:
            n = len(idx)
            if n < 2 or len(ex) != n:
                raise ValueError("type-1 needs n >= 2 indices and n exponents")
            if not idx[0] > idx[1]:
                raise ValueError("type-1 needs j1 > j2")
            if list(idx[1:]) != sorted(idx[1:]):
                raise ValueError("type-1 needs j2 < j3 < ... < jn")
            if not all(1 <= s < q for s in ex):
                raise ValueError("type-1 exponents lie in 1..q-1")
        elif self.family == 2:
            if len(idx) < 1 or len(ex) != len(idx) - 1:
                raise ValueError("type-2 needs k >= 1 indices and k-1 exponents")
            if list(idx[1:]) != sorted(idx[1:]):
                raise ValueError("type-2 needs l2 < ... < lk")
            if not all(0 <= t < q for t in ex):
                raise ValueError("type-2 exponents lie in 0..q-1")
        else:
            raise ValueError("family must be 1 or 2")

    def degree(self, q: int) -> int:
        if self.family == 1:
            return sum(self.exponents)
        return q + sum(self.exponents)

    def steps(self) -> list[tuple[int, int]]:
        """(variable index, power) steps after the head."""
        if self.family == 1:
            j, s = self.indices, self.exponents
            out = [(j[1], s[1]), (j[0], s[0] - 1)]
            out += list(zip(j[2:], s[2:]))
        else:
            out = list(zip(self.indices[1:], self.exponents))
        return [(i, r) for i, r in out if r > 0]

    def polynomial(self, spec: FieldSpec) -> GradedPolynomial:
        q = spec.q
        if self.family == 1:
            acc = _yvar(spec, self.indices[0])
        else:
            v = _yvar(spec, self.indices[0])
            acc = v**q - v
        for i, r in self.steps():
            v = _yvar(spec, i)
            for _ in range(r):
                acc = commutator(acc, v)
        return acc

    def label(self, q: int) -> str:
        if self.family == 1:
            head = f"y{self.indices[0]}"
        else:
            l1 = self.indices[0]
            head = f"y{l1}^{q} - y{l1}"
        steps = self.steps()
        if not steps:
            return f"({head})"
        return "[" + ", ".join([head] + [_step_label(i, r) for i, r in steps]) + "]"


def ordered_q_commutator_descriptors(q: int, m: int, max_deg: int) -> list[OrderedQCommutator]:
    out = []
    vars_ = range(1, m + 1)
    for n in range(2, m + 1):
        for subset in itertools.combinations(vars_, n):
            j2 = subset[0]
            for j1 in subset[1:]:
                rest = tuple(i for i in subset[1:] if i != j1)
                idx = (j1, j2) + rest
                for ex in itertools.product(range(1, q), repeat=n):
                    if sum(ex) <= max_deg:
                        out.append(OrderedQCommutator(1, idx, ex))
    for l1 in vars_:
        others = [i for i in vars_ if i != l1]
        for k in range(0, len(others) + 1):
            for subset in itertools.combinations(others, k):
                for ex in itertools.product(range(1, q), repeat=k):
                    if q + sum(ex) <= max_deg:
                        out.append(OrderedQCommutator(2, (l1,) + subset, ex))
    out.sort(key=lambda c: (c.degree(q), c.family, c.indices, c.exponents))
    return out


def enumerate_ordered_q_commutators(spec: FieldSpec, yvars: int, max_deg: int):
    """All ordered q-commutators in y1..ym of degree <= max_deg, expanded."""
    if yvars < 1 or max_deg < 1:
        raise ValueError("yvars and max_deg must be >= 1")
    return [(c, c.polynomial(spec)) for c in ordered_q_commutator_descriptors(spec.q, yvars, max_deg)]


# -- spanning families --------------------------------------------------------

@dataclass(frozen=True)
class FamilyMember:
    label: str
    poly: GradedPolynomial = field(compare=False)
    degree: int
    key: tuple = field(repr=False)


@dataclass
class SpanningFamily:
    preset: str
    spec: FieldSpec
    yvars: int
    zvars: int
    max_deg: int
    members: list[FamilyMember]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def degree_counts(self) -> dict[int, int]:
        counts = {d: 0 for d in range(1, self.max_deg + 1)}
        for mbr in self.members:
            counts[mbr.degree] += 1
        return counts


class _Builder:
    def __init__(self, spec: FieldSpec, m: int, n: int, d: int):
        self.spec, self.m, self.n, self.d = spec, m, n, d
        self.q = spec.q
        self._brackets: dict = {}
        self.qcomms = ordered_q_commutator_descriptors(self.q, m, d) if m else []
        self._qpolys = {c: c.polynomial(spec) for c in self.qcomms}

    def exps(self):
        return itertools.product(range(self.q), repeat=self.m)

    def prefix(self, r):
        word = tuple(v for i, ri in enumerate(r, 1) for v in [y(i)] * ri)
        if not word:
            return None, None
        label = "*".join(f"y{i}" + (f"^{ri}" if ri > 1 else "") for i, ri in enumerate(r, 1) if ri)
        return GradedPolynomial.monomial(self.spec, word), label

    def bracket(self, j, s):
        key = (j, s)
        if key not in self._brackets:
            acc = GradedPolynomial.var(self.spec, z(j))
            steps = []
            for i, si in enumerate(s, 1):
                v = _yvar(self.spec, i)
                for _ in range(si):
                    acc = commutator(acc, v)
                if si:
                    steps.append(_step_label(i, si))
            label = f"z{j}" if not steps else "[" + ", ".join([f"z{j}"] + steps) + "]"
            self._brackets[key] = (acc, label)
        return self._brackets[key]

    def qcomm(self, c):
        return self._qpolys[c], c.label(self.q)

    @staticmethod
    def product(factors):
        polys = [f for f, _ in factors if f is not None]
        labels = [lab for f, lab in factors if f is not None]
        out = polys[0]
        for f in polys[1:]:
            out = out * f
        return out, "*".join(labels)


def enumerate_spanning_family(preset: str, spec: FieldSpec, yvars: int, zvars: int, max_deg: int) -> SpanningFamily:
    if preset not in PRESETS:
        raise UnknownPreset(f"unknown preset {preset!r}; expected one of {', '.join(PRESETS)}")
    if yvars < 0 or zvars < 0 or max_deg < 1 or yvars + zvars < 1:
        raise ValueError("window bounds must be positive")
    b = _Builder(spec, yvars, zvars, max_deg)
    q, d = spec.q, max_deg
    found: list[tuple[tuple, int, list]] = []

    def emit(key, degree, factors):
        if degree <= d:
            found.append((key, degree, factors))

    zs = range(1, zvars + 1)
    for r in b.exps():
        sr = sum(r)
        pre = b.prefix(r)
        if preset == "ut2-canonical":
            if sr >= 1:
                emit((0, r), sr, [pre])
            for j in zs:
                for s in b.exps():
                    emit((1, r, j, s), sr + 1 + sum(s), [pre, b.bracket(j, s)])
            continue
        # y-only part, shared by ut3-A (theta1 = 0) and ut3-B (type a)
        if sr >= 1:
            emit((0, r), sr, [pre])
        for c in b.qcomms:
            emit((0, r, c), sr + c.degree(q), [pre, b.qcomm(c)])
        for j in zs:
            for s in b.exps():
                deg1 = sr + 1 + sum(s)
                if deg1 > d:
                    continue
                head = [pre, b.bracket(j, s)]
                emit((1, r, j, s), deg1, head)
                if preset == "ut3-A":
                    for c in b.qcomms:
                        emit((1, r, j, s, c), deg1 + c.degree(q), head + [b.qcomm(c)])
                else:
                    for k in zs:
                        for t in b.exps():
                            emit((2, r, j, s, k, t), deg1 + 1 + sum(t), head + [b.bracket(k, t)])

    found.sort(key=lambda item: (item[1], _sortable(item[0])))
    members = []
    for key, degree, factors in found:
        poly, label = b.product(factors)
        members.append(FamilyMember(label, poly, degree, key))
    return SpanningFamily(preset, spec, yvars, zvars, max_deg, members)


def _sortable(key):
    out = []
    for part in key:
        if isinstance(part, OrderedQCommutator):
            out.append((part.family, part.indices, part.exponents))
        else:
            out.append(part)
    return tuple(out)
