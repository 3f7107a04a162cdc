"""Elementary Z2-gradings of UT_n over GF(q), evaluation and identity checks.

Bulk evaluation works on stacks of matrices: an array of shape (B, n, n)
holding field codes, zero below the diagonal.  A polynomial is evaluated on
a whole stack at once by walking its words and caching prefix products.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .ff import FieldElement, FieldSpec, field_enumerate
from .freealg import GradedPolynomial, Variable, Word, y, z
from .freealg.families import UnknownPreset

PRESET_DEGREES = {
    "ut2-canonical": (0, 1),
    "ut3-A": (0, 1, 1),
    "ut3-B": (0, 1, 0),
}

DEFAULT_EXHAUSTIVE_CAP = 10**8
DEFAULT_BATCH = 1 << 14


class CapExceeded(RuntimeError):
    def __init__(self, what: str, size: int, cap: int):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what}: {size} exceeds the cap {cap}")


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class ElementaryGrading:
    degs: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.degs or any(g not in (0, 1) for g in self.degs):
            raise GradingError(f"grading tuple must be non-empty over {{0,1}}, got {self.degs}")
        if len(self.degs) > 4:
            raise GradingError("UT_n is supported for n <= 4")

    @property
    def n(self) -> int:
        return len(self.degs)

    def degree(self, i: int, j: int) -> int:
        """Degree of e_ij, 0-based indices."""
        return (self.degs[i] + self.degs[j]) % 2

    def positions(self, g: int) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i, self.n) if self.degree(i, j) == g]

    def dim(self, g: int) -> int:
        return len(self.positions(g))

    def __str__(self):
        return self.name or ",".join(map(str, self.degs))


def grading(name_or_tuple) -> ElementaryGrading:
    """Resolve ``ut2-canonical | ut3-A | ut3-B | trivial:<n>`` or a comma tuple."""
    if isinstance(name_or_tuple, ElementaryGrading):
        return name_or_tuple
    if isinstance(name_or_tuple, (tuple, list)):
        return ElementaryGrading(tuple(int(g) for g in name_or_tuple))
    text = str(name_or_tuple).strip()
    if text in PRESET_DEGREES:
        return ElementaryGrading(PRESET_DEGREES[text], text)
    if text.startswith("trivial:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise GradingError(f"bad trivial grading {text!r}") from None
        if n < 1:
            raise GradingError("trivial:<n> needs n >= 1")
        return ElementaryGrading((0,) * n, text)
    if "," in text or text in ("0", "1"):
        try:
            return ElementaryGrading(tuple(int(g) for g in text.split(",")))
        except ValueError:
            raise GradingError(f"bad grading tuple {text!r}") from None
    raise UnknownPreset(f"unknown preset {text!r}")


def upper_positions(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


# -- single matrices -----------------------------------------------------------

@dataclass(frozen=True)
class GradedMatrix:
    spec: FieldSpec
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise ValueError("matrix must be square")
            if any(row[j] for j in range(i)):
                raise ValueError("matrix must be upper triangular")

    @classmethod
    def zero(cls, spec, n):
        return cls(spec, tuple((0,) * n for _ in range(n)))

    @classmethod
    def identity(cls, spec, n):
        return cls(spec, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def elementary(cls, spec, n, i, j, coeff=1):
        """``coeff * e_ij`` with 1-based indices."""
        rows = [[0] * n for _ in range(n)]
        rows[i - 1][j - 1] = spec.element(coeff).code
        return cls(spec, tuple(map(tuple, rows)))

    @classmethod
    def from_entries(cls, spec, n, entries: Mapping[tuple[int, int], object]):
        """Build from ``{(i, j): value}`` with 1-based indices."""
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in entries.items():
            rows[i - 1][j - 1] = spec.element(v).code
        return cls(spec, tuple(map(tuple, rows)))

    @classmethod
    def from_array(cls, spec, arr):
        return cls(spec, tuple(tuple(int(x) for x in row) for row in np.asarray(arr)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)

    def entry(self, i, j) -> FieldElement:
        return FieldElement(self.spec, self.entries[i - 1][j - 1])

    def _same(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        if other.spec != self.spec or other.n != self.n:
            raise ValueError("matrix size or field mismatch")
        return other

    def __add__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return GradedMatrix.from_array(self.spec, self.spec.vadd(self.array(), other.array()))

    def __sub__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return GradedMatrix.from_array(self.spec, self.spec.vsub(self.array(), other.array()))

    def __neg__(self):
        return GradedMatrix.from_array(self.spec, self.spec.vneg(self.array()))

    def scale(self, a):
        return GradedMatrix.from_array(self.spec, self.spec.vmul(self.array(), self.spec.element(a).code))

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        if self._same(other) is NotImplemented:
            return NotImplemented
        return GradedMatrix.from_array(self.spec, self.spec.matmul(self.array(), other.array()))

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative matrix power")
        out = GradedMatrix.identity(self.spec, self.n)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def is_homogeneous(self, grading: ElementaryGrading, g: int) -> bool:
        """Zero is homogeneous of every degree."""
        if grading.n != self.n:
            raise GradingError("grading size does not match the matrix")
        return all(
            self.entries[i][j] == 0 or grading.degree(i, j) == g
            for i, j in upper_positions(self.n)
        )

    def nonzero_entries(self) -> list[tuple[int, int, int]]:
        return [(i + 1, j + 1, self.entries[i][j]) for i, j in upper_positions(self.n) if self.entries[i][j]]

    def __str__(self):
        terms = []
        for i, j, c in self.nonzero_entries():
            coef = self.spec.format_code(c)
            terms.append(f"e{i}{j}" if c == 1 else f"{coef}*e{i}{j}")
        return " + ".join(terms) if terms else "0"


# -- stacks -------------------------------------------------------------------

def batch_matmul(spec: FieldSpec, a: np.ndarray, b: np.ndarray, support=None, reduce: bool = True) -> np.ndarray:
    """Product of two stacks of upper-triangular matrices.

    ``support`` optionally gives the sets of positions where ``a`` and ``b``
    may be nonzero; other terms are skipped.  With ``reduce=False`` a prime
    field product is returned as unreduced integers.
    """
    n = a.shape[-1]
    sa, sb = support if support is not None else (None, None)
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
    prime = spec.k == 1
    mt, at = spec.mul_table, spec.add_table
    for i in range(n):
        for j in range(i, n):
            acc = None
            for k in range(i, j + 1):
                if sa is not None and ((i, k) not in sa or (k, j) not in sb):
                    continue
                if prime:
                    term = a[..., i, k] * b[..., k, j]
                    acc = term if acc is None else acc + term
                else:
                    term = mt[a[..., i, k], b[..., k, j]]
                    acc = term if acc is None else at[acc, term]
            if acc is not None:
                out[..., i, j] = acc % spec.p if (prime and reduce) else acc
    return out


_BOUND_LIMIT = 1 << 60


class WordEvaluator:
    """Evaluates words on a stack of assignments, sharing prefix products.

    Given a grading, every assigned value is taken to be homogeneous of the
    parity of its variable, so a word's value is supported on positions of
    the word's parity; the product skips the other terms.  Over prime fields
    intermediate products stay unreduced while they fit in int64.
    """

    def __init__(self, spec: FieldSpec, values: Mapping[Variable, np.ndarray], grad: ElementaryGrading | None = None):
        self.spec = spec
        self.values = values
        self.cache: dict[Word, tuple[np.ndarray, int]] = {}
        self.support = None
        if grad is not None:
            self.support = {g: frozenset(grad.positions(g)) for g in (0, 1)}

    def _entry(self, w: Word):
        got = self.cache.get(w)
        if got is not None:
            return got
        spec = self.spec
        if len(w) == 1:
            try:
                res = (self.values[w[0]], spec.p - 1)
            except KeyError:
                raise KeyError(f"variable {w[0]} is unassigned") from None
        else:
            left, lb = self._entry(w[:-1])
            right = self.values[w[-1]]
            n = right.shape[-1]
            if spec.k == 1 and lb * (spec.p - 1) * n >= _BOUND_LIMIT:
                left, lb = left % spec.p, spec.p - 1
            support = None
            if self.support is not None:
                support = (self.support[sum(v.kind for v in w[:-1]) % 2], self.support[w[-1].kind])
            prod = batch_matmul(spec, left, right, support, reduce=False)
            res = (prod, lb * (spec.p - 1) * n if spec.k == 1 else spec.q - 1)
        self.cache[w] = res
        return res

    def word(self, w: Word) -> np.ndarray:
        v, _ = self._entry(w)
        return v % self.spec.p if self.spec.k == 1 else v

    def poly(self, f: GradedPolynomial) -> np.ndarray:
        spec = self.spec
        acc = None
        if spec.k == 1:
            for w, c in f.items():
                v, b = self._entry(w)
                if b * spec.p >= _BOUND_LIMIT // max(1, len(f)):
                    v, b = v % spec.p, spec.p - 1
                term = v * c if c != 1 else v
                acc = term if acc is None else acc + term
            if acc is not None:
                acc = acc % spec.p
        else:
            for w, c in f.items():
                v, _ = self._entry(w)
                if c != 1:
                    v = spec.vmul(v, c)
                acc = v if acc is None else spec.vadd(acc, v)
        if acc is None:
            sample = next(iter(self.values.values()))
            return np.zeros_like(sample)
        return acc


def _check_parity(assignment: Mapping[Variable, GradedMatrix], grad: ElementaryGrading):
    for v, mat in assignment.items():
        g = 1 if v.is_odd else 0
        if not mat.is_homogeneous(grad, g):
            raise GradingError(f"{v} must be assigned a matrix of degree {g}, got {mat}")


def evaluate(f: GradedPolynomial, assignment: Mapping[Variable, GradedMatrix], grad) -> GradedMatrix:
    grad = grading(grad)
    _check_parity(assignment, grad)
    missing = [v for v in f.variables() if v not in assignment]
    if missing:
        raise KeyError(f"unassigned variables: {', '.join(map(str, missing))}")
    values = {v: m.array()[None] for v, m in assignment.items()}
    if not values:
        return GradedMatrix.zero(f.spec, grad.n)
    out = WordEvaluator(f.spec, values, grad).poly(f)[0]
    return GradedMatrix.from_array(f.spec, out)


# -- homogeneous components ----------------------------------------------------

def component_array(grad: ElementaryGrading, g: int, spec: FieldSpec, cap: int | None = None) -> np.ndarray:
    """All elements of the degree-g component as a (q^dim, n, n) stack."""
    pos = grad.positions(g)
    size = spec.q ** len(pos)
    if cap is not None and size > cap:
        raise CapExceeded(f"component of degree {g}", size, cap)
    codes = [e.code for e in field_enumerate(spec)]
    out = np.zeros((size, grad.n, grad.n), dtype=np.int64)
    for idx, combo in enumerate(itertools.product(codes, repeat=len(pos))):
        for (i, j), c in zip(pos, combo):
            out[idx, i, j] = c
    return out


def homogeneous_elements(grad, g: int, spec: FieldSpec, cap: int | None = 10**6) -> list[GradedMatrix]:
    grad = grading(grad)
    return [GradedMatrix.from_array(spec, a) for a in component_array(grad, g, spec, cap)]


def random_component(grad: ElementaryGrading, g: int, spec: FieldSpec, rng: np.random.Generator, size: int):
    out = np.zeros((size, grad.n, grad.n), dtype=np.int64)
    for i, j in grad.positions(g):
        out[:, i, j] = rng.integers(0, spec.q, size=size)
    return out


# -- identity checking -----------------------------------------------------------

@dataclass
class IdentityVerdict:
    identity: bool
    mode: str
    exact: bool
    evaluations: int
    counterexample: dict[Variable, GradedMatrix] | None = None
    value: GradedMatrix | None = None
    seed: int | None = None

    def describe(self) -> str:
        if self.identity:
            kind = "exact" if self.exact else f"probabilistic, seed {self.seed}"
            return f"identity ({self.mode}, {kind}, {self.evaluations} evaluations)"
        parts = ", ".join(f"{v}={m}" for v, m in sorted(self.counterexample.items()))
        return f"counterexample: {parts} gives {self.value}"


def assignment_space_size(f: GradedPolynomial, grad: ElementaryGrading) -> int:
    q = f.spec.q
    return math.prod(q ** grad.dim(1 if v.is_odd else 0) for v in f.variables())


def check_identity(
    f: GradedPolynomial,
    grad,
    mode: str = "exhaustive",
    samples: int = 10**5,
    seed: int = 0,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
    batch: int = DEFAULT_BATCH,
) -> IdentityVerdict:
    grad = grading(grad)
    spec = f.spec
    vars_ = f.variables()
    if not vars_:
        return IdentityVerdict(True, mode, mode == "exhaustive", 0, seed=seed if mode == "random" else None)

    if mode == "exhaustive":
        total = assignment_space_size(f, grad)
        if total > cap:
            raise CapExceeded("exhaustive assignment space", total, cap)
        comps = {0: None, 1: None}
        arrays = []
        for v in vars_:
            g = 1 if v.is_odd else 0
            if comps[g] is None:
                comps[g] = component_array(grad, g, spec)
            arrays.append(comps[g])
        sizes = [a.shape[0] for a in arrays]
        for start in range(0, total, batch):
            idx = np.arange(start, min(total, start + batch), dtype=np.int64)
            parts = np.unravel_index(idx, sizes)
            values = {v: arr[p] for v, arr, p in zip(vars_, arrays, parts)}
            hit = _first_nonzero(f, values, grad)
            if hit is not None:
                return _counterexample(f, values, hit, "exhaustive", start + hit + 1, None)
        return IdentityVerdict(True, "exhaustive", True, total)

    if mode == "random":
        rng = np.random.default_rng(seed)
        done = 0
        while done < samples:
            size = min(batch, samples - done)
            values = {v: random_component(grad, 1 if v.is_odd else 0, spec, rng, size) for v in vars_}
            hit = _first_nonzero(f, values, grad)
            if hit is not None:
                return _counterexample(f, values, hit, "random", done + hit + 1, seed)
            done += size
        return IdentityVerdict(True, "random", False, samples, seed=seed)

    raise ValueError(f"unknown mode {mode!r}")


def _first_nonzero(f, values, grad) -> int | None:
    res = WordEvaluator(f.spec, values, grad).poly(f)
    bad = np.nonzero(res.reshape(res.shape[0], -1).any(axis=1))[0]
    return int(bad[0]) if bad.size else None


def _counterexample(f, values, hit, mode, evaluations, seed):
    spec = f.spec
    assignment = {v: GradedMatrix.from_array(spec, arr[hit]) for v, arr in values.items()}
    value = GradedMatrix.from_array(spec, WordEvaluator(spec, {v: a[hit:hit + 1] for v, a in values.items()}).poly(f)[0])
    return IdentityVerdict(False, mode, True, evaluations, assignment, value, seed)


# -- generator sets -----------------------------------------------------------

def omega(spec: FieldSpec, i: int) -> list[tuple[str, GradedPolynomial]]:
    """The pair {[y_(2i-1), y_2i], y_2i^q - y_2i}."""
    q = spec.q
    a = GradedPolynomial.var(spec, y(2 * i - 1))
    b = GradedPolynomial.var(spec, y(2 * i))
    return [
        (f"[y{2 * i - 1}, y{2 * i}]", a * b - b * a),
        (f"(y{2 * i}^{q} - y{2 * i})", b**q - b),
    ]


def generator_sets(preset: str, spec: FieldSpec) -> list[tuple[str, GradedPolynomial]]:
    """Fully expanded generator list of the identity ideal for a preset."""
    q = spec.q
    zz = [GradedPolynomial.var(spec, z(i)) for i in (1, 2, 3)]
    if preset == "ut2-canonical":
        y1 = GradedPolynomial.var(spec, y(1))
        y2 = GradedPolynomial.var(spec, y(2))
        return [
            ("z1*z2", zz[0] * zz[1]),
            ("[y1, y2]", y1 * y2 - y2 * y1),
            (f"y1^{q} - y1", y1**q - y1),
        ]
    w1, w2 = omega(spec, 1), omega(spec, 2)
    prods = [(f"{l1}*{l2}", p1 * p2) for l1, p1 in w1 for l2, p2 in w2]
    if preset == "ut3-A":
        return [("z1*z2", zz[0] * zz[1])] + [(f"{lab}*z1", w * zz[0]) for lab, w in w1] + prods
    if preset == "ut3-B":
        return (
            [("z1*z2*z3", zz[0] * zz[1] * zz[2])]
            + [(f"z1*{lab}", zz[0] * w) for lab, w in w1]
            + [(f"{lab}*z1", w * zz[0]) for lab, w in w1]
            + prods
        )
    raise UnknownPreset(f"no generator set for preset {preset!r}")


# -- witness families ---------------------------------------------------------

_WITNESS_PARAMS = {
    "ut2-canonical": ("a", "b"),
    "ut3-A": ("a", "b", "c", "d"),
    "ut3-B": ("a", "b", "c"),
}


@dataclass(frozen=True)
class WitnessFamily:
    preset: str

    def __post_init__(self):
        if self.preset not in _WITNESS_PARAMS:
            raise UnknownPreset(f"no witness family for preset {self.preset!r}")

    @property
    def param_names(self) -> tuple[str, ...]:
        return _WITNESS_PARAMS[self.preset]

    @property
    def grading(self) -> ElementaryGrading:
        return grading(self.preset)

    def y_matrix(self, spec: FieldSpec, params: Sequence) -> GradedMatrix:
        e = [spec.element(x) for x in params]
        if self.preset == "ut2-canonical":
            a, b = e
            return GradedMatrix.from_entries(spec, 2, {(1, 1): a, (2, 2): a + b})
        if self.preset == "ut3-A":
            a, b, c, d = e
            return GradedMatrix.from_entries(spec, 3, {(1, 1): a, (2, 2): a + b, (3, 3): a + b + c, (2, 3): d})
        a, b, c = e
        return GradedMatrix.from_entries(spec, 3, {(1, 1): a, (2, 2): a + b, (3, 3): a + b + c})

    def z_choices(self, spec: FieldSpec) -> list[GradedMatrix]:
        if self.preset == "ut2-canonical":
            return [GradedMatrix.elementary(spec, 2, 1, 2)]
        e12 = GradedMatrix.elementary(spec, 3, 1, 2)
        if self.preset == "ut3-A":
            return [e12]
        e23 = GradedMatrix.elementary(spec, 3, 2, 3)
        return [e12, e23, e12 + e23]

    def y_array(self, spec: FieldSpec, params: np.ndarray) -> np.ndarray:
        """Vectorised y_matrix: params has shape (B, len(param_names))."""
        params = np.asarray(params, dtype=np.int64)
        add = spec.vadd
        n = self.grading.n
        out = np.zeros((params.shape[0], n, n), dtype=np.int64)
        a = params[:, 0]
        ab = add(a, params[:, 1])
        out[:, 0, 0] = a
        out[:, 1, 1] = ab
        if n == 3:
            out[:, 2, 2] = add(ab, params[:, 2])
        if self.preset == "ut3-A":
            out[:, 1, 2] = params[:, 3]
        return out


def witness_assignments(
    preset: str,
    spec: FieldSpec,
    yvars: int,
    params="all",
    zvars: int = 1,
    z_choice: Sequence[int] | None = None,
    seed: int = 0,
    count: int = 100,
) -> Iterator[dict[Variable, GradedMatrix]]:
    """Graded assignments built from the witness matrices of the basis proofs.

    ``params`` is a flat tuple of length ``yvars * k`` (k parameters per y),
    ``"all"`` for every tuple over GF(q), or ``"random"`` for ``count``
    seeded draws.  ``z_choice`` picks, per z variable, an index into
    :meth:`WitnessFamily.z_choices`; by default every z gets the first.
    """
    fam = WitnessFamily(preset)
    k = len(fam.param_names)
    choices = fam.z_choices(spec)
    zsel = tuple(z_choice) if z_choice is not None else (0,) * zvars
    if len(zsel) != zvars:
        raise ValueError("z_choice length must equal zvars")

    def build(flat):
        if len(flat) != yvars * k:
            raise ValueError(f"expected {yvars * k} parameters, got {len(flat)}")
        out = {y(i + 1): fam.y_matrix(spec, flat[i * k:(i + 1) * k]) for i in range(yvars)}
        out.update({z(j + 1): choices[c] for j, c in enumerate(zsel)})
        return out

    if isinstance(params, str) and params == "all":
        codes = [e.code for e in field_enumerate(spec)]
        for flat in itertools.product(codes, repeat=yvars * k):
            yield build([FieldElement(spec, c) for c in flat])
    elif isinstance(params, str) and params == "random":
        rng = np.random.default_rng(seed)
        for _ in range(count):
            flat = rng.integers(0, spec.q, size=yvars * k)
            yield build([FieldElement(spec, int(c)) for c in flat])
    else:
        yield build(list(params))
