"""Degree-truncated T2-ideal components over GF(q).

A :class:`TruncationWindow` fixes the ambient space W(m, n, d) spanned by
all words of length 1..d over y1..ym, z1..zn.  Columns are laid out in
descending graded-lexicographic order, so the pivot of an echelon row is
its leading (largest) word and the rows whose pivot has length < d span
the part of the component living in degrees < d.

:func:`closure` computes a subspace of the ideal's intersection with W:
generator instances under graded substitutions, then products with single
letters on both sides until the rank stops growing.  Every row is a genuine
consequence of the generators; completeness is not guaranteed and is
certified separately by the dimension pinch in :mod:`gradedpi.verify`.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .ff import FieldSpec, field_enumerate
from .freealg import (
    GradedPolynomial,
    SpanningFamily,
    Variable,
    Word,
    commutator,
    format_word,
    parity,
    random_polynomial,
    substitute,
    y,
    z,
)
from .freealg.families import UnknownPreset
from .gralg import CapExceeded, generator_sets, omega
from .linalg import EchelonBasis, solve_in_span

DEFAULT_WINDOW_CAP = 50_000
DEFAULT_SCHEDULE_DEPTH = 2
CLOSURE_CODE_VERSION = "1"
CACHE_ENV = "GRADEDPI_CACHE_DIR"


class WindowError(ValueError):
    """A polynomial or family does not fit the truncation window."""


# -- presentations -------------------------------------------------------------

@dataclass(frozen=True)
class IdealPresentation:
    label: str
    generators: tuple[tuple[str, GradedPolynomial], ...]

    def __post_init__(self):
        for name, g in self.generators:
            if g.is_zero():
                raise ValueError(f"generator {name} is zero")
        specs = {g.spec for _, g in self.generators}
        if len(specs) > 1:
            raise ValueError("generators over different fields")

    @property
    def polynomials(self) -> list[GradedPolynomial]:
        return [g for _, g in self.generators]

    def digest(self) -> str:
        h = hashlib.sha256()
        for name, g in self.generators:
            h.update(f"{name}={g}\n".encode())
        return h.hexdigest()[:16]


_PRESET_IDEALS = {"ut2-canonical": "I", "ut3-A": "J", "ut3-B": "Q"}


def presentation(name: str, spec: FieldSpec) -> IdealPresentation:
    """Named generator sets.

    ``I``, ``J``, ``Q`` (or the preset names) are the full identity ideals of
    the three gradings.  ``M`` = <w1*z1, w1*w2> and ``N`` = <w1*z1, z1*w1,
    w1*w2> with w_i ranging over Omega_i; ``Z2`` = <z1*z2>.
    """
    name = _PRESET_IDEALS.get(name, name)
    presets = {v: k for k, v in _PRESET_IDEALS.items()}
    if name in presets:
        return IdealPresentation(name, tuple(generator_sets(presets[name], spec)))
    z1 = GradedPolynomial.var(spec, z(1))
    if name == "Z2":
        return IdealPresentation(name, (("z1*z2", z1 * GradedPolynomial.var(spec, z(2))),))
    if name in ("M", "N"):
        w1, w2 = omega(spec, 1), omega(spec, 2)
        gens = [(f"{lab}*z1", w * z1) for lab, w in w1]
        if name == "N":
            gens += [(f"z1*{lab}", z1 * w) for lab, w in w1]
        gens += [(f"{l1}*{l2}", p1 * p2) for l1, p1 in w1 for l2, p2 in w2]
        return IdealPresentation(name, tuple(gens))
    raise UnknownPreset(f"unknown ideal {name!r}")


# -- windows ---------------------------------------------------------------------

@dataclass(frozen=True)
class TruncationWindow:
    yvars: int
    zvars: int
    max_deg: int

    def __post_init__(self):
        if self.yvars < 0 or self.zvars < 0 or self.yvars + self.zvars < 1 or self.max_deg < 1:
            raise WindowError("window needs at least one variable and max_deg >= 1")

    @property
    def letters(self) -> list[Variable]:
        return [y(i) for i in range(1, self.yvars + 1)] + [z(j) for j in range(1, self.zvars + 1)]

    def dim_upto(self, d: int) -> int:
        a = self.yvars + self.zvars
        return sum(a**ell for ell in range(1, d + 1))

    @property
    def dim(self) -> int:
        return self.dim_upto(self.max_deg)

    def check_cap(self, cap: int | None = DEFAULT_WINDOW_CAP) -> None:
        if cap is not None and self.dim > cap:
            raise CapExceeded("ambient window dimension", self.dim, cap)

    def __str__(self):
        return f"({self.yvars},{self.zvars},{self.max_deg})"


class WindowIndex:
    """Column bookkeeping for a window: word <-> column, letter products."""

    def __init__(self, window: TruncationWindow):
        self.window = window
        self.letters = window.letters
        self.alpha = {v: i for i, v in enumerate(self.letters)}
        self.size = window.dim
        self._offset = [0] + [window.dim_upto(ell) for ell in range(1, window.max_deg + 1)]

    def column(self, word: Word) -> int:
        a = len(self.letters)
        ell = len(word)
        if not 1 <= ell <= self.window.max_deg:
            raise WindowError(f"word {format_word(word)} has length outside 1..{self.window.max_deg}")
        pos = 0
        for v in word:
            try:
                pos = pos * a + self.alpha[v]
            except KeyError:
                raise WindowError(f"variable {v} is outside the window {self.window}") from None
        return self.size - 1 - (self._offset[ell - 1] + pos)

    @cached_property
    def words(self) -> list[Word]:
        """Words by column, i.e. in descending graded-lex order."""
        out = []
        for ell in range(1, self.window.max_deg + 1):
            out.extend(itertools.product(self.letters, repeat=ell))
        return out[::-1]

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.array([len(w) for w in self.words], dtype=np.int64)

    def vector(self, f: GradedPolynomial) -> np.ndarray:
        row = np.zeros(self.size, dtype=np.int64)
        for w, c in f.items():
            row[self.column(w)] = c
        return row

    def matrix(self, polys: Sequence[GradedPolynomial]) -> np.ndarray:
        out = np.zeros((len(polys), self.size), dtype=np.int64)
        for i, f in enumerate(polys):
            for w, c in f.items():
                out[i, self.column(w)] = c
        return out

    def polynomial(self, spec: FieldSpec, row) -> GradedPolynomial:
        words = self.words
        return GradedPolynomial(spec, {words[i]: int(row[i]) for i in np.nonzero(row)[0]})

    @cached_property
    def short_columns(self) -> np.ndarray:
        """Columns of words shorter than max_deg (the tail of the layout)."""
        return np.arange(self.size - self.window.dim_upto(self.window.max_deg - 1), self.size)

    @cached_property
    def shift_maps(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per letter x: columns of x*w and w*x for every short word w."""
        words = self.words
        out = []
        for x in self.letters:
            left = np.array([self.column((x,) + words[c]) for c in self.short_columns], dtype=np.int64)
            right = np.array([self.column(words[c] + (x,)) for c in self.short_columns], dtype=np.int64)
            out.append((left, right))
        return out

    def contains(self, f: GradedPolynomial) -> bool:
        try:
            for w in f.words():
                self.column(w)
        except WindowError:
            return False
        return True


# -- component -------------------------------------------------------------------

@dataclass(eq=False)
class TruncatedIdealComponent:
    spec: FieldSpec
    window: TruncationWindow
    label: str
    rows: np.ndarray
    pivots: list[int]
    provenance: dict[int, str]
    saturated: bool
    schedule_depth: int
    instances: int = 0
    cache_key: str = ""
    from_cache: bool = field(default=False, compare=False)

    def __eq__(self, other):
        if not isinstance(other, TruncatedIdealComponent):
            return NotImplemented
        same = ("spec", "window", "label", "pivots", "provenance", "saturated", "schedule_depth", "instances", "cache_key")
        return all(getattr(self, a) == getattr(other, a) for a in same) and np.array_equal(self.rows, other.rows)

    __hash__ = None

    @cached_property
    def index(self) -> WindowIndex:
        return WindowIndex(self.window)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> EchelonBasis:
        b = EchelonBasis(self.spec, self.index.size)
        b.rows = self.rows.copy()
        b.pivots = list(self.pivots)
        return b

    def polynomials(self) -> list[GradedPolynomial]:
        return [self.index.polynomial(self.spec, r) for r in self.rows]

    def dims_by_degree(self) -> dict[int, int]:
        """Number of basis rows whose leading word has each length."""
        out = {d: 0 for d in range(1, self.window.max_deg + 1)}
        for p in self.pivots:
            out[int(self.index.lengths[p])] += 1
        return out

    def provenance_log(self) -> list[tuple[str, str]]:
        words = self.index.words
        return [(format_word(words[p]), self.provenance.get(p, "")) for p in self.pivots]


def _multiplicities(g: GradedPolynomial, vars_: list[Variable]) -> list[tuple[int, ...]]:
    return sorted({tuple(w.count(v) for v in vars_) for w in g.words()})


def _monomials(letters: list[Variable], par: int, max_len: int) -> dict[int, list[Word]]:
    out: dict[int, list[Word]] = {}
    for ell in range(1, max_len + 1):
        out[ell] = [w for w in itertools.product(letters, repeat=ell) if parity(w) == par]
    return out


class _InstancePlan:
    """Graded substitution instances of one generator inside a window.

    Each variable of the generator is sent to a coefficient-free monomial of
    matching parity.  Variables in which the generator is not linear also
    take sums m1 + c2*m2 (+ c3*m3 at depth 3) of distinct monomials with
    nonzero coefficients; for multilinear variables such sums only repeat
    linear combinations of monomial instances.  The leading coefficient is
    normalised to 1 because every generator satisfies g(c*x) = c*g(x).
    """

    def __init__(self, spec: FieldSpec, g: GradedPolynomial, window: TruncationWindow, depth: int):
        self.spec, self.g, self.window, self.depth = spec, g, window, depth
        self.vars = g.variables()
        self.mult = _multiplicities(g, self.vars)
        self.linear = [all(m[i] == 1 for m in self.mult) for i in range(len(self.vars))]
        self.max_len = [self._max_len(i) for i in range(len(self.vars))]
        self._monos = {
            par: _monomials(window.letters, par, max(self.max_len, default=0)) for par in (0, 1)
        }

    def _weighted(self, lens: Sequence[int]) -> int:
        return max(sum(c * ell for c, ell in zip(m, lens)) for m in self.mult)

    def _max_len(self, i: int) -> int:
        base = [1] * len(self.vars)
        best = 0
        for ell in range(1, self.window.max_deg + 1):
            base[i] = ell
            if self._weighted(base) <= self.window.max_deg:
                best = ell
        return best

    def _options(self, i: int, depth: int) -> list[tuple[GradedPolynomial, int]]:
        """(image, max length) for variable i using sums of exactly ``depth`` monomials."""
        v = self.vars[i]
        monos = [(w, ell) for ell, ws in self._monos[1 if v.is_odd else 0].items() if ell <= self.max_len[i] for w in ws]
        spec = self.spec
        if depth == 1:
            return [(GradedPolynomial.monomial(spec, w), ell) for w, ell in monos]
        if self.linear[i]:
            return []
        nonzero = [e.code for e in field_enumerate(spec) if e.code]
        out = []
        for combo in itertools.combinations(monos, depth):
            ell = max(c[1] for c in combo)
            for coeffs in itertools.product(nonzero, repeat=depth - 1):
                terms = {combo[0][0]: 1}
                terms.update({w: c for (w, _), c in zip(combo[1:], coeffs)})
                out.append((GradedPolynomial(spec, terms), ell))
        return out

    def instances(self, layer: int):
        """Instances whose deepest substituted sum has exactly ``layer`` terms."""
        if not self.vars:
            return
        per_depth = [[self._options(i, k) for k in range(1, layer + 1)] for i in range(len(self.vars))]
        for depths in itertools.product(range(1, layer + 1), repeat=len(self.vars)):
            if max(depths) != layer:
                continue
            pools = [per_depth[i][k - 1] for i, k in enumerate(depths)]
            if any(not p for p in pools):
                continue
            for choice in itertools.product(*pools):
                if self._weighted([ell for _, ell in choice]) > self.window.max_deg:
                    continue
                img = substitute(self.g, {v: c[0] for v, c in zip(self.vars, choice)})
                if not img.is_zero():
                    yield img


def _add_group(basis: EchelonBasis, rows: np.ndarray, label: str, provenance: dict[int, str]) -> int:
    if rows.shape[0] == 0:
        return 0
    before = set(basis.pivots)
    gained = basis.add(rows)
    for p in basis.pivots:
        if p not in before:
            provenance[p] = label
    return gained


def _compute_closure(pres, spec, window, depth, max_rounds):
    index = WindowIndex(window)
    basis = EchelonBasis(spec, index.size)
    provenance: dict[int, str] = {}
    count = 0
    for name, g in pres.generators:
        plan = _InstancePlan(spec, g, window, depth)
        for layer in range(1, depth + 1):
            polys = list(plan.instances(layer))
            count += len(polys)
            if polys:
                _add_group(basis, index.matrix(polys), f"{'subst' if layer == 1 else f'sum{layer}'}:{name}", provenance)

    short = index.short_columns
    n_short_start = int(short[0]) if short.size else index.size
    multiplied = EchelonBasis(spec, index.size)
    saturated = False
    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        rounds += 1
        low = basis.rows[[i for i, p in enumerate(basis.pivots) if p >= n_short_start]]
        fresh = multiplied.reduce(low) if low.shape[0] else low
        fresh = fresh[fresh.any(axis=1)] if fresh.shape[0] else fresh
        if fresh.shape[0] == 0:
            saturated = True
            break
        multiplied.add(fresh)
        sub = fresh[:, short]
        prods = []
        for left, right in index.shift_maps:
            for cols in (left, right):
                m = np.zeros((fresh.shape[0], index.size), dtype=np.int64)
                m[:, cols] = sub
                prods.append(m)
        block = np.vstack(prods)
        count += block.shape[0]
        _add_group(basis, block, f"mult:round{rounds}", provenance)
    return basis, provenance, saturated, count


def closure(
    pres: IdealPresentation,
    window: TruncationWindow,
    depth: int = DEFAULT_SCHEDULE_DEPTH,
    cap: int | None = DEFAULT_WINDOW_CAP,
    cache_dir: str | os.PathLike | bool | None = None,
    max_rounds: int | None = None,
    spec: FieldSpec | None = None,
) -> TruncatedIdealComponent:
    """Truncated consequence space of ``pres`` inside ``window``.

    ``depth`` is the largest number of monomials summed in one substituted
    variable.  With ``cache_dir`` (or the environment variable named by
    ``CACHE_ENV``) results are stored on disk and reloaded bit-exactly.
    """
    if depth < 1:
        raise ValueError("schedule depth must be >= 1")
    window.check_cap(cap)
    if spec is None:
        if not pres.generators:
            raise ValueError("an empty presentation needs an explicit field")
        spec = pres.generators[0][1].spec
    key = cache_key(pres, spec, window, depth)
    cache = ClosureCache.resolve(cache_dir)
    if cache is not None:
        hit = cache.load(key, spec, window)
        if hit is not None:
            return hit
    basis, provenance, saturated, count = _compute_closure(pres, spec, window, depth, max_rounds)
    comp = TruncatedIdealComponent(
        spec, window, pres.label, basis.rows, list(basis.pivots), provenance, saturated, depth, count, key
    )
    if cache is not None:
        cache.store(comp, pres)
    return comp


# -- queries ---------------------------------------------------------------------

def _window_vector(f: GradedPolynomial, comp: TruncatedIdealComponent) -> np.ndarray:
    if f.spec != comp.spec:
        raise WindowError("polynomial over a different field")
    return comp.index.vector(f)


def member(f: GradedPolynomial, comp: TruncatedIdealComponent) -> bool:
    """True proves f lies in the ideal; False only means not at this truncation."""
    v = _window_vector(f, comp)
    return comp.basis().contains(v)


@dataclass
class NormalForm:
    labels: list[str]
    coefficients: np.ndarray
    residual: bool
    spec: FieldSpec

    def terms(self) -> list[tuple[str, int]]:
        if self.residual:
            return []
        return [(lab, int(c)) for lab, c in zip(self.labels, self.coefficients) if c]

    def format(self) -> str:
        if self.residual:
            return "residual: no solution at this truncation"
        parts = [f"{self.spec.format_code(c)}*{lab}" for lab, c in self.terms()]
        return " + ".join(parts) if parts else "0"


def normal_form(f: GradedPolynomial, family: SpanningFamily, comp: TruncatedIdealComponent) -> NormalForm:
    """Solve f = sum c_s * s + v with v in the component.

    The returned solution sets free coordinates to zero; it is unique when
    the family is independent modulo the ideal.
    """
    if family.spec != comp.spec:
        raise WindowError("family and component over different fields")
    target = _window_vector(f, comp)
    gens = comp.index.matrix([m.poly for m in family])
    combo = solve_in_span(comp.spec, gens, target, comp.basis())
    labels = [m.label for m in family]
    if combo is None:
        return NormalForm(labels, np.zeros(len(family), dtype=np.int64), True, comp.spec)
    return NormalForm(labels, combo, False, comp.spec)


def reconstruct(nf: NormalForm, family: SpanningFamily) -> GradedPolynomial:
    out = GradedPolynomial.zero(family.spec)
    for mbr, c in zip(family, nf.coefficients):
        if c:
            out = out + mbr.poly.scale(int(c))
    return out


# -- cache -----------------------------------------------------------------------

def cache_key(pres: IdealPresentation, spec: FieldSpec, window: TruncationWindow, depth: int) -> str:
    raw = f"{pres.label}|{spec.p}|{spec.k}|{spec.modulus}|{window}|{pres.digest()}|{depth}|{CLOSURE_CODE_VERSION}"
    return hashlib.sha256(raw.encode()).hexdigest()[:20]


class ClosureCache:
    """Plain-text closure dumps, one file per key.

    Format: ``key value`` header lines (format, label, q, p, k, modulus,
    window, generators, schedule, code, saturated, instances, rank), then
    one line per basis row ``pivot<TAB>label<TAB>codes...``.
    """

    FORMAT = "gradedpi-closure/1"

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    @classmethod
    def resolve(cls, cache_dir) -> ClosureCache | None:
        """``None`` falls back to the environment variable; ``False`` disables caching."""
        if cache_dir is False:
            return None
        if cache_dir is None:
            cache_dir = os.environ.get(CACHE_ENV) or None
        return None if cache_dir is None else cls(cache_dir)

    def path(self, key: str) -> Path:
        return self.root / f"closure-{key}.txt"

    def entries(self) -> list[Path]:
        if not self.root.is_dir():
            return []
        return sorted(self.root.glob("closure-*.txt"))

    def clear(self) -> int:
        files = self.entries()
        for f in files:
            f.unlink()
        return len(files)

    def store(self, comp: TruncatedIdealComponent, pres: IdealPresentation) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        spec, w = comp.spec, comp.window
        header = [
            ("format", self.FORMAT),
            ("key", comp.cache_key),
            ("label", comp.label),
            ("q", spec.q),
            ("p", spec.p),
            ("k", spec.k),
            ("modulus", ",".join(map(str, spec.modulus))),
            ("window", f"{w.yvars},{w.zvars},{w.max_deg}"),
            ("generators", pres.digest()),
            ("schedule", comp.schedule_depth),
            ("code", CLOSURE_CODE_VERSION),
            ("saturated", int(comp.saturated)),
            ("instances", comp.instances),
            ("rank", comp.dim),
        ]
        lines = [f"{k} {v}" for k, v in header]
        for p, row in zip(comp.pivots, comp.rows):
            lines.append(f"{p}\t{comp.provenance.get(p, '')}\t{' '.join(map(str, row.tolist()))}")
        path = self.path(comp.cache_key)
        tmp = path.with_suffix(".tmp")
        tmp.write_text("\n".join(lines) + "\n")
        tmp.replace(path)
        return path

    def load(self, key: str, spec: FieldSpec, window: TruncationWindow) -> TruncatedIdealComponent | None:
        path = self.path(key)
        if not path.is_file():
            return None
        header: dict[str, str] = {}
        pivots, rows, provenance = [], [], {}
        for line in path.read_text().splitlines():
            if "\t" in line:
                p, label, codes = line.split("\t")
                pivots.append(int(p))
                provenance[int(p)] = label
                rows.append([int(c) for c in codes.split()])
            elif line:
                k, _, v = line.partition(" ")
                header[k] = v
        expect = {"format": self.FORMAT, "key": key, "q": str(spec.q), "window": f"{window.yvars},{window.zvars},{window.max_deg}"}
        if any(header.get(k) != v for k, v in expect.items()) or int(header.get("rank", -1)) != len(rows):
            return None
        mat = np.array(rows, dtype=np.int64).reshape(len(rows), window.dim)
        return TruncatedIdealComponent(
            spec, window, header["label"], mat, pivots, provenance, header["saturated"] == "1",
            int(header["schedule"]), int(header["instances"]), key, from_cache=True,
        )


# -- lemma suite -------------------------------------------------------------------

@dataclass
class LemmaResult:
    name: str
    instances: int
    failures: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.instances > 0


def _bracket_power(u, v, r):
    for _ in range(r):
        u = commutator(u, v)
    return u


def _mixed_leibniz(spec, rng, samples, max_r):
    letters = [y(1), y(2), z(1), z(2)]
    fails = 0
    for _ in range(samples):
        u, v, w = (random_polynomial(spec, rng, letters, 2, terms=3) for _ in range(3))
        r = int(rng.integers(0, max_r + 1))
        lhs = _bracket_power(u * v, w, r)
        rhs = GradedPolynomial.zero(spec)
        for i in range(r + 1):
            rhs = rhs + (_bracket_power(u, w, i) * _bracket_power(v, w, r - i)).scale(math.comb(r, i) % spec.p)
        fails += lhs != rhs
    return LemmaResult("commutator of a product", samples, fails, f"r <= {max_r}")


def _power_step(spec, rng, samples):
    letters = [y(1), y(2), z(1)]
    fails = 0
    for _ in range(samples):
        u, v = (random_polynomial(spec, rng, letters, 2, terms=2) for _ in range(2))
        fails += _bracket_power(u, v, spec.q) != commutator(u, v**spec.q)
    return LemmaResult("q-fold step equals bracket with q-th power", samples, fails)


def _product_rule(spec, rng, samples):
    letters = [y(1), z(1), z(2)]
    fails = 0
    for _ in range(samples):
        a, b, c = (random_polynomial(spec, rng, letters, 2, terms=2) for _ in range(3))
        fails += commutator(a * b, c) != a * commutator(b, c) + commutator(a, c) * b
    return LemmaResult("product rule for one bracket", samples, fails)


def _membership(name, pres, window, polys, depth, cache_dir):
    comp = closure(pres, window, depth, cache_dir=cache_dir)
    bad = [str(f) for f in polys if not member(f, comp)]
    return LemmaResult(name, len(polys), len(bad), f"ideal {pres.label} at {window}" + (f"; not found: {bad}" if bad else ""))


def lemma_suite(
    q_values: Sequence[int] = (2, 3),
    samples: int = 200,
    seed: int = 0,
    depth: int = DEFAULT_SCHEDULE_DEPTH,
    cache_dir=None,
) -> list[LemmaResult]:
    """Exact rewriting identities and ideal-membership instances.

    Exact checks run on seeded random polynomials.  Membership checks build
    truncated closures of the named ideals and test concrete differences.
    """
    from .ff import field_of_order

    rng = np.random.default_rng(seed)
    results = []
    for q in q_values:
        spec = field_of_order(q)
        tag = f" [q={q}]"
        for res in (_mixed_leibniz(spec, rng, samples, 4), _power_step(spec, rng, samples), _product_rule(spec, rng, samples)):
            res.name += tag
            results.append(res)

        V = lambda v: GradedPolynomial.var(spec, v)  # noqa: E731
        y1, y2, z1, z2 = V(y(1)), V(y(2)), V(z(1)), V(z(2))
        yq = y1**q - y1

        # z1*f*z2 lies in <z1*z2>
        sandwiches = [z1 * y1 * z2, z1 * z1 * z2, z1 * (y1 * y1 + z2 * z1) * z2]
        results.append(_membership("odd sandwich in <z1*z2>" + tag, presentation("Z2", spec),
                                   TruncationWindow(1, 2, 4), [f for f in sandwiches if f.degree <= 4], depth, cache_dir))

        # [z1, y1^(q)] = [z1, y1] modulo the ut2 ideal
        results.append(_membership("q-fold step on z modulo I" + tag, presentation("I", spec),
                                   TruncationWindow(1, 1, q + 1),
                                   [_bracket_power(z1, y1, q) - commutator(z1, y1)], depth, cache_dir))

        # [z, y^(q)] - [z, y] - z*(y^q - y) lies in M
        results.append(_membership("q-fold step reduction modulo M" + tag, presentation("M", spec),
                                   TruncationWindow(1, 1, q + 1),
                                   [_bracket_power(z1, y1, q) - commutator(z1, y1) - z1 * yq], depth, cache_dir))

        # commutators of Y-commutators with z: [p, z] = -z*p modulo M
        ycomms = [commutator(y2, y1), commutator(y1, y2)]
        results.append(_membership("[p, z] = -z*p modulo M" + tag, presentation("M", spec), TruncationWindow(2, 1, 3),
                                   [commutator(p, z1) + z1 * p for p in ycomms], depth, cache_dir))

        # [z1, y1^(q)] = [z1, y1] modulo N, and the same after bracketing with z2
        step = _bracket_power(z1, y1, q) - commutator(z1, y1)
        results.append(_membership("one-z commutator reduction modulo N" + tag, presentation("N", spec),
                                   TruncationWindow(1, 1, q + 1), [step], depth, cache_dir))
        results.append(_membership("two-z commutator reduction modulo N" + tag, presentation("N", spec),
                                   TruncationWindow(1, 2, q + 2), [commutator(step, z2)], depth, cache_dir))
    return results
