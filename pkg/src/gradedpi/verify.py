"""Truncated basis certificates: inclusion, spanning, independence.

The dimension pinch rank(E) = |S| = dim W - dim I_hat certifies at once
that the spanning family spans the truncated relatively free algebra and
is linearly independent modulo the identities.  Both halves are one-sided
sound: a positive answer is a proof at the window, a negative one is
inconclusive.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .ff import FieldSpec
from .freealg import PRESETS, SpanningFamily, UnknownPreset, enumerate_spanning_family, y, z
from .gralg import (
    DEFAULT_EXHAUSTIVE_CAP,
    WitnessFamily,
    WordEvaluator,
    assignment_space_size,
    check_identity,
    generator_sets,
    grading,
    random_component,
    upper_positions,
)
from .linalg import EchelonBasis
from .tideal import (
    DEFAULT_SCHEDULE_DEPTH,
    DEFAULT_WINDOW_CAP,
    TruncatedIdealComponent,
    TruncationWindow,
    closure,
    presentation,
)

REPORT_SCHEMA = "gradedpi-report/1"
DEFAULT_WINDOWS = {
    "ut2-canonical": [(2, 1, 4)],
    "ut3-A": [(2, 1, 3)],
    "ut3-B": [(1, 2, 3), (2, 2, 3)],
}


@dataclass
class VerificationConfig:
    preset: str
    spec: FieldSpec
    window: TruncationWindow
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP
    samples: int = 10**5
    seed: int = 0
    schedule_depth: int = DEFAULT_SCHEDULE_DEPTH
    window_cap: int = DEFAULT_WINDOW_CAP
    witness_cap: int = 10**5
    topup_max: int = 20_000
    cache_dir: str | bool | None = None
    threads: int = 1
    timings: bool = False
    inclusion: bool = True

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise UnknownPreset(f"unknown preset {self.preset!r}; expected one of {', '.join(PRESETS)}")
        if min(self.exhaustive_cap, self.samples, self.witness_cap, self.threads) < 1 or self.seed < 0:
            raise ValueError("bounds must be positive and the seed non-negative")
        if self.schedule_depth < 1:
            raise ValueError("schedule depth must be >= 1")


# -- inclusion -----------------------------------------------------------------

@dataclass
class GeneratorVerdict:
    generator: str
    identity: bool
    mode: str
    exact: bool
    evaluations: int
    counterexample: str | None = None


def verify_inclusion(config: VerificationConfig) -> list[GeneratorVerdict]:
    """Check every expanded generator, exhaustively where the space fits the cap."""
    gens = generator_sets(config.preset, config.spec)
    grad = grading(config.preset)

    def run(item):
        name, g = item
        exhaustive = assignment_space_size(g, grad) <= config.exhaustive_cap
        v = check_identity(
            g, grad, "exhaustive" if exhaustive else "random",
            samples=config.samples, seed=config.seed, cap=config.exhaustive_cap,
        )
        cex = None if v.identity else v.describe()
        return GeneratorVerdict(name, v.identity, v.mode, v.exact, v.evaluations, cex)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            return list(pool.map(run, gens))
    return [run(item) for item in gens]


# -- spanning --------------------------------------------------------------------

@dataclass
class SpanningCertificate:
    dim_w: int
    dim_ideal: int
    family_size: int
    stacked_rank: int
    saturated: bool
    cache_key: str

    @property
    def spans(self) -> bool:
        return self.stacked_rank == self.dim_w


def _component(config: VerificationConfig) -> TruncatedIdealComponent:
    return closure(
        presentation(config.preset, config.spec), config.window, config.schedule_depth,
        cap=config.window_cap, cache_dir=config.cache_dir,
    )


def _family(config: VerificationConfig) -> SpanningFamily:
    w = config.window
    return enumerate_spanning_family(config.preset, config.spec, w.yvars, w.zvars, w.max_deg)


def verify_spanning(config: VerificationConfig, comp=None, family=None) -> SpanningCertificate:
    comp = comp or _component(config)
    family = family or _family(config)
    basis = comp.basis()
    basis.add(comp.index.matrix([m.poly for m in family]))
    return SpanningCertificate(comp.window.dim, comp.dim, len(family), basis.rank, comp.saturated, comp.cache_key)


# -- independence ----------------------------------------------------------------

@dataclass
class IndependenceCertificate:
    family_size: int
    witness_rows: int
    witness_rank: int
    topup_rows: int
    rank: int
    ideal_rows_vanish: bool

    @property
    def independent(self) -> bool:
        return self.rank == self.family_size

    @property
    def witnesses_suffice(self) -> bool:
        return self.witness_rank == self.family_size


def _witness_stacks(preset, spec, window, seed, cap):
    """Witness assignments: every y-parameter tuple (or a seeded sample when
    that exceeds ``cap``) against every pattern of z values in {0} + choices."""
    fam = WitnessFamily(preset)
    n = fam.grading.n
    k = len(fam.param_names)
    m = window.yvars
    zmats = [np.zeros((n, n), dtype=np.int64)] + [c.array() for c in fam.z_choices(spec)]
    zpatterns = list(itertools.product(range(len(zmats)), repeat=window.zvars))
    total = spec.q ** (k * m)
    if total * len(zpatterns) <= cap:
        params = np.array(list(itertools.product(range(spec.q), repeat=k * m)), dtype=np.int64).reshape(total, k * m)
    else:
        rng = np.random.default_rng(seed)
        params = rng.integers(0, spec.q, size=(max(1, cap // len(zpatterns)), k * m))
    ys = [fam.y_array(spec, params[:, i * k:(i + 1) * k]) for i in range(m)]
    B = params.shape[0]
    values = {}
    for i in range(m):
        values[y(i + 1)] = np.repeat(ys[i], len(zpatterns), axis=0)
    zidx = np.tile(np.array(zpatterns, dtype=np.int64).reshape(len(zpatterns), window.zvars), (B, 1))
    stack = np.stack(zmats)
    for j in range(window.zvars):
        values[z(j + 1)] = stack[zidx[:, j]]
    return values, B * len(zpatterns)


def _random_stacks(preset, spec, window, rng, size):
    grad = grading(preset)
    return {v: random_component(grad, 1 if v.is_odd else 0, spec, rng, size) for v in window.letters}


def _word_evaluations(spec, grad, index, values) -> np.ndarray:
    """Rows: (assignment, upper entry); columns: window words."""
    ev = WordEvaluator(spec, values, grad)
    pos = upper_positions(grad.n)
    ii = np.array([p[0] for p in pos])
    jj = np.array([p[1] for p in pos])
    cols = [ev.word(w)[:, ii, jj].reshape(-1) for w in index.words]
    return np.stack(cols, axis=1)


def verify_independence(config: VerificationConfig, comp=None, family=None, chunk: int = 4096) -> IndependenceCertificate:
    """Rank of family evaluations on witness assignments, topped up with
    seeded random graded assignments when the witnesses fall short."""
    spec, window = config.spec, config.window
    comp = comp or _component(config)
    family = family or _family(config)
    grad = grading(config.preset)
    index = comp.index
    coeffs_t = index.matrix([m.poly for m in family]).T
    ideal_t = comp.rows.T
    size = len(family)
    basis = EchelonBasis(spec, size)
    vanish = True

    def absorb(values):
        nonlocal vanish
        ew = _word_evaluations(spec, grad, index, values)
        if ideal_t.shape[1] and spec.matmul(ew, ideal_t).any():
            vanish = False
        if size:
            e = spec.matmul(ew, coeffs_t)
            for start in range(0, e.shape[0], chunk):
                if basis.rank == size:
                    break
                basis.add(e[start:start + chunk])

    values, wrows = _witness_stacks(config.preset, spec, window, config.seed, config.witness_cap)
    absorb(values)
    witness_rank = basis.rank
    rng = np.random.default_rng(config.seed)
    topped = 0
    while basis.rank < size and topped < config.topup_max:
        batch = min(256, config.topup_max - topped)
        absorb(_random_stacks(config.preset, spec, window, rng, batch))
        topped += batch
    return IndependenceCertificate(size, wrows, witness_rank, topped, basis.rank, vanish)


# -- full report -------------------------------------------------------------------

@dataclass
class VerificationReport:
    preset: str
    field: str
    window: tuple[int, int, int]
    seed: int
    schedule_depth: int
    inclusion: list[GeneratorVerdict]
    spanning: SpanningCertificate
    independence: IndependenceCertificate
    degree_table: list[dict]
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def inclusion_ok(self) -> bool:
        return all(v.identity for v in self.inclusion)

    @property
    def pinch(self) -> bool:
        s, i = self.spanning, self.independence
        return (
            i.rank == s.family_size
            and s.dim_w == s.dim_ideal + s.family_size
            and s.spans
            and i.ideal_rows_vanish
        )

    def to_dict(self) -> dict:
        s, i = self.spanning, self.independence
        out = {
            "schema": REPORT_SCHEMA,
            "preset": self.preset,
            "field": self.field,
            "window": {"yvars": self.window[0], "zvars": self.window[1], "max_deg": self.window[2]},
            "seed": self.seed,
            "schedule_depth": self.schedule_depth,
            "cache_key": s.cache_key,
            "inclusion": [asdict(v) for v in self.inclusion],
            "dimensions": {
                "dim_W": s.dim_w,
                "dim_ideal": s.dim_ideal,
                "family_size": s.family_size,
                "by_degree": self.degree_table,
            },
            "spanning": {"stacked_rank": s.stacked_rank, "closure_saturated": s.saturated, "certified": s.spans},
            "independence": {
                "witness_rows": i.witness_rows,
                "witness_rank": i.witness_rank,
                "witnesses_suffice": i.witnesses_suffice,
                "topup_rows": i.topup_rows,
                "rank": i.rank,
                "ideal_rows_vanish": i.ideal_rows_vanish,
                "certified": i.independent,
            },
            "verdict": {"inclusion": self.inclusion_ok if self.inclusion else "skipped", "pinch": self.pinch},
        }
        if self.timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_text(self) -> str:
        return "".join(_text_lines(self.to_dict(), 0))


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return "none" if v is None else str(v)


def _text_lines(obj, depth):
    pad = "  " * depth
    for key, val in obj.items():
        if isinstance(val, dict):
            yield f"{pad}{key}:\n"
            yield from _text_lines(val, depth + 1)
        elif isinstance(val, list):
            yield f"{pad}{key}:\n"
            for item in val:
                if isinstance(item, dict):
                    head, *rest = item.items()
                    yield f"{pad}  - {head[0]}: {_scalar(head[1])}\n"
                    for k, v in rest:
                        yield f"{pad}    {k}: {_scalar(v)}\n"
                else:
                    yield f"{pad}  - {_scalar(item)}\n"
        else:
            yield f"{pad}{key}: {_scalar(val)}\n"


def degree_table(window: TruncationWindow, comp: TruncatedIdealComponent, family: SpanningFamily) -> list[dict]:
    """Per-length counts: ambient words, ideal rows, family members, quotient."""
    a = window.yvars + window.zvars
    ideal = comp.dims_by_degree()
    fam = family.degree_counts()
    return [
        {"degree": d, "words": a**d, "ideal": ideal[d], "family": fam[d], "quotient": a**d - ideal[d]}
        for d in range(1, window.max_deg + 1)
    ]


def verify_basis(config: VerificationConfig) -> VerificationReport:
    clock: dict[str, float] = {}
    t0 = time.perf_counter()
    inclusion = verify_inclusion(config) if config.inclusion else []
    clock["inclusion"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    comp = _component(config)
    family = _family(config)
    spanning = verify_spanning(config, comp, family)
    clock["spanning"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    independence = verify_independence(config, comp, family)
    clock["independence"] = time.perf_counter() - t0

    w = config.window
    return VerificationReport(
        config.preset, f"GF({config.spec.q})", (w.yvars, w.zvars, w.max_deg), config.seed, config.schedule_depth,
        inclusion, spanning, independence, degree_table(w, comp, family),
        clock if config.timings else {},
    )
