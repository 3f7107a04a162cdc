import numpy as np
import pytest

from gradedpi.ff import field_of_order
from gradedpi.freealg import UnknownPreset, enumerate_spanning_family, parse_poly, y, z
from gradedpi.gralg import CapExceeded, WordEvaluator, grading, random_component
from gradedpi.tideal import (
    CACHE_ENV,
    ClosureCache,
    IdealPresentation,
    TruncationWindow,
    WindowError,
    WindowIndex,
    cache_key,
    closure,
    lemma_suite,
    member,
    normal_form,
    presentation,
    reconstruct,
)
import oracles

IDEAL = {"ut2-canonical": "I", "ut3-A": "J", "ut3-B": "Q"}


# -- windows -----------------------------------------------------------------------

def test_window_dimensions():
    w = TruncationWindow(2, 1, 3)
    assert w.dim == 3 + 9 + 27
    assert str(w) == "(2,1,3)"
    with pytest.raises(WindowError):
        TruncationWindow(0, 0, 2)
    with pytest.raises(WindowError):
        TruncationWindow(1, 0, 0)
    with pytest.raises(CapExceeded):
        TruncationWindow(3, 3, 6).check_cap()


def test_column_layout_is_a_descending_bijection():
    idx = WindowIndex(TruncationWindow(1, 2, 3))
    words = idx.words
    assert sorted(idx.column(w) for w in words) == list(range(idx.size))
    assert all(idx.column(w) == c for c, w in enumerate(words))
    # longest words first, and the very last column is the smallest letter
    assert len(words[0]) == 3 and words[-1] == (y(1),)
    assert list(idx.lengths) == sorted(idx.lengths, reverse=True)
    with pytest.raises(WindowError):
        idx.column((y(2),))
    with pytest.raises(WindowError):
        idx.column((y(1),) * 4)


def test_shift_maps_multiply_by_letters():
    idx = WindowIndex(TruncationWindow(1, 1, 3))
    words = idx.words
    for x, (left, right) in zip(idx.letters, idx.shift_maps):
        for c, lc, rc in zip(idx.short_columns, left, right):
            assert words[lc] == (x,) + words[c]
            assert words[rc] == words[c] + (x,)


def test_vector_polynomial_round_trip():
    spec = field_of_order(3)
    idx = WindowIndex(TruncationWindow(2, 1, 3))
    f = parse_poly("[z1, y1, y2] - y1*y1 + 2*z1", spec)
    assert idx.polynomial(spec, idx.vector(f)) == f
    assert idx.contains(f) and not idx.contains(parse_poly("z2", spec))


# -- presentations -------------------------------------------------------------------

def test_presentations():
    spec = field_of_order(2)
    assert len(presentation("I", spec).generators) == 3
    assert presentation("ut3-A", spec).label == "J"
    assert len(presentation("M", spec).generators) == 2 + 4
    assert len(presentation("N", spec).generators) == 2 + 2 + 4
    with pytest.raises(UnknownPreset):
        presentation("X", spec)
    with pytest.raises(ValueError):
        IdealPresentation("bad", (("0", parse_poly("y1 - y1", spec)),))
    assert presentation("I", spec).digest() != presentation("I", field_of_order(3)).digest()


# -- closure vs exhaustive identities ---------------------------------------------------

@pytest.mark.parametrize(
    "preset,q,window",
    [
        ("ut2-canonical", 2, (1, 1, 3)),
        ("ut2-canonical", 3, (1, 1, 3)),
        ("ut2-canonical", 2, (1, 1, 4)),
        ("ut2-canonical", 2, (2, 1, 3)),
        ("ut3-A", 2, (2, 1, 3)),
        ("ut3-B", 2, (1, 2, 3)),
    ],
)
def test_closure_equals_identities_in_window(preset, q, window):
    spec = field_of_order(q)
    w = TruncationWindow(*window)
    comp = closure(presentation(preset, spec), w)
    dim_w, dim_id = oracles.identity_dimension(oracles.GF(spec.p, spec.modulus), grading(preset).degs, w.letters, w.max_deg)
    assert dim_w == w.dim
    assert comp.dim == dim_id
    assert comp.saturated


@pytest.mark.parametrize("preset", list(IDEAL))
@pytest.mark.parametrize("q", [2, 3, 4])
def test_closure_rows_vanish_on_random_assignments(preset, q):
    spec = field_of_order(q)
    w = TruncationWindow(2, 2, 3) if preset == "ut3-B" else TruncationWindow(2, 1, 3)
    comp = closure(presentation(preset, spec), w)
    g = grading(preset)
    rng = np.random.default_rng(q)
    values = {v: random_component(g, v.kind, spec, rng, 1000) for v in w.letters}
    ev = WordEvaluator(spec, values, g)
    for f in comp.polynomials():
        assert not ev.poly(f).any(), f


def test_echelon_rows_do_not_depend_on_generator_order():
    spec = field_of_order(3)
    pres = presentation("J", spec)
    flipped = IdealPresentation("J", tuple(reversed(pres.generators)))
    w = TruncationWindow(2, 1, 3)
    a, b = closure(pres, w), closure(flipped, w)
    assert a.pivots == b.pivots
    assert np.array_equal(a.rows, b.rows)


def test_dims_are_monotone_and_restrict():
    spec = field_of_order(2)
    pres = presentation("I", spec)
    small = closure(pres, TruncationWindow(1, 1, 3))
    big = closure(pres, TruncationWindow(1, 1, 4))
    assert big.dim >= small.dim
    db, ds = big.dims_by_degree(), small.dims_by_degree()
    assert all(db[d] == ds[d] for d in ds)


def test_depths_agree_on_small_window():
    spec = field_of_order(2)
    pres = presentation("I", spec)
    w = TruncationWindow(1, 1, 3)
    dims = {closure(pres, w, depth=d).dim for d in (1, 2, 3)}
    assert dims == {9}


def test_provenance_labels():
    comp = closure(presentation("I", field_of_order(2)), TruncationWindow(1, 1, 3))
    assert set(comp.provenance) == set(comp.pivots)
    assert all(lab.split(":")[0] in ("subst", "sum2", "sum3", "mult") for lab in comp.provenance.values())
    assert len(comp.provenance_log()) == comp.dim


def test_closure_guards():
    spec = field_of_order(2)
    with pytest.raises(CapExceeded):
        closure(presentation("I", spec), TruncationWindow(2, 2, 4), cap=100)
    with pytest.raises(ValueError):
        closure(IdealPresentation("empty", ()), TruncationWindow(1, 1, 2))
    empty = closure(IdealPresentation("empty", ()), TruncationWindow(1, 1, 2), spec=spec)
    assert empty.dim == 0
    with pytest.raises(ValueError):
        closure(presentation("I", spec), TruncationWindow(1, 1, 2), depth=0)


# -- membership and normal forms -------------------------------------------------------------

def test_membership_examples():
    for q in (2, 3):
        spec = field_of_order(q)
        comp = closure(presentation("I", spec), TruncationWindow(1, 1, q + 1))
        assert member(parse_poly("z1*z1", spec), comp)
        assert member(parse_poly(f"y1^{q} - y1", spec), comp)
        assert member(parse_poly(f"[z1, y1^({q})] - [z1, y1]", spec), comp)
        assert not member(parse_poly("[z1, y1]", spec), comp)
        assert not member(parse_poly("y1", spec), comp)
    with pytest.raises(WindowError):
        member(parse_poly("y1", field_of_order(3)), closure(presentation("I", field_of_order(2)), TruncationWindow(1, 1, 2)))


def test_normal_form_examples():
    spec = field_of_order(2)
    w = TruncationWindow(1, 1, 3)
    comp = closure(presentation("I", spec), w)
    fam = enumerate_spanning_family("ut2-canonical", spec, 1, 1, 3)
    nf = normal_form(parse_poly("z1*y1", spec), fam, comp)
    assert set(nf.terms()) == {("[z1, y1]", 1), ("y1*z1", 1)}
    assert normal_form(parse_poly("y1*y1*y1", spec), fam, comp).terms() == [("y1", 1)]
    assert normal_form(parse_poly("z1*z1", spec), fam, comp).format() == "0"
    small = enumerate_spanning_family("ut2-canonical", spec, 1, 1, 2)
    residual = normal_form(parse_poly("y1*[z1, y1]", spec), small, comp)
    assert residual.residual and residual.terms() == []
    assert residual.format().startswith("residual")


def test_reconstruction_differs_by_an_ideal_element():
    spec = field_of_order(3)
    w = TruncationWindow(2, 1, 3)
    comp = closure(presentation("I", spec), w)
    fam = enumerate_spanning_family("ut2-canonical", spec, 2, 1, 3)
    f = parse_poly("z1*y2*y1 + 2*y2*z1*y1 + y1*y1*y1", spec)
    nf = normal_form(f, fam, comp)
    assert not nf.residual
    assert member(f - reconstruct(nf, fam), comp)


# -- cache ------------------------------------------------------------------------------------

def test_cache_round_trip(tmp_path):
    spec = field_of_order(3)
    pres = presentation("J", spec)
    w = TruncationWindow(2, 1, 3)
    fresh = closure(pres, w, cache_dir=tmp_path)
    assert not fresh.from_cache
    again = closure(pres, w, cache_dir=tmp_path)
    assert again.from_cache
    assert again == fresh
    assert np.array_equal(again.rows, fresh.rows)
    assert again.provenance == fresh.provenance
    cache = ClosureCache(tmp_path)
    assert [p.name for p in cache.entries()] == [f"closure-{fresh.cache_key}.txt"]
    assert cache.clear() == 1 and cache.entries() == []


def test_cache_rejects_damaged_files(tmp_path):
    spec = field_of_order(2)
    pres = presentation("I", spec)
    w = TruncationWindow(1, 1, 3)
    comp = closure(pres, w, cache_dir=tmp_path)
    path = ClosureCache(tmp_path).path(comp.cache_key)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    redo = closure(pres, w, cache_dir=tmp_path)
    assert not redo.from_cache and redo.dim == comp.dim


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    spec = field_of_order(2)
    closure(presentation("I", spec), TruncationWindow(1, 1, 2))
    assert len(ClosureCache(tmp_path).entries()) == 1


def test_cache_key_separates_inputs():
    spec = field_of_order(2)
    pres = presentation("I", spec)
    w = TruncationWindow(1, 1, 3)
    keys = {
        cache_key(pres, spec, w, 2),
        cache_key(pres, spec, w, 3),
        cache_key(pres, spec, TruncationWindow(1, 1, 4), 2),
        cache_key(presentation("I", field_of_order(4)), field_of_order(4), w, 2),
        cache_key(presentation("J", spec), spec, w, 2),
    }
    assert len(keys) == 5


def test_lemma_suite_small():
    results = lemma_suite(q_values=(2,), samples=20)
    assert results and all(r.ok for r in results), [(r.name, r.failures, r.detail) for r in results if not r.ok]


def test_cache_can_be_disabled_despite_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    closure(presentation("I", field_of_order(2)), TruncationWindow(1, 1, 2), cache_dir=False)
    assert ClosureCache(tmp_path).entries() == []
