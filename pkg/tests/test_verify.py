import json

import pytest

from gradedpi.ff import field_of_order
from gradedpi.freealg import SpanningFamily, UnknownPreset, enumerate_spanning_family, parse_poly
from gradedpi.freealg.families import FamilyMember
from gradedpi.gralg import grading
from gradedpi.tideal import TruncationWindow, closure, presentation
from gradedpi.verify import (
    DEFAULT_WINDOWS,
    REPORT_SCHEMA,
    VerificationConfig,
    degree_table,
    verify_basis,
    verify_independence,
    verify_inclusion,
    verify_spanning,
)
import oracles


def config(preset, q, window, **kw):
    return VerificationConfig(preset, field_of_order(q), TruncationWindow(*window), **kw)


def test_config_validation():
    with pytest.raises(UnknownPreset):
        config("ut4", 2, (1, 1, 2))
    with pytest.raises(ValueError):
        config("ut2-canonical", 2, (1, 1, 2), samples=0)
    with pytest.raises(ValueError):
        config("ut2-canonical", 2, (1, 1, 2), schedule_depth=0)


@pytest.mark.parametrize(
    "preset,q,window",
    [
        ("ut2-canonical", 2, (1, 1, 3)),
        ("ut2-canonical", 4, (1, 1, 3)),
        ("ut3-A", 2, (2, 1, 3)),
        ("ut3-B", 2, (1, 2, 3)),
    ],
)
def test_family_size_is_the_codimension_of_the_identities(preset, q, window):
    cfg = config(preset, q, window, inclusion=False)
    rep = verify_basis(cfg)
    spec = cfg.spec
    w = cfg.window
    dim_w, dim_id = oracles.identity_dimension(oracles.GF(spec.p, spec.modulus), grading(preset).degs, w.letters, w.max_deg)
    assert rep.spanning.family_size == dim_w - dim_id
    assert rep.pinch


def test_smallest_ut2_window_numbers():
    rep = verify_basis(config("ut2-canonical", 2, (1, 1, 3)))
    s, i = rep.spanning, rep.independence
    assert (s.dim_w, s.dim_ideal, s.family_size, i.rank) == (14, 9, 5, 5)
    assert rep.inclusion_ok and rep.pinch and i.witnesses_suffice


def test_degree_one_window_is_trivial():
    for preset in DEFAULT_WINDOWS:
        rep = verify_basis(config(preset, 3, (1, 1, 1), inclusion=False))
        assert rep.spanning.dim_ideal == 0
        assert rep.spanning.family_size == 2
        assert rep.pinch


def test_dependent_family_is_caught():
    cfg = config("ut2-canonical", 3, (1, 1, 2))
    spec = cfg.spec
    p = parse_poly("y1", spec)
    fam = SpanningFamily(
        "ut2-canonical", spec, 1, 1, 2,
        [FamilyMember("y1", p, 1, ("a",)), FamilyMember("2*y1", p.scale(2), 1, ("b",))],
    )
    comp = closure(presentation("I", spec), cfg.window)
    cert = verify_independence(cfg, comp, fam)
    assert cert.rank == 1 and not cert.independent
    assert cert.topup_rows > 0
    assert not verify_spanning(cfg, comp, fam).spans


def test_inclusion_flags_only_identities():
    verdicts = verify_inclusion(config("ut3-A", 2, (2, 1, 3)))
    assert verdicts and all(v.identity and v.exact for v in verdicts)


def test_degree_table_sums():
    cfg = config("ut3-B", 2, (1, 2, 3))
    comp = closure(presentation("Q", cfg.spec), cfg.window)
    fam = enumerate_spanning_family("ut3-B", cfg.spec, 1, 2, 3)
    table = degree_table(cfg.window, comp, fam)
    assert [r["degree"] for r in table] == [1, 2, 3]
    assert sum(r["ideal"] for r in table) == comp.dim
    assert sum(r["family"] for r in table) == len(fam)
    for r in table:
        assert r["words"] == r["ideal"] + r["family"] == r["ideal"] + r["quotient"]


def test_reports_are_deterministic(tmp_path):
    a = verify_basis(config("ut3-B", 3, (1, 2, 3), inclusion=False))
    b = verify_basis(config("ut3-B", 3, (1, 2, 3), inclusion=False, cache_dir=str(tmp_path)))
    c = verify_basis(config("ut3-B", 3, (1, 2, 3), inclusion=False, cache_dir=str(tmp_path)))
    assert a.to_json() == b.to_json() == c.to_json()
    assert a.to_text() == c.to_text()
    data = json.loads(a.to_json())
    assert data["schema"] == REPORT_SCHEMA
    assert data["verdict"] == {"inclusion": "skipped", "pinch": True}
    assert "timings" not in data
    full = verify_basis(config("ut2-canonical", 3, (1, 1, 3)))
    assert full.to_json() == verify_basis(config("ut2-canonical", 3, (1, 1, 3))).to_json()
    assert json.loads(full.to_json())["verdict"] == {"inclusion": True, "pinch": True}


def test_report_options():
    rep = verify_basis(config("ut2-canonical", 2, (1, 1, 2), inclusion=False, timings=True))
    data = rep.to_dict()
    assert data["verdict"]["inclusion"] == "skipped"
    assert set(data["timings"]) == {"inclusion", "spanning", "independence"}
    assert "pinch: true" in rep.to_text()
