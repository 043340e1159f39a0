import pytest

from opbar import fixtures as fx
from opbar.fincat import FinCategory, poset_category
from opbar.opcat import (decollage, monoid_opcat, nerve_diagnostic, point, tautological, tautological_embedding,
                         unitality_report, validate_opcat)
from opbar.report import StructuralError


def test_point_is_valid_and_unital():
    pt = point()
    assert validate_opcat(pt).ok
    r = unitality_report(pt)
    assert r["left"] and r["right"]


def test_redirected_identity_triangle_is_witnessed():
    d = decollage(fx.a2())
    c = d.cat
    key = next((phi, g) for (phi, g) in sorted(d.fmor) if phi == c.ident[c.dom[phi]] and g != c.ident[c.dom[g]])
    wrong = next(m for m in range(c.n_mor) if m != d.fmor[key])
    rep = validate_opcat(d.replace(fmor={**d.fmor, key: wrong}))
    assert not rep.ok and rep.witnesses


def test_decollage_terminal_is_point():
    t = FinCategory.build(["x"], [("1", 0, 0)], [0], lambda g, f: 0)
    d = decollage(t)
    assert (d.cat.n_obj, d.cat.n_mor) == (1, 1)
    assert validate_opcat(d).ok


def test_decollage_a2():
    d = decollage(fx.a2())
    assert d.cat.obj == ("1a", "1b", "f")
    assert validate_opcat(d).ok
    r = unitality_report(d)
    assert r["left"] and r["right"]
    assert sorted(d.terminals.values()) == [0, 1]


def test_tautological_a2():
    t = tautological(fx.a2())
    assert t.cat.n_obj == 5
    assert validate_opcat(t).ok
    r = unitality_report(t)
    assert r["left"] and not r["right"]


def test_tautological_never_right_unital():
    term = FinCategory.build(["x"], [("1", 0, 0)], [0], lambda g, f: 0)
    t = tautological(term)
    assert t.cat.n_obj == 2
    assert not unitality_report(t)["right"]
    for n in (2, 3):
        c = poset_category(list(range(n)), lambda a, b: a <= b)
        assert not unitality_report(tautological(c))["right"]


def test_tautological_embedding_misses_one_object():
    a2 = fx.a2()
    emb, target = tautological_embedding(a2)
    assert emb.validate().ok
    assert len(emb.obj_map) == a2.n_obj + a2.n_mor == target.cat.n_obj - 1


def test_monoid_categories():
    m2 = monoid_opcat([0, 1], fx.m2_table(), unit=0)
    assert (m2.cat.n_obj, m2.cat.n_mor) == (2, 4)
    r = unitality_report(m2)
    assert r["left"] and r["right"]
    pu2 = monoid_opcat(["u", "v"], fx.left_zero("uv"), pseudo={"u": "u", "v": "v"}, terminal="u")
    assert (pu2.cat.n_obj, pu2.cat.n_mor) == (2, 4)
    r = unitality_report(pu2)
    assert r["right"] and not r["left"]
    chaotic3 = monoid_opcat("pqr", fx.left_zero("pqr"), pseudo={x: x for x in "pqr"})
    c = chaotic3.cat
    assert all(len(c.hom[(x, y)]) == 1 for x in range(3) for y in range(3))


def test_pseudo_unit_violation_is_rejected():
    table = {("u", "u"): "u", ("v", "v"): "v", ("u", "v"): "u", ("v", "u"): "u"}
    with pytest.raises(StructuralError, match="u1"):
        monoid_opcat(["u", "v"], table, pseudo={"u": "u", "v": "v"})


@pytest.mark.parametrize("name", ["point", "D(A2)", "T(A2)", "M2", "PU2"])
def test_nerve_identities_hold_for_valid_opcats(name):
    assert all(nerve_diagnostic(fx.corpus(include_blob=False)[name]).values())
