from opbar import fixtures as fx
from opbar.blob import BlobSystem, standard_models
from opbar.groth import (check_discrete_fibration, check_iso, fibration_to_operad, grothendieck,
                         roundtrip_fibration, roundtrip_operad)
from opbar.opcat import OperadicFunctor, decollage, point, validate_opcat
from opbar.operad import SetOperad


def test_m2_gives_its_monoid_category():
    c = fx.corpus(include_blob=False)
    g = grothendieck(c["O_M2"], ("cat", {0: 0}))
    m2 = c["M2"]
    assert (g.total.cat.n_obj, g.total.cat.n_mor) == (m2.cat.n_obj, m2.cat.n_mor)
    assert validate_opcat(g.total).ok
    assert check_discrete_fibration(g.proj).ok


def test_pu2_gives_chaotic_groupoid():
    g = grothendieck(fx.corpus(include_blob=False)["O_PU2"], ("pseudo", {(0, 0): 0, (0, 1): 1}))
    c = g.total.cat
    assert (c.n_obj, c.n_mor) == (2, 4)
    assert all(len(c.hom[(x, y)]) == 1 for x in range(2) for y in range(2))


def test_terminal_operad_gives_base_and_empty_gives_nothing():
    d = decollage(fx.a2())
    n = d.cat.n_obj
    one = SetOperad(d, [["*"]] * n, {f: {(0, 0): 0} for f in range(d.cat.n_mor)})
    g = grothendieck(one, ("cat", {k: 0 for k in d.terminals}))
    assert (g.total.cat.n_obj, g.total.cat.n_mor) == (d.cat.n_obj, d.cat.n_mor)
    assert check_iso(g.proj).ok
    empty = SetOperad(d, [[]] * n, {f: {} for f in range(d.cat.n_mor)})
    g = grothendieck(empty, ("pseudo", {}))
    assert g.total.cat.n_obj == 0 and g.total.cat.n_mor == 0


def test_identity_on_point_is_a_fibration():
    pt = point()
    assert check_discrete_fibration(OperadicFunctor(pt, pt, [0], [0])).ok


def test_round_trips():
    c = fx.corpus(include_blob=False)
    assert roundtrip_operad(c["O_M2"], ("cat", {0: 0})).ok
    assert roundtrip_operad(c["chaotic-3"], ("pseudo", {(0, i): i for i in range(3)})).ok
    g = grothendieck(c["O_PU2"], ("pseudo", {(0, 0): 0, (0, 1): 1}))
    assert roundtrip_fibration(g.proj).ok
    s, units = fibration_to_operad(g.proj)
    assert s.labels[0] and len(s.labels[0]) == 2


def test_blob_forgetful_functor_is_partial_fibration():
    s = BlobSystem(standard_models()["two-vertex-fe-N3"])
    assert check_discrete_fibration(s.forget, partial=True).ok
    _, comparison = s.grothendieck_comparison()
    assert check_iso(comparison).ok
    assert roundtrip_operad(s.S, ("pseudo", s.S_units)).ok


def test_components_biject_for_unital_fibration():
    g = grothendieck(fx.corpus(include_blob=False)["O_M2"], ("cat", {0: 0}))
    assert g.total.cat.n_components() == g.proj.tgt.cat.n_components()
