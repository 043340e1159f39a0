from itertools import product

from hypothesis import given, strategies as st

from opbar import fixtures as fx
from opbar.blob import BlobSystem, standard_models
from opbar.opcat import OperadicFunctor, point
from opbar.operad import (SetOperad, check_pseudo_unital, check_unital_cat, check_unital_fiberwise,
                          find_set_units, monoid_operad, pseudo_from_fiberwise, restrict, scale_structure,
                          search_units, validate_operad)
from opbar.report import StructuralError


def identity_functor(o):
    return OperadicFunctor(o, o, range(o.cat.n_obj), range(o.cat.n_mor))


def test_m2_operad_two_sided():
    p = monoid_operad(point(), [0, 1], fx.m2_table())
    assert validate_operad(p).ok
    r = check_unital_cat(p, {0: 0})
    assert r["left"] and r["right"]
    assert search_units(p) == ("cat", {0: 0})


def test_pu2_right_only_but_pseudo_unital():
    p = monoid_operad(point(), ["u", "v"], fx.left_zero("uv"))
    r = check_unital_cat(p, {0: 0})
    assert r["right"] and not r["left"]
    assert find_set_units(p) == {"left": False, "right": True, "two_sided": False}
    ps = check_pseudo_unital(p, {(0, 0): 0, (0, 1): 1})
    assert ps["left"] and ps["right"]
    assert search_units(p) == ("pseudo", {(0, 0): 0, (0, 1): 1})


def test_empty_operad():
    p = SetOperad(point(), [[]], {0: {}})
    assert validate_operad(p).ok
    assert not find_set_units(p)["two_sided"]
    r = check_pseudo_unital(p, {})
    assert r["left"] and r["right"]


def test_perturbed_product_is_witnessed():
    p = monoid_operad(point(), [0, 1], fx.m2_table())
    bad = SetOperad(p.base, p.labels, {0: {**p.gamma[0], (0, 1): 0}})
    rep = validate_operad(bad)
    assert not rep.ok and rep.witnesses


def test_lambda_units():
    lam = fx.dual_numbers()
    assert validate_operad(lam).ok
    r = check_unital_fiberwise(lam, {0: {0: 1}})
    assert r["left"] and r["right"] and r["consistent"]


def test_fbar_fiberwise_unital_and_restriction():
    s = BlobSystem(standard_models()["loop-x2-N3"])
    r = check_unital_fiberwise(s.Fbar, s.fbar_units)
    assert r["left"] and r["right"]
    assert validate_operad(s.F).ok
    assert s.F.dims == tuple(s.Fbar.dims[s.iota.obj_map[x]] for x in range(s.BlobC.cat.n_obj))


def test_blob_partial_operad_pseudo_unital():
    s = BlobSystem(standard_models()["two-vertex-fe-N3"])
    assert s.S.partial
    assert validate_operad(s.S).ok
    r = check_pseudo_unital(s.S, s.S_units)
    assert r["left"] and r["right"]


def test_restrict_along_identity():
    p = fx.dual_numbers()
    q = restrict(p, identity_functor(p.base))
    assert q.dims == p.dims and q.gamma == p.gamma


def test_rescaled_product_stays_associative_but_loses_its_unit():
    p = scale_structure(fx.dual_numbers(), 0, 2)
    assert validate_operad(p).ok
    r = check_unital_fiberwise(p, {0: {0: 1}})
    assert not (r["left"] or r["right"])


def test_bad_unit_index():
    p = monoid_operad(point(), [0, 1], fx.m2_table())
    try:
        check_unital_cat(p, {5: 0})
    except StructuralError:
        pass
    else:
        raise AssertionError("expected a structural error")


tables = st.integers(1, 3).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n - 1), min_size=n * n, max_size=n * n)))


@given(tables)
def test_validator_agrees_with_brute_force_associativity(data):
    n, flat = data
    table = {(a, b): flat[a * n + b] for a in range(n) for b in range(n)}
    assoc = all(table[(table[(a, b)], c)] == table[(a, table[(b, c)])] for a, b, c in product(range(n), repeat=3))
    p = monoid_operad(point(), list(range(n)), table)
    assert validate_operad(p).ok == assoc


@given(tables)
def test_total_partial_operad_behaves_like_set_operad(data):
    n, flat = data
    table = {(a, b): flat[a * n + b] for a in range(n) for b in range(n)}
    p = monoid_operad(point(), list(range(n)), table)
    q = SetOperad(p.base, p.labels, p.gamma, partial=True)
    assert validate_operad(p).ok == validate_operad(q).ok
    for e in range(n):
        assert check_unital_cat(p, {0: e})["left"] == check_unital_cat(q, {0: e})["left"]
        assert check_unital_cat(p, {0: e})["right"] == check_unital_cat(q, {0: e})["right"]


@given(tables)
def test_two_sided_fiberwise_implies_pseudo(data):
    n, flat = data
    table = {(a, b): flat[a * n + b] for a in range(n) for b in range(n)}
    p = monoid_operad(point(), list(range(n)), table)
    for e in range(n):
        fw = check_unital_fiberwise(p, {0: e})
        if fw["left"] and fw["right"]:
            ps = check_pseudo_unital(p, pseudo_from_fiberwise(p, {0: e}))
            assert ps["left"] and ps["right"]
