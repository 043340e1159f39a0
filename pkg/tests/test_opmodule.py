from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from opbar import fixtures as fx
from opbar.blob import BlobSystem, standard_models
from opbar.catmod import ModuleMorphism
from opbar.linalg import SMat
from opbar.opcat import OperadicFunctor, point
from opbar.operad import algebra_operad
from opbar.opmodule import (FreeModule, PModule, UnitalFreeModule, check_module_map, check_unital_pmodule,
                            extension_is_unique, operad_as_module, restrict_pmodule, validate_pmodule)
from opbar.report import StructuralError


def test_operad_as_module_and_zero_module():
    lam = fx.dual_numbers()
    assert validate_pmodule(operad_as_module(lam)).ok
    c = fx.classical_module(lam)
    assert validate_pmodule(PModule(lam, c.om, [0], {0: {}})).ok


def test_perturbed_action_is_witnessed():
    lam = fx.dual_numbers()
    c = fx.classical_module(lam)
    bad = PModule(lam, c.om, [1], {0: {(0, 0): {0: 1}, (0, 1): {0: 1}}})
    rep = validate_pmodule(bad)
    assert not rep.ok and rep.witnesses


def test_free_nonunital_dims():
    lam = fx.dual_numbers()
    om = fx.classical_module(lam).om
    f = FreeModule(lam, om, [1])
    assert f.module.dims == (3,)
    assert validate_pmodule(f.module).ok
    assert FreeModule(lam, om, [0]).module.dims == (0,)


def test_free_unital():
    lam = fx.dual_numbers()
    om = fx.classical_module(lam).om
    u = UnitalFreeModule(FreeModule(lam, om, [1]), {0: {0: 1}})
    assert u.module.dims == (2,)
    assert u.descends
    assert validate_pmodule(u.module).ok
    assert check_unital_pmodule(u.module, {0: {0: 1}}).ok
    assert u.structure_check(0) == {"dim": 2, "rhs_dim": 2, "iso": True}


def test_no_arrow_module():
    lam = fx.dual_numbers()
    u = UnitalFreeModule(FreeModule(lam, fx.no_arrow_module(lam), [1]), {0: {0: 1}})
    assert u.module.dims == (1,)
    with pytest.raises(StructuralError, match="not rigid"):
        u.structure_check(0)
    assert u.naive_compare(0) == {"dim": 1, "rhs_dim": 0}


def test_blob_free_module_at_the_empty_blob():
    s = BlobSystem(standard_models()["commuting-xy-N3"])
    e = [0] * s.MbarC.mod.n_obj
    e[s.upsilon] = 1
    u = UnitalFreeModule(FreeModule(s.Fbar, s.MbarC, e), s.fbar_units)
    assert u.structure_check(s.upsilon)["iso"]


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_universal_property(vec):
    lam = fx.dual_numbers()
    om = fx.classical_module(lam).om
    target = PModule(lam, om, [2], {0: {(0, 0): {0: 1}, (1, 0): {1: 1}, (0, 1): {1: 1}}})
    assert validate_pmodule(target).ok
    free = FreeModule(lam, om, [1])
    omega = {0: SMat.from_columns(2, [{i: Fraction(x) for i, x in enumerate(vec) if x}])}
    ext = free.extension(target, omega)
    assert check_module_map(free.module, target, ext).ok
    assert extension_is_unique(free, target, omega)


def test_graded_free_module_carries_signs():
    lam = algebra_operad(point(), ["1", "x"], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, degrees=[0, 1])
    om = fx.classical_module(lam).om
    f = FreeModule(lam, om, [1], [(1,)])
    assert validate_pmodule(f.module).ok
    assert any(y == -1 for table in f.module.nu.values() for v in table.values() for y in v.values())


def test_restrictions():
    s = BlobSystem(standard_models()["loop-x2-N3"])
    assert validate_pmodule(s.M).ok
    assert check_unital_pmodule(s.Mbar, s.fbar_units).ok
    j = s.iota_j
    assert s.M.dims == tuple(s.Mbar.dims[j.obj_map[x]] for x in range(s.MC.mod.n_obj))
    mm = fx.classical_module()
    o = mm.om.opcat
    ident = ModuleMorphism(OperadicFunctor(o, o, [0], [0]), mm.om, mm.om, [0], [0])
    r = restrict_pmodule(mm, ident)
    assert r.dims == mm.dims and r.nu == mm.nu
