from itertools import product

import pytest

from opbar import fixtures as fx
from opbar.bar import BarComplex, estimate_bar_dims, h0_two_ways, induced_map
from opbar.blob import BlobSystem, standard_models
from opbar.catmod import ModuleMorphism
from opbar.linalg import SMat, rank
from opbar.opcat import OperadicFunctor
from opbar.opmodule import PModule
from opbar.report import StructuralError


def brute_force_chains(mm, m, n):
    """All (f_1, ..., f_n, alpha) with f_1: T_1 -> T_0, ..., alpha: M -> T_n by raw search over morphisms."""
    c, mod = mm.om.opcat.cat, mm.om.mod
    out = []
    for a in range(mod.n_arr):
        if mod.src[a] != m:
            continue
        for fs in product(range(c.n_mor), repeat=n):
            ok = (not fs or c.dom[fs[-1]] == mod.tgt[a]) and all(c.dom[fs[i]] == c.cod[fs[i + 1]]
                                                                 for i in range(n - 1))
            if ok:
                out.append((fs, a))
    return sorted(out)


def test_single_tower_in_degree_zero():
    bc = BarComplex(fx.classical_module(), 0, 0)
    assert len(bc.towers[0]) == 1
    assert bc.complex.dims == [2]


def test_classical_dims_and_normalization():
    bc = BarComplex(fx.classical_module(), 0, 3, {0: {0: 1}})
    assert bc.dims == [2, 4, 8, 16]
    assert bc.simplicial_identities().ok
    norm, _ = bc.normalized()
    assert norm.dims == [2, 2, 2, 2]
    assert norm.betti() == {-1: 0, 0: 0, 1: 0, 2: 0}


@pytest.mark.parametrize("name", ["loop-x2-N2", "two-vertex-fe-N2", "commuting-xy-N3"])
def test_tower_enumeration_against_brute_force(name):
    s = BlobSystem(standard_models()[name])
    for mm, m in ((s.M, s.whole_object), (s.Mbar, s.upsilon)):
        bc = BarComplex(mm, m, 2)
        for n in range(3):
            assert sorted((t.fs, t.alpha) for t in bc.towers[n]) == brute_force_chains(mm, m, n)
        assert bc.dims == estimate_bar_dims(mm, m, 2)


def test_identity_only_category_gives_identity_chains():
    bc = BarComplex(fx.classical_module(), 0, 3)
    c = bc.om.opcat.cat
    assert all(f == c.ident[0] for ts in bc.towers for t in ts for f in t.fs)


@pytest.mark.parametrize("name", sorted(fx.small_blob_models()))
def test_blob_bar_complexes(name):
    s = BlobSystem(standard_models()[name])
    for mm, m, eta in ((s.M, s.whole_object, s.f_units), (s.Mbar, s.upsilon, s.fbar_units)):
        bc = BarComplex(mm, m, 3, eta)
        assert bc.complex.check_d2().ok
        assert bc.simplicial_identities().ok
        norm, _ = bc.normalized()
        assert norm.check_d2().ok
        nondegenerate = sum(t.size for t in bc.towers[2]
                            if all(f != mm.om.opcat.cat.ident[mm.om.opcat.cat.dom[f]] for f in t.fs))
        assert norm.dims[2] == nondegenerate
        h = h0_two_ways(bc)
        assert h["coker_bar"] == h["coker_direct"]


def test_contraction_refused_without_p1p2():
    s = BlobSystem(standard_models()["loop-x2-N3"])
    bc = BarComplex(s.M, s.whole_object, 2, s.f_units)
    with pytest.raises(StructuralError, match="P1"):
        bc.contraction()


def test_induced_maps():
    mm = fx.classical_module()
    o = mm.om.opcat
    ident = ModuleMorphism(OperadicFunctor(o, o, [0], [0]), mm.om, mm.om, [0], [0])
    bc = BarComplex(mm, 0, 3)
    f = induced_map(ident, bc, bc)
    assert all(f.maps[n] == SMat.identity(bc.dims[n]) for n in range(4))
    s = BlobSystem(standard_models()["loop-x2-N2"])
    src = BarComplex(s.M, s.whole_object, 3, s.f_units)
    tgt = BarComplex(s.Mbar, s.upsilon, 3, s.fbar_units)
    g = induced_map(s.iota_j, src, tgt)
    assert g.validate().ok
    assert all(rank(g.maps[n]) == src.dims[n] for n in range(4))


def test_composite_of_induced_maps():
    mm = fx.classical_module()
    o = mm.om.opcat
    ident = ModuleMorphism(OperadicFunctor(o, o, [0], [0]), mm.om, mm.om, [0], [0])
    bc = BarComplex(mm, 0, 2)
    f = induced_map(ident, bc, bc)
    ff = induced_map(ident, bc, bc)
    assert all(f.maps[n] @ ff.maps[n] == SMat.identity(bc.dims[n]) for n in range(3))


def test_oversize_request_is_refused():
    with pytest.raises(StructuralError, match="above the limit"):
        BarComplex(fx.classical_module(), 0, 20)


def test_graded_input_is_refused():
    mm = fx.classical_module()
    graded = PModule(mm.operad, mm.om, mm.dims, mm.nu, [(1,) * d for d in mm.dims])
    with pytest.raises(StructuralError, match="ungraded"):
        BarComplex(graded, 0, 1)
