from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from opbar import fixtures as fx
from opbar.blob import BlobModel, skein_dimension, standard_models
from opbar.colored import (ColoredSystem, ForestBar, LeveledBar, blob_complex, compare_leveled, linear_extensions,
                           perm_sign, summary_figure)
from opbar.report import StructuralError

MODELS = standard_models()
SMALL = sorted(fx.small_blob_models())


@given(st.permutations(range(5)), st.permutations(range(5)))
def test_perm_sign_is_multiplicative(p, q):
    base = list(range(5))
    assert perm_sign(base, p) * perm_sign(p, q) == perm_sign(base, q)


def test_perm_sign_of_transposition():
    assert perm_sign([0, 1, 2], [1, 0, 2]) == -1
    assert perm_sign([0, 1, 2], [1, 2, 0]) == 1


def test_incomparable_forks_have_opposite_signs():
    col = ((1, 2), ("v", "v"))
    twig = ("R", col, ())
    tree = ForestBar.annotate(("S", None, (("F", col, (twig,)), ("F", col, (twig,)))))
    orders = linear_extensions(tree)
    assert len(orders) == 2
    assert perm_sign(orders[0], orders[0]) == -perm_sign(orders[0], orders[1])


def test_nested_forks_have_one_level_order():
    c1, c2 = ((1, 4), ("v", "v")), ((2, 3), ("v", "v"))
    tree = ForestBar.annotate(("S", None, (("F", c1, (("F", c2, ()),)),)))
    assert linear_extensions(tree) == [[1, 2]]


@pytest.mark.parametrize("name", SMALL)
def test_colored_operad_validates(name):
    assert ColoredSystem(MODELS[name]).validate().ok


def test_identity_operations_have_rank_one():
    cs = ColoredSystem(MODELS["commuting-xy-N3"])
    assert all(cs.op_space((c,), c).dim == 1 for c in cs.colors)


@pytest.mark.parametrize("name", SMALL)
def test_forest_complexes_square_to_zero(name):
    cs = ColoredSystem(MODELS[name])
    for L, R in (("M", "F"), ("M", "I")):
        assert ForestBar(cs, L, R, top=2).complex.check_d2().ok
    assert LeveledBar(cs, 3).complex.check_d2().ok


@pytest.mark.parametrize("name", ["loop-x2-N3", "commuting-xy-N3"])
def test_fork_orders_differ_by_diagonal_signs(name):
    cs = ColoredSystem(MODELS[name])
    pre = ForestBar(cs, "M", "F", top=2)
    bfs = ForestBar(cs, "M", "F", top=2, order="bfs")
    s = pre.order_signs("bfs")
    for n in range(1, 3):
        assert bfs.complex.d[n] == s[n - 1] @ pre.complex.d[n] @ s[n]
    assert {k: bfs.complex.homology(k) for k in range(2)} == {k: pre.complex.homology(k) for k in range(2)}


def test_bad_forest_arguments():
    cs = ColoredSystem(MODELS["loop-x2-N2"])
    with pytest.raises(StructuralError):
        ForestBar(cs, "X", "F")
    with pytest.raises(StructuralError, match="output color"):
        ForestBar(cs, "F", "F")
    with pytest.raises(StructuralError, match="unknown order"):
        ForestBar(cs, "M", "F", order="random").fork_order(("S", None, (), 0))


@pytest.mark.parametrize("name", SMALL)
def test_blob_homology_in_degree_zero_is_skein(name):
    m = MODELS[name]
    assert blob_complex(ColoredSystem(m), 2).homology(0, augmented=False) == skein_dimension(m)


def test_without_relations_blob_homology_is_all_fields():
    m = BlobModel(3, ("v",), (("x", "v", "v"), ("y", "v", "v")), (), ("v", "v"))
    bx = blob_complex(ColoredSystem(m), 2)
    assert bx.dims[1:] == [0, 0]
    assert bx.homology(0, augmented=False) == 8


@pytest.mark.parametrize("name", ["loop-x2-N2", "two-vertex-fe-N3", "commuting-xy-N3"])
def test_summary_figure_commutes(name):
    fig = summary_figure(ColoredSystem(MODELS[name]), 3)
    assert all(fig.values()), fig


@pytest.mark.parametrize("name", SMALL)
def test_leveled_trees_match_bar(name):
    assert compare_leveled(ColoredSystem(MODELS[name]), 3).ok
