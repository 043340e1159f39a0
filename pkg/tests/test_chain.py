import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from opbar import _kernel
from opbar._rank_py import rank_int_rows as rank_py
from opbar.bar import BarComplex
from opbar import fixtures as fx
from opbar.chain import ChainComplex, ChainMap, mapping_cone, verify_contraction
from opbar.linalg import SMat, rank
from opbar.report import StructuralError


def two_term_identity():
    return ChainComplex([1, 1], {1: SMat.identity(1)})


def test_zero_complex():
    c = ChainComplex([0, 0, 0], {})
    assert c.check_d2().ok
    assert c.betti(augmented=False) == {0: 0, 1: 0}


def test_two_term_identity():
    c = two_term_identity()
    assert c.homology(0, augmented=False) == 0
    cx = ChainComplex([1, 1, 0], {1: SMat.identity(1)})
    assert cx.homology(1) == 0


def test_truncation_range_is_explicit():
    with pytest.raises(StructuralError, match="top"):
        two_term_identity().homology(1)


def test_d2_violation_detected():
    one = SMat.identity(1)
    c = ChainComplex([1, 1, 1], {1: one, 2: one})
    assert not c.check_d2().ok


def test_classical_bar_is_acyclic():
    cx = BarComplex(fx.classical_module(), 0, 4, {0: {0: 1}}).complex
    assert cx.betti() == {-1: 0, 0: 0, 1: 0, 2: 0, 3: 0}


def test_identity_and_zero_maps():
    c = ChainComplex([1, 1, 0], {1: SMat.identity(1)})
    d = ChainComplex([1, 0, 0], {})
    ident = ChainMap(d, d, {0: SMat.identity(1), 1: SMat(0, 0), 2: SMat(0, 0)})
    assert ident.validate().ok
    assert mapping_cone(ident).homology(0) == mapping_cone(ident).homology(1) == 0
    zero = ChainMap(d, d, {0: SMat(1, 1), 1: SMat(0, 0), 2: SMat(0, 0)})
    assert zero.validate().ok
    assert mapping_cone(zero).homology(0) != 0
    assert c.check_d2().ok


def test_contractions():
    bc = BarComplex(fx.classical_module(), 0, 4, {0: {0: 1}})
    assert verify_contraction(bc.complex, bc.contraction(), 3).ok
    z = ChainComplex([0, 0], {}, SMat(0, 0))
    assert verify_contraction(z, {-1: SMat(0, 0), 0: SMat(0, 0)}, 0).ok


def permutation_matrix(perm):
    return SMat.from_columns(len(perm), [{perm[i]: 1} for i in range(len(perm))])


@given(st.integers(0, 10_000), st.sampled_from([1, 2, 3]))
def test_betti_invariant_under_basis_permutation(seed, level):
    rng = random.Random(seed)
    cx = BarComplex(fx.classical_module(), 0, 4, {0: {0: 1}}).complex
    perm = list(range(cx.dims[level]))
    rng.shuffle(perm)
    p = permutation_matrix(perm)
    pinv = permutation_matrix([perm.index(i) for i in range(len(perm))])
    d = dict(cx.d)
    d[level] = d[level] @ pinv
    if level + 1 in d:
        d[level + 1] = p @ d[level + 1]
    moved = ChainComplex(cx.dims, d, cx.aug)
    assert moved.check_d2().ok
    assert moved.betti() == cx.betti()


matrices = st.integers(1, 6).flatmap(lambda c: st.lists(
    st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=1, max_size=6))


@given(matrices)
def test_rank_agrees_with_sympy(rows):
    m = SMat.from_dense([[Fraction(x, 2) for x in r] for r in rows])
    assert rank(m) == sympy.Matrix(rows).rank()


@given(matrices)
def test_kernels_agree(rows):
    sparse = [{j: x for j, x in enumerate(r) if x} for r in rows]
    assert _kernel.rank_int_rows(sparse) == rank_py(sparse)


def test_kernel_falls_back_on_overflow():
    big = [{0: 2 ** 70, 1: 3}, {0: 5, 1: 2 ** 65 + 1}]
    assert _kernel.rank_int_rows(big) == rank_py(big) == 2


def test_text_export_round_trip():
    cx = BarComplex(fx.classical_module(), 0, 2, {0: {0: 1}}).complex
    text = cx.to_text()
    back = ChainComplex.from_text(text)
    assert back.to_text() == text
    assert back.dims == cx.dims and back.labels == [[str(x) for x in ls] for ls in cx.labels]
    assert all(back.d[n] == cx.d[n] for n in (1, 2)) and back.aug == cx.aug
    with pytest.raises(StructuralError, match="unknown line"):
        ChainComplex.from_text("dims 1\nbogus 1\n")
