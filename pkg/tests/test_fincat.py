from hypothesis import given, strategies as st

from opbar import fixtures as fx
from opbar.fincat import (FinCategory, FinFunctor, adjoin_terminal, chaotic, poset_category, slice_category,
                          validate_category)


def terminal(label="x"):
    return FinCategory.build([label], [("1", 0, 0)], [0], lambda g, f: 0)


def test_terminal_and_a2_valid():
    assert validate_category(terminal()).ok
    assert validate_category(fx.a2()).ok


def test_redirected_composite_is_one_unit_law_violation():
    a2 = fx.a2()
    bad = a2.with_comp((2, 0), 1)
    rep = validate_category(bad)
    assert len(rep.witnesses) == 1
    assert rep.witnesses[0][0] == "right-identity"


def test_slices_of_a2():
    a2 = fx.a2()
    sb, proj = slice_category(a2, 1)
    assert (sb.n_obj, sb.n_mor) == (2, 3)
    assert proj.validate().ok
    sa, _ = slice_category(a2, 0)
    assert (sa.n_obj, sa.n_mor) == (1, 1)
    st_, _ = slice_category(terminal(), 0)
    assert (st_.n_obj, st_.n_mor) == (1, 1)


def test_adjoin_terminal_counts():
    a2 = fx.a2()
    t = adjoin_terminal(a2)
    assert (t.n_obj, t.n_mor) == (3, a2.n_mor + 3)
    assert validate_category(t).ok
    t1 = adjoin_terminal(terminal())
    assert (t1.n_obj, t1.n_mor) == (2, 3)
    empty = adjoin_terminal(FinCategory.build([], [], [], lambda g, f: 0))
    assert (empty.n_obj, empty.n_mor) == (1, 1)


def test_adjoined_object_is_terminal():
    t = adjoin_terminal(fx.a2())
    top = t.n_obj - 1
    assert t.is_local_terminal(top)
    assert all(len(t.hom.get((x, top), ())) == 1 for x in range(t.n_obj))


def test_identity_functor_valid():
    a2 = fx.a2()
    assert FinFunctor(a2, a2, list(range(a2.n_obj)), list(range(a2.n_mor))).validate().ok


def test_components():
    c = chaotic(["p", "q"])
    assert c.n_components() == 1
    two = FinCategory.build(["a", "b"], [("1a", 0, 0), ("1b", 1, 1)], [0, 1], lambda g, f: g)
    assert two.n_components() == 2


divisibility = st.integers(1, 12).map(lambda n: list(range(1, n + 1)))


@given(divisibility, st.data())
def test_slices_of_valid_posets_are_valid(elements, data):
    c = poset_category(elements, lambda a, b: b % a == 0)
    assert validate_category(c).ok
    s = data.draw(st.integers(0, c.n_obj - 1))
    sl, proj = slice_category(c, s)
    assert validate_category(sl).ok
    assert proj.validate().ok


@given(divisibility)
def test_adjoin_terminal_one_arrow_per_object(elements):
    c = adjoin_terminal(poset_category(elements, lambda a, b: b % a == 0))
    top = c.n_obj - 1
    assert all(len(c.hom.get((x, top), ())) == 1 for x in range(c.n_obj))
