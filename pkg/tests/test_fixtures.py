import random

import pytest
from hypothesis import given, settings, strategies as st

from opbar import fixtures as fx
from opbar.operad import SetOperad

CORPUS = fx.corpus()


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_round_trip_is_bit_stable(name, tmp_path):
    obj = CORPUS[name]
    text = fx.dumps(obj)
    assert fx.dumps(fx.loads(text)) == text
    path = tmp_path / "f.json"
    fx.save(obj, path)
    assert fx.fixture_hash(fx.load(path)) == fx.fixture_hash(obj)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_validates(name):
    assert fx.validate(CORPUS[name]).ok


def test_hash_equality_matches_serialization():
    by_hash = {}
    for obj in CORPUS.values():
        by_hash.setdefault(fx.fixture_hash(obj), set()).add(fx.dumps(obj))
    assert all(len(texts) == 1 for texts in by_hash.values())
    assert fx.fixture_hash(CORPUS["O_M2"]) != fx.fixture_hash(CORPUS["O_PU2"])


def test_mutation_leaves_original_unchanged():
    d = fx.to_json(CORPUS["O_M2"])
    snapshot = fx.dumps(CORPUS["O_M2"])
    new, what = fx.mutate(d, random.Random(1))
    assert fx.dumps(fx.from_json(d)) == snapshot
    assert new != d and what


@settings(max_examples=25)
@given(st.sampled_from(sorted(CORPUS)), st.integers(0, 10_000))
def test_mutants_are_caught_or_valid(name, seed):
    res = fx.mutate(fx.to_json(CORPUS[name]), random.Random(seed))
    if res is None:
        return
    rows = fx.mutation_suite({name: CORPUS[name]}, 1, seed=seed)
    row = rows[0]
    assert row["caught"] == bool(row["witness"])
    if not row["caught"]:
        assert row["equivalent"]


def test_semigroup_table_check_agrees_with_validator():
    m2 = CORPUS["O_M2"]
    assert fx.table_semigroup_check(m2) is True
    d = fx.to_json(m2)
    rng = random.Random(0)
    for _ in range(30):
        new, _ = fx.mutate(d, rng)
        mutant = fx.from_json(new)
        if isinstance(mutant, SetOperad):
            assert fx.table_semigroup_check(mutant) == fx.validate(mutant).ok


def test_dense_oracle_agrees_on_linear_fixtures():
    lam = fx.dual_numbers()
    assert fx.dense_associativity(lam) is True
    assert fx.dense_associativity(fx.classical_module(lam)) is True
    assert fx.dense_associativity(fx.a2()) is None
    d = fx.to_json(lam)
    rng = random.Random(3)
    for _ in range(20):
        new, _ = fx.mutate(d, rng)
        mutant = fx.from_json(new)
        assert fx.dense_associativity(mutant) == fx.validate(mutant).ok
