import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pluralcoref.assignment import align_chains, max_weight_matching, phi4

from oracles import best_matching_total, phi4_counter


def test_phi4_examples():
    assert phi4({"a", "b"}, {"a", "b"}) == 1.0
    assert phi4({"a", "b"}, {"a", "c"}) == 0.5 == float(phi4_counter("ab", "ac"))
    assert phi4({"a"}, {"b"}) == 0.0


def test_phi4_rejects_empty():
    with pytest.raises(ValueError):
        phi4(set(), {"a"})


@given(st.sets(st.integers(0, 8), min_size=1), st.sets(st.integers(0, 8), min_size=1))
def test_phi4_symmetric_and_matches_counter(a, b):
    assert phi4(a, b) == phi4(b, a)
    assert phi4(a, b) == pytest.approx(float(phi4_counter(a, b)), abs=1e-15)


def test_identity_matrix():
    r = max_weight_matching([[1, 0], [0, 1]])
    assert set(r.pairs) == {(0, 0), (1, 1)}
    assert r.total_similarity == 2.0


def test_crossed_matrix():
    w = [[0.6, 0.5], [0.9, 0.1]]
    r = max_weight_matching(w)
    assert set(r.pairs) == {(0, 1), (1, 0)}
    assert r.total_similarity == best_matching_total(w)
    assert r.total_similarity == pytest.approx(1.4, abs=1e-15)


def test_single_row():
    r = max_weight_matching([[0.3, 0.8]])
    assert r.pairs == ((0, 1),)
    assert r.total_similarity == 0.8
    assert r.unmatched_system == frozenset({0})


def test_zero_pairs_are_not_reported():
    r = max_weight_matching([[0.0, 0.0], [0.0, 0.7]])
    assert r.pairs == ((1, 1),)
    assert r.unmatched_gold == frozenset({0})


def test_ties_prefer_low_indices():
    r = max_weight_matching([[1, 1], [1, 1]])
    assert r.pairs == ((0, 0), (1, 1))


@pytest.mark.parametrize("bad", [[[-0.1]], [[math.nan]], [[math.inf]]])
def test_rejects_bad_weights(bad):
    with pytest.raises(ValueError):
        max_weight_matching(bad)


def test_empty_matrices():
    assert max_weight_matching(np.zeros((0, 3))).pairs == ()
    assert max_weight_matching(np.zeros((2, 0))).total_similarity == 0.0


def test_matches_brute_force_small():
    gen = random.Random(11)
    for _ in range(200):
        g, s = gen.randint(1, 6), gen.randint(1, 6)
        w = [[gen.choice([0, 0, gen.random()]) for _ in range(s)] for _ in range(g)]
        r = max_weight_matching(w)
        assert r.total_similarity == best_matching_total(w)
        assert len({a for a, _ in r.pairs}) == len(r.pairs)
        assert len({b for _, b in r.pairs}) == len(r.pairs)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_permutation_invariance(seed):
    gen = np.random.default_rng(seed)
    w = gen.random((5, 4)) * (gen.random((5, 4)) < 0.7)
    rows, cols = gen.permutation(5), gen.permutation(4)
    base = max_weight_matching(w)
    perm = max_weight_matching(w[rows][:, cols], list(rows), list(cols))
    assert perm.total_similarity == pytest.approx(base.total_similarity, abs=1e-12)
    assert set(perm.pairs) == set(base.pairs)


def test_align_chains_uses_ids():
    gold = {10: {"a", "b"}, 11: {"c"}}
    sys = {7: {"a", "b", "c"}}
    r = align_chains(gold, sys)
    assert r.pairs == ((10, 7),)
    assert r.total_similarity == pytest.approx(0.8)
    assert r.to_dict()["pairs"] == [{"gold": 10, "system": 7, "phi4": 0.8}]
