import math
from collections import Counter

import pytest

from pluralcoref.baselines import (BaselineConfig, apply_baseline, random_antecedents,
                                   recent_x, recognize_heuristic)
from pluralcoref.model import document_from_dict, dumps_document


def make_doc(tokens, spans, chains, doc_id="b"):
    return document_from_dict({
        "doc_id": doc_id, "tokens": tokens,
        "mentions": [{"id": i, "start": s, "end": e} for i, (s, e) in enumerate(spans)],
        "chains": [{"id": cid, "mentions": ms} for cid, ms in chains],
    }, "system")


def test_recognition_gates_on_discourse_new():
    tokens = "Bob met Ann . They left . they came back with the two companies".split()
    spans = [(0, 1), (2, 3), (4, 5), (7, 8), (11, 14)]
    doc = make_doc(tokens, spans, [(0, [0]), (1, [1]), (2, [2, 3]), (3, [4])])
    assert tokens[11:14] == ["the", "two", "companies"]
    assert recognize_heuristic(doc) == {2}


def test_custom_pronoun_list():
    tokens = "Bob met Ann . both left".split()
    doc = make_doc(tokens, [(0, 1), (2, 3), (4, 5)], [(0, [0]), (1, [1]), (2, [2])])
    assert recognize_heuristic(doc) == {2}
    assert recognize_heuristic(doc, BaselineConfig(pronoun_list=frozenset({"they"}))) == set()


def _distance_doc():
    # anaphor at token 50; candidate clusters end 3, 7, 9, 20, 31 and 40 tokens earlier
    ends = [47, 43, 41, 30, 19, 10]
    spans = [(e - 1, e) for e in ends] + [(50, 51)]
    chain_ids = [5, 2, 4, 0, 3, 1]
    chains = [(cid, [i]) for i, cid in enumerate(chain_ids)] + [(6, [6])]
    tokens = ["w"] * 50 + ["they"]
    return make_doc(tokens, spans, chains), chain_ids


def test_recent_five_of_six():
    doc, chain_ids = _distance_doc()
    rel = recent_x(doc, {6}, 5)
    assert rel[0].antecedent_chains == tuple(sorted(chain_ids[:5]))


def test_recent_two_of_three():
    tokens = "A B C they".split()
    doc = make_doc(tokens, [(0, 1), (1, 2), (2, 3), (3, 4)],
                   [(0, [0]), (1, [1]), (2, [2]), (3, [3])])
    assert recent_x(doc, {3}, 2)[0].antecedent_chains == (1, 2)


def test_recent_at_document_start():
    doc = make_doc(["they", "A"], [(0, 1), (1, 2)], [(0, [0]), (1, [1])])
    assert recent_x(doc, {0}, 3) == []


def test_random_is_deterministic_and_bounded():
    doc, _ = _distance_doc()
    first = random_antecedents(doc, {6}, seed=42)
    assert first == random_antecedents(doc, {6}, seed=42)
    for seed in range(200):
        for rel in random_antecedents(doc, {6}, seed):
            assert 2 <= len(rel.antecedent_chains) <= 5
            assert len(set(rel.antecedent_chains)) == len(rel.antecedent_chains)


def test_random_needs_two_candidates():
    doc = make_doc(["A", "they"], [(0, 1), (1, 2)], [(0, [0]), (1, [1])])
    assert random_antecedents(doc, {1}, 3) == []


def test_random_uniformity():
    n = 10
    tokens = ["w"] * n + ["they"]
    spans = [(i, i + 1) for i in range(n + 1)]
    doc = make_doc(tokens, spans, [(i, [i]) for i in range(n + 1)])
    draws = 10_000
    counts = Counter()
    sizes = Counter()
    for seed in range(draws):
        (rel,) = random_antecedents(doc, {n}, seed)
        counts.update(rel.antecedent_chains)
        sizes[len(rel.antecedent_chains)] += 1
    p = 3.5 / n  # expected antecedent count 3.5 spread over n candidates
    sd = math.sqrt(draws * p * (1 - p))
    for c in range(n):
        assert abs(counts[c] - draws * p) < 3 * sd
    assert set(sizes) == {2, 3, 4, 5}
    chi2 = sum((sizes[k] - draws / 4) ** 2 / (draws / 4) for k in (2, 3, 4, 5))
    assert chi2 < 16.27  # 3 dof, p = 0.001


def test_apply_baseline_outputs_validate():
    doc, _ = _distance_doc()
    for cfg in (BaselineConfig("recent", x=3), BaselineConfig("random", seed=7),
                BaselineConfig("recent", x=9)):
        out = apply_baseline(doc, cfg)
        assert [r.anaphor for r in out.split_relations] == [6]
        for r in out.split_relations:
            assert 2 <= len(r.antecedent_chains) <= 5
        assert dumps_document(apply_baseline(doc, cfg)) == dumps_document(out)


def test_config_validation():
    with pytest.raises(ValueError):
        BaselineConfig("recent", x=0)
    with pytest.raises(ValueError):
        BaselineConfig("learned")
