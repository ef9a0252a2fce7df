import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from pluralcoref.model import (ParseError, ValidationError, document_to_dict,
                               dumps_document, materialize_plurals,
                               parse_document, parse_documents)

from synth import example1_gold, random_document, rng


def record(**overrides):
    base = {"doc_id": "d", "tokens": ["It"], "sentences": [[0, 1]],
            "mentions": [{"id": 0, "start": 0, "end": 1}],
            "chains": [{"id": 0, "mentions": [0]}],
            "non_referring": [], "split_relations": []}
    base.update(overrides)
    return json.dumps(base)


def test_minimal_record():
    doc = parse_document(record())
    assert len(doc.chains) == 1
    assert doc.chains[0].mentions == (0,)
    assert doc.mention_by_id[0].size == 1


def test_split_relation_needs_two_antecedents():
    raw = record(tokens=list("abcdef"),
                 mentions=[{"id": i, "start": i, "end": i + 1} for i in range(6)],
                 chains=[{"id": 0, "mentions": [0]}],
                 split_relations=[{"anaphor": 5, "antecedent_chains": [0]}])
    with pytest.raises(ValidationError, match="anaphor 5"):
        parse_document(raw)


def test_three_documents():
    data = "\n".join(record(doc_id=f"doc{i}") for i in range(3)).encode()
    docs = parse_documents(data)
    assert [d.doc_id for d in docs] == ["doc0", "doc1", "doc2"]


def test_parse_error_reports_line():
    data = (record() + "\n{not json\n").encode()
    with pytest.raises(ParseError) as info:
        parse_documents(data)
    assert info.value.line == 2
    assert "line 2" in str(info.value)


@pytest.mark.parametrize("overrides, needle", [
    ({"mentions": [{"id": 0, "start": 0, "end": 2}]}, "exceeds"),
    ({"chains": [{"id": 0, "mentions": [7]}]}, "unknown mention 7"),
    ({"chains": [{"id": 0, "mentions": []}]}, "chain 0 is empty"),
    ({"non_referring": [0]}, "non-referring mention 0"),
    ({"mentions": [{"id": 0, "start": 0, "end": 1}, {"id": 0, "start": 0, "end": 1}]},
     "duplicate mention id 0"),
])
def test_validation_errors_name_the_id(overrides, needle):
    with pytest.raises(ValidationError, match=needle):
        parse_document(record(**overrides))


def test_unknown_fields_ignored_and_order_irrelevant():
    rec = json.loads(record())
    rec["extra"] = {"x": 1}
    shuffled = json.dumps(dict(reversed(list(rec.items()))))
    assert parse_document(shuffled) == parse_document(record())


def test_duplicate_spans_allowed():
    doc = parse_document(record(
        mentions=[{"id": 0, "start": 0, "end": 1}, {"id": 1, "start": 0, "end": 1}],
        chains=[{"id": 0, "mentions": [0]}, {"id": 1, "mentions": [1]}]))
    assert len(doc.mentions) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 12), st.integers(0, 2))
def test_round_trip(seed, n, splits):
    doc = random_document(rng(seed), "r", n, splits)
    again = parse_documents(io.BytesIO((dumps_document(doc) + "\n").encode()))[0]
    assert again == doc
    mat = materialize_plurals(doc)
    assert parse_document(dumps_document(mat)) == mat


def test_materialize_example():
    gold = example1_gold()
    mat = materialize_plurals(gold)
    their_chain = mat.chain_by_id[mat.chain_of[5]]
    assert their_chain.mentions[0] == 5
    plural = mat.mention_by_id[their_chain.mentions[1]]
    # representatives: first Mary (0) and John (1)
    assert plural.elements == frozenset({0, 1})
    they_chain = mat.chain_by_id[mat.chain_of[6]]
    assert mat.mention_by_id[they_chain.mentions[1]].elements == frozenset({0, 1, 4})


def test_materialize_without_relations_is_identity():
    doc = parse_document(record())
    assert materialize_plurals(doc) is doc


def test_materialize_opens_chain_for_unchained_anaphor():
    doc = parse_document(record(
        tokens=list("abc"),
        mentions=[{"id": i, "start": i, "end": i + 1} for i in range(3)],
        chains=[{"id": 0, "mentions": [0]}, {"id": 1, "mentions": [1]}],
        split_relations=[{"anaphor": 2, "antecedent_chains": [0, 1]}]))
    mat = materialize_plurals(doc)
    chain = mat.chain_by_id[mat.chain_of[2]]
    assert chain.mentions[0] == 2 and mat.mention_by_id[chain.mentions[1]].size == 2


def test_shared_antecedents_give_equal_plurals():
    doc = parse_document(record(
        tokens=list("abcd"),
        mentions=[{"id": i, "start": i, "end": i + 1} for i in range(4)],
        chains=[{"id": i, "mentions": [i]} for i in range(4)],
        split_relations=[{"anaphor": 2, "antecedent_chains": [0, 1]},
                         {"anaphor": 3, "antecedent_chains": [0, 1]}]))
    mat = materialize_plurals(doc)
    plurals = {}
    for c in mat.chains:
        for m in c.mentions:
            if mat.mention_by_id[m].is_plural:
                plurals[c.mentions[0]] = mat.mention_by_id[m].elements
    assert plurals == {2: frozenset({0, 1}), 3: frozenset({0, 1})}
    assert mat.chain_of[2] != mat.chain_of[3]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 12), st.integers(0, 3))
def test_materialize_properties(seed, n, splits):
    doc = random_document(rng(seed), "r", n, splits)
    mat = materialize_plurals(doc)
    assert materialize_plurals(mat) == mat
    added = [m for m in mat.mentions if m.is_plural]
    assert len(added) == len(doc.split_relations)
    for c in doc.chains:
        new = [m for m in mat.chain_by_id[c.id].mentions if not mat.mention_by_id[m].is_plural]
        assert tuple(new) == c.mentions
    for rel in doc.split_relations:
        chain = mat.chain_by_id[mat.chain_of[rel.anaphor]]
        nxt = chain.mentions[chain.mentions.index(rel.anaphor) + 1]
        assert mat.mention_by_id[nxt].size == len(rel.antecedent_chains)


def test_materialize_rejects_plural_only_antecedent():
    doc = materialize_plurals(parse_document(record(
        tokens=list("abcd"),
        mentions=[{"id": i, "start": i, "end": i + 1} for i in range(4)],
        chains=[{"id": i, "mentions": [i]} for i in range(3)],
        split_relations=[{"anaphor": 2, "antecedent_chains": [0, 1]}])))
    rec = document_to_dict(doc)
    # a chain holding only the plural mention cannot supply a representative
    plural_id = next(m.id for m in doc.mentions if m.is_plural)
    rec["chains"] = [c for c in rec["chains"] if c["id"] != 2]
    rec["chains"].append({"id": 5, "mentions": [plural_id]})
    rec["chains"].append({"id": 6, "mentions": [2]})
    rec["split_relations"] = [{"anaphor": 3, "antecedent_chains": [5, 0]}]
    rec["chains"].append({"id": 7, "mentions": [3]})
    from pluralcoref.model import document_from_dict
    bad = document_from_dict(rec)
    with pytest.raises(ValidationError, match="no individual mentions"):
        materialize_plurals(bad)
