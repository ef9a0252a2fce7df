"""Synthetic documents for tests."""
import random

from pluralcoref.model import document_from_dict

EXAMPLE_TOKENS = ("Mary and John were on their way to visit Alex when Mary saw "
                  "Jane on their way and realized they all wore the same shirt .").split()
# Mary, John, Alex, Mary, Jane, their, they
EXAMPLE_STARTS = [0, 2, 9, 11, 13, 15, 19]
EXAMPLE_CHAINS = [[0, 3], [1], [2], [4], [5], [6]]


def _example(chains, relations, side):
    return document_from_dict({
        "doc_id": "example1",
        "tokens": EXAMPLE_TOKENS,
        "sentences": [[0, len(EXAMPLE_TOKENS)]],
        "mentions": [{"id": i, "start": s, "end": s + 1}
                     for i, s in enumerate(EXAMPLE_STARTS)],
        "chains": [{"id": i, "mentions": c} for i, c in enumerate(chains)],
        "non_referring": [],
        "split_relations": [{"anaphor": a, "antecedent_chains": c} for a, c in relations],
    }, side)


def example1_gold():
    # their -> {Mary, John}; they -> {Mary, John, Jane}
    return _example(EXAMPLE_CHAINS, [(5, [0, 1]), (6, [0, 1, 3])], "gold")


def example1_system_b():
    # their -> {Mary, Jane}; they -> {Mary, John}
    return _example(EXAMPLE_CHAINS, [(5, [0, 3]), (6, [0, 1])], "system")


def example1_system_a():
    # their -> {Alex, Jane}; they -> Alex
    chains = [[0, 3], [1], [2, 6], [4], [5]]
    return _example(chains, [(5, [2, 3])], "system")


def random_partition(rng, items, max_chains=None):
    items = list(items)
    rng.shuffle(items)
    k = rng.randint(1, max(1, len(items) if max_chains is None else max_chains))
    groups = [[] for _ in range(k)]
    for x in items:
        groups[rng.randrange(k)].append(x)
    return [sorted(g) for g in groups if g]


def random_chains(rng, n_mentions=12):
    """A random gold/system pair of span-keyed chains over <= n_mentions mentions."""
    n = rng.randint(1, n_mentions)
    spans = [(i, i + 1) for i in range(n)]
    gold = random_partition(rng, spans)
    pool = [s for s in spans if rng.random() < 0.8]
    pool += [(i, i + 2) for i in range(n) if rng.random() < 0.15]
    sys = random_partition(rng, pool) if pool else []
    return gold, sys


def random_document(rng, doc_id, n_mentions=12, splits=0, side="gold", chains=None):
    """Random annotation; ``splits`` anaphors each get 2-4 antecedent chains."""
    n = n_mentions
    tokens = [rng.choice(["a", "b", "c", "they", "it"]) for _ in range(n + 2)]
    mentions = [{"id": i, "start": i, "end": i + 1} for i in range(n)]
    if chains is None:
        chains = random_partition(rng, range(n))
    chain_recs = [{"id": i, "mentions": sorted(c)} for i, c in enumerate(chains)]
    relations = []
    firsts = sorted((min(c), i) for i, c in enumerate(chains))
    used = set()
    for first, cid in firsts[::-1]:
        if len(relations) >= splits:
            break
        earlier = [j for f, j in firsts if f < first and j != cid]
        if len(earlier) >= 2 and first not in used:
            k = rng.randint(2, min(4, len(earlier)))
            relations.append({"anaphor": first,
                              "antecedent_chains": sorted(rng.sample(earlier, k))})
            used.add(first)
    return document_from_dict({
        "doc_id": doc_id, "tokens": tokens, "sentences": [[0, len(tokens)]],
        "mentions": mentions, "chains": chain_recs, "non_referring": [],
        "split_relations": relations}, side)


def perturb(rng, doc, side="system"):
    """Copy of ``doc`` with one mention moved to another (or new) chain."""
    from pluralcoref.model import document_to_dict
    rec = document_to_dict(doc)
    chains = [list(c["mentions"]) for c in rec["chains"]]
    anaphors = {r["anaphor"] for r in rec["split_relations"]}
    movable = [m for c in chains for m in c if m not in anaphors]
    if movable:
        m = rng.choice(movable)
        for c in chains:
            if m in c:
                c.remove(m)
        target = rng.randrange(len(chains) + 1)
        if target == len(chains):
            chains.append([m])
        else:
            chains[target].append(m)
    keep = [i for i, c in enumerate(chains) if c]
    remap = {old: new for new, old in enumerate(keep)}
    rec["chains"] = [{"id": remap[i], "mentions": sorted(chains[i])} for i in keep]
    rels = []
    for r in rec["split_relations"]:
        ants = [remap[a] for a in r["antecedent_chains"] if a in remap]
        if len(set(ants)) >= 2:
            rels.append({"anaphor": r["anaphor"], "antecedent_chains": sorted(set(ants))})
    rec["split_relations"] = rels
    return document_from_dict(rec, side)


def rng(seed=0):
    return random.Random(seed)
