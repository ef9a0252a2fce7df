# %% [markdown]
# Scoring plural links
#
# Two sentences, one gold annotation and two systems. "their" refers to
# Mary and John, "they" refers to Mary, John and Jane. System B picks
# slightly wrong antecedents, system A picks the wrong ones entirely.

# %%
from pluralcoref import (ImportanceConfig, document_from_dict, evaluate_document,
                         lea_extended_documents, lea_standard, span_chains)

tokens = ("Mary and John were on their way to visit Alex when Mary saw "
          "Jane on their way and realized they all wore the same shirt .").split()
starts = [0, 2, 9, 11, 13, 15, 19]   # Mary John Alex Mary Jane their they


def annotate(chains, splits, side):
    return document_from_dict({
        "doc_id": "example",
        "tokens": tokens,
        "mentions": [{"id": i, "start": s, "end": s + 1} for i, s in enumerate(starts)],
        "chains": [{"id": i, "mentions": c} for i, c in enumerate(chains)],
        "split_relations": [{"anaphor": a, "antecedent_chains": c} for a, c in splits],
    }, side)


chains = [[0, 3], [1], [2], [4], [5], [6]]
gold = annotate(chains, [(5, [0, 1]), (6, [0, 1, 3])], "gold")
sys_b = annotate(chains, [(5, [0, 3]), (6, [0, 1])], "system")
sys_a = annotate([[0, 3], [1], [2, 6], [4], [5]], [(5, [2, 3])], "system")

# %% [markdown]
# Standard LEA only sees the span chains, so it cannot tell B from a
# system that predicted no plural links at all.

# %%
g_chains = list(span_chains(gold).values())
for name, sys in (("A", sys_a), ("B", sys_b)):
    std = lea_standard(g_chains, list(span_chains(sys).values()))
    print(name, "standard LEA  R=%.3f P=%.3f" % (std.recall, std.precision))

# %% [markdown]
# The plural-aware version gives partial credit to B.

# %%
for imp in (1, 10):
    for name, sys in (("A", sys_a), ("B", sys_b)):
        s = lea_extended_documents(gold, sys, ImportanceConfig(imp))
        print(f"imp={imp:<2} {name} extended LEA  R={s.recall:.3f} P={s.precision:.3f} F1={s.f1:.3f}")

# %%
for name, sys in (("A", sys_a), ("B", sys_b)):
    r = evaluate_document(gold, sys)
    print(name, "recognition F1 %.2f  lenient F1 %.2f  strict F1 %.2f"
          % (r.recognition.f1, r.lenient.f1, r.strict.f1))
