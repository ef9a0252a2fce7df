# %% [markdown]
# Heuristic baselines for split antecedents
#
# The recent-x baseline links a plural pronoun to the x nearest preceding
# clusters. The random baseline draws 2 to 5 of them, seeded per document.

# %%
from pluralcoref import BaselineConfig, apply_baseline, document_from_dict, evaluate_document

tokens = "Ana called Ben . Cho waved . Later they met Dee and we talked".split()
spans = [(0, 1), (2, 3), (4, 5), (8, 9), (10, 11), (12, 13)]
doc = {"doc_id": "tiny", "tokens": tokens,
       "mentions": [{"id": i, "start": s, "end": e} for i, (s, e) in enumerate(spans)],
       "chains": [{"id": i, "mentions": [i]} for i in range(len(spans))]}
gold = document_from_dict(dict(doc, split_relations=[
    {"anaphor": 3, "antecedent_chains": [0, 1]}]))
system = document_from_dict(doc, "system")

# %%
for cfg in (BaselineConfig("recent", x=2), BaselineConfig("recent", x=3),
            BaselineConfig("random", seed=1), BaselineConfig("random", seed=2)):
    out = apply_baseline(system, cfg)
    rels = [(r.anaphor, r.antecedent_chains) for r in out.split_relations]
    s = evaluate_document(gold, out)
    print(f"{cfg.kind:<6} x={cfg.x} seed={cfg.seed}  {rels}  lenient F1={s.lenient.f1:.2f}")
