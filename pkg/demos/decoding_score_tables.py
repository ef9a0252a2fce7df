# %% [markdown]
# From a score table to a system annotation
#
# A toy table with five candidate spans. Two people get mentioned, a
# pronoun refers to both of them, and one of them is mentioned again.

# %%
import numpy as np

from pluralcoref import Candidate, DecoderConfig, ScoreTable, decode, replay, to_document
from pluralcoref.decoder import sigmoid

rng = np.random.default_rng(0)
# start, end, s_m, s_no, s_nr, s_dn
rows = [(0, 1, 2.0, -3, -3, 1.0),    # Kim
        (3, 4, 1.8, -3, -3, 1.0),    # Lee
        (5, 6, 0.2, -1, -1, 0.0),    # "the"  -- low mention score
        (6, 7, 1.5, -3, -3, 0.5),    # they
        (9, 10, 1.7, -3, -3, -2.0)]  # Kim again
cands = tuple(Candidate(*r) for r in rows)

pairs = {(3, 0): (-4.0, 2.5), (3, 1): (-4.0, 2.0),
         (4, 0): (3.0, -5.0), (4, 1): (-1.0, -5.0), (4, 3): (-2.0, -5.0)}
table = ScoreTable("toy", 12, cands, pairs)

# %%
cfg = DecoderConfig(mention_ratio=0.4)   # keeps floor(0.4 * 12) = 4 spans
result = decode(table, cfg)
for d in result.trace:
    print(d.mention, d.choice, round(d.score, 3))

# %%
print("chains:", [c.mentions for c in result.chains])
print("splits:", [(r.anaphor, r.antecedent_chains) for r in result.split_relations])
print("p(they -> Kim) = %.3f" % sigmoid(2.5 + 0.5 + 2.0))

# %% [markdown]
# Decoding is a pure function of the table, so the trace replays exactly.

# %%
assert replay(table, result.trace, cfg) == result
doc = to_document(table, result)
print(doc.doc_id, len(doc.mentions), "mentions")

# %% noisy copies of the table never break the output contract
for _ in range(200):
    noisy = ScoreTable("toy", 12, cands,
                       {k: tuple(v + rng.normal(0, 1.5, 2)) for k, v in pairs.items()})
    r = decode(noisy, cfg)
    assert all(2 <= len(x.antecedent_chains) <= 5 for x in r.split_relations)
