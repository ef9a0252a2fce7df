"""Heuristic split-antecedent baselines layered on an existing system output.

Anaphors are discourse-new mentions whose text is a plural pronoun.
Antecedents are either the x most recent singular clusters or a random
choice of two to five of them.

Randomness comes from Python's Mersenne Twister (``random.Random``),
seeded per document with the first 8 bytes of
``sha256(f"{seed}:{doc_id}")`` read as a big-endian integer, so results do
not depend on the order in which documents are processed.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .model import DocumentAnnotation, SplitRelation

DEFAULT_PRONOUNS = frozenset({"they", "their", "them", "we", "us", "our", "both"})
MIN_ANTECEDENTS = 2
MAX_ANTECEDENTS = 5


@dataclass(frozen=True)
class BaselineConfig:
    kind: str = "recent"
    x: int = 2
    seed: int = 0
    pronoun_list: frozenset = DEFAULT_PRONOUNS

    def __post_init__(self):
        if self.kind not in ("recent", "random"):
            raise ValueError(f"unknown baseline kind {self.kind!r}")
        if self.x < 1:
            raise ValueError("x must be >= 1")


def discourse_new(doc: DocumentAnnotation) -> set[int]:
    """Individual mentions that open a chain."""
    out = set()
    for c in doc.chains:
        individual = [m for m in c.mentions if not doc.mention_by_id[m].is_plural]
        if individual:
            out.add(min(individual, key=lambda m: (doc.span_of(m).start,
                                                   doc.span_of(m).end, m)))
    return out


def mention_text(doc: DocumentAnnotation, mention_id: int) -> str:
    span = doc.span_of(mention_id)
    return " ".join(doc.tokens[span.start:span.end])


def recognize_heuristic(doc: DocumentAnnotation,
                        cfg: BaselineConfig = BaselineConfig()) -> set[int]:
    return {m for m in discourse_new(doc)
            if mention_text(doc, m).lower() in cfg.pronoun_list}


def candidate_clusters(doc: DocumentAnnotation, anaphor: int) -> list[tuple[int, int]]:
    """(distance, chain id) for singular clusters with a mention before the anaphor.

    Distance runs from the end of the cluster's closest preceding mention
    to the anaphor start. Chains of existing split anaphors count as plural.
    """
    start = doc.span_of(anaphor).start
    own = doc.chain_of.get(anaphor)
    plural_chains = {doc.chain_of.get(r.anaphor) for r in doc.split_relations}
    out = []
    for c in doc.chains:
        if c.id == own or c.id in plural_chains:
            continue
        if any(doc.mention_by_id[m].is_plural for m in c.mentions):
            continue
        ends = [doc.span_of(m).end for m in c.mentions if doc.span_of(m).end <= start]
        if ends:
            out.append((start - max(ends), c.id))
    out.sort()
    return out


def recent_x(doc: DocumentAnnotation, anaphors: Iterable[int], x: int
             ) -> list[SplitRelation]:
    relations = []
    limit = min(x, MAX_ANTECEDENTS)
    for a in sorted(anaphors, key=lambda m: (doc.span_of(m).start, m)):
        chosen = [cid for _, cid in candidate_clusters(doc, a)[:limit]]
        if len(chosen) >= MIN_ANTECEDENTS:
            relations.append(SplitRelation(a, tuple(sorted(chosen))))
    return relations


def document_rng(seed: int, doc_id: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{doc_id}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def random_antecedents(doc: DocumentAnnotation, anaphors: Iterable[int], seed: int,
                       rng: Optional[random.Random] = None) -> list[SplitRelation]:
    rng = rng or document_rng(seed, doc.doc_id)
    relations = []
    for a in sorted(anaphors, key=lambda m: (doc.span_of(m).start, m)):
        pool = sorted(cid for _, cid in candidate_clusters(doc, a))
        if len(pool) < MIN_ANTECEDENTS:
            continue
        k = min(rng.randint(MIN_ANTECEDENTS, MAX_ANTECEDENTS), len(pool))
        relations.append(SplitRelation(a, tuple(sorted(rng.sample(pool, k)))))
    return relations


def apply_baseline(doc: DocumentAnnotation, cfg: BaselineConfig) -> DocumentAnnotation:
    """Replace the document's split relations with baseline predictions."""
    base = replace(doc, split_relations=())
    anaphors = recognize_heuristic(base, cfg)
    if cfg.kind == "recent":
        relations = recent_x(base, anaphors, cfg.x)
    else:
        relations = random_antecedents(base, anaphors, cfg.seed)
    return replace(base, split_relations=tuple(relations)).validate()
