"""MUC, B-cubed, CEAF-e, CoNLL average, LEA and non-referring F1.

All metrics work on chains given as collections of hashable mention keys
(token spans for individual mentions). Scores keep their numerators and
denominators so corpus-level figures can be micro-averaged.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

from .assignment import align_chains
from .model import DocumentAnnotation


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


@dataclass(frozen=True)
class MetricScore:
    recall_num: float = 0.0
    recall_den: float = 0.0
    precision_num: float = 0.0
    precision_den: float = 0.0

    @property
    def recall(self) -> float:
        return _ratio(self.recall_num, self.recall_den)

    @property
    def precision(self) -> float:
        return _ratio(self.precision_num, self.precision_den)

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r > 0 else 0.0

    def __add__(self, other: "MetricScore") -> "MetricScore":
        return MetricScore(self.recall_num + other.recall_num,
                           self.recall_den + other.recall_den,
                           self.precision_num + other.precision_num,
                           self.precision_den + other.precision_den)

    def swapped(self) -> "MetricScore":
        return MetricScore(self.precision_num, self.precision_den,
                           self.recall_num, self.recall_den)

    def to_dict(self, counts: bool = True) -> dict:
        out = {"r": self.recall, "p": self.precision, "f1": self.f1}
        if counts:
            out.update(recall_num=self.recall_num, recall_den=self.recall_den,
                       precision_num=self.precision_num,
                       precision_den=self.precision_den)
        return out


def total(scores: Iterable[MetricScore]) -> MetricScore:
    out = MetricScore()
    for s in scores:
        out = out + s
    return out


def span_chains(doc: DocumentAnnotation) -> dict[int, frozenset]:
    """Span-keyed chains of individual mentions, keyed by chain id.

    Plural mentions are dropped; chains left empty are omitted. A span that
    already occurred in an earlier chain is skipped so chains stay disjoint.
    """
    seen: set = set()
    out = {}
    for c in doc.chains:
        keys = []
        for mid in c.mentions:
            m = doc.mention_by_id[mid]
            if m.is_plural:
                continue
            key = m.span.as_tuple()
            if key not in seen:
                seen.add(key)
                keys.append(key)
        if keys:
            out[c.id] = frozenset(keys)
    return out


def _membership(chains: Sequence[Collection]) -> dict:
    return {m: i for i, c in enumerate(chains) for m in c}


def _muc_side(key: Sequence[Collection], response: Sequence[Collection]):
    where = _membership(response)
    num = den = 0
    for k in key:
        if len(k) < 2:
            continue
        parts = set()
        missing = 0
        for m in k:
            if m in where:
                parts.add(where[m])
            else:
                missing += 1
        num += len(k) - (len(parts) + missing)
        den += len(k) - 1
    return num, den


def muc(gold: Sequence[Collection], sys: Sequence[Collection]) -> MetricScore:
    gold, sys = [set(c) for c in gold], [set(c) for c in sys]
    rn, rd = _muc_side(gold, sys)
    pn, pd = _muc_side(sys, gold)
    return MetricScore(rn, rd, pn, pd)


def _b3_side(key, response):
    where = _membership(response)
    num = 0.0
    den = 0
    for k in key:
        overlap = Counter(where[m] for m in k if m in where)
        num += sum(c * c for c in overlap.values()) / len(k)
        den += len(k)
    return num, den


def b_cubed(gold: Sequence[Collection], sys: Sequence[Collection]) -> MetricScore:
    gold, sys = [set(c) for c in gold], [set(c) for c in sys]
    rn, rd = _b3_side(gold, sys)
    pn, pd = _b3_side(sys, gold)
    return MetricScore(rn, rd, pn, pd)


def ceaf_phi4(gold: Sequence[Collection], sys: Sequence[Collection]) -> MetricScore:
    gold = [set(c) for c in gold if c]
    sys = [set(c) for c in sys if c]
    if not gold or not sys:
        return MetricScore(0.0, len(gold), 0.0, len(sys))
    result = align_chains(dict(enumerate(gold)), dict(enumerate(sys)))
    sim = result.total_similarity
    return MetricScore(sim, len(gold), sim, len(sys))


def conll_average(muc_score: MetricScore, b3: MetricScore,
                  ceafe: MetricScore) -> float:
    return (muc_score.f1 + b3.f1 + ceafe.f1) / 3


def _lea_side(key, response):
    where = _membership(response)
    num = 0.0
    den = 0
    for k in key:
        n = len(k)
        if n == 1:
            (m,) = k
            resolved = 1.0 if m in where else 0.0
        else:
            overlap = Counter(where[m] for m in k if m in where)
            correct = sum(c * (c - 1) // 2 for c in overlap.values())
            resolved = correct / (n * (n - 1) / 2)
        num += n * resolved
        den += n
    return num, den


def lea_standard(gold: Sequence[Collection], sys: Sequence[Collection]) -> MetricScore:
    """Link-based entity-aware metric with entity size as importance."""
    gold, sys = [set(c) for c in gold], [set(c) for c in sys]
    rn, rd = _lea_side(gold, sys)
    pn, pd = _lea_side(sys, gold)
    return MetricScore(rn, rd, pn, pd)


def non_referring_f1(gold: Collection, sys: Collection) -> MetricScore:
    gold, sys = set(gold), set(sys)
    hits = len(gold & sys)
    return MetricScore(hits, len(gold), hits, len(sys))


def non_referring_spans(doc: DocumentAnnotation) -> set:
    return {doc.span_of(m).as_tuple() for m in doc.non_referring
            if not doc.mention_by_id[m].is_plural}
