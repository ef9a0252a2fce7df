"""LEA extended to plural mentions, with partial credit and importance weights.

Plural mentions are compared after normalization: every element of a
plural mention is rewritten as the representative (first mention) of a
gold chain. On the system side the element's chain is first mapped to a
gold chain through the CEAF-e alignment; elements of unaligned chains get
a key that matches nothing in gold.

Element keys are tuples:

``("rep", start, end)``
    a gold chain representative, identified by its span;
``("sys", chain_id)``
    a system chain without a gold counterpart;
``("self", start, end)``
    the referent of an ordinary individual mention (itself).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .assignment import align_chains
from .metrics import MetricScore, span_chains
from .model import DocumentAnnotation, ValidationError, materialize_plurals

MAX_PLURAL_SIZE = 16


@dataclass(frozen=True)
class NormalizedMention:
    """An individual mention (atom) or a set of entity representatives.

    Identity is ``key`` alone: atoms are keyed by span, sets by their
    sorted elements. ``referent_set`` is only meaningful for atoms.
    """

    key: tuple
    size: int = field(compare=False)
    span: Optional[tuple[int, int]] = field(default=None, compare=False)
    elements: Optional[frozenset] = field(default=None, compare=False)
    referent_set: Optional[frozenset] = field(default=None, compare=False)

    @property
    def is_atom(self) -> bool:
        return self.elements is None

    @classmethod
    def atom(cls, span, referent_set=None, size: int = 1):
        span = tuple(span)
        if referent_set is None:
            referent_set = frozenset([("self",) + span])
        return cls(("atom",) + span, size, span=span,
                   referent_set=frozenset(referent_set))

    @classmethod
    def set_of(cls, elements):
        elements = frozenset(elements)
        return cls(("set", tuple(sorted(elements))), len(elements),
                   elements=elements)

    def __repr__(self):
        if self.is_atom:
            return f"Atom{self.span}"
        return "SetOf{%s}" % ", ".join(map(str, sorted(self.elements)))


@dataclass(frozen=True)
class ImportanceConfig:
    imp_split: float = 1.0

    def __post_init__(self):
        if not self.imp_split > 0:
            raise ValueError("imp_split must be positive")


NormalizedChains = list[tuple[NormalizedMention, ...]]


def _dedup_chains(chains) -> NormalizedChains:
    seen = set()
    out = []
    for chain in chains:
        kept = []
        for m in chain:
            if m.key not in seen:
                seen.add(m.key)
                kept.append(m)
        if kept:
            out.append(tuple(kept))
    return out


def _rep_key(doc: DocumentAnnotation, chain_id: int) -> tuple:
    return ("rep",) + doc.span_of(doc.representative(chain_id)).as_tuple()


def gold_referents(gold: DocumentAnnotation) -> dict:
    """Gold anaphor span -> set of representative keys of its antecedents."""
    return {gold.span_of(r.anaphor).as_tuple():
            frozenset(_rep_key(gold, c) for c in r.antecedent_chains)
            for r in gold.split_relations}


def _normalize_side(doc: DocumentAnnotation, element_key, referents,
                    strict_formula: bool) -> NormalizedChains:
    chains = []
    for c in doc.chains:
        members = []
        for mid in c.mentions:
            m = doc.mention_by_id[mid]
            if m.is_plural:
                if len(m.elements) > MAX_PLURAL_SIZE:
                    raise ValueError(
                        f"plural mention {mid} has more than {MAX_PLURAL_SIZE} elements")
                members.append(NormalizedMention.set_of(
                    element_key(e) for e in m.elements))
            else:
                span = m.span.as_tuple()
                ref = referents.get(span)
                size = len(ref) if (strict_formula and ref) else 1
                members.append(NormalizedMention.atom(span, ref, size))
        chains.append(members)
    return _dedup_chains(chains)


def normalize(sys: DocumentAnnotation, gold: DocumentAnnotation,
              strict_formula: bool = False) -> tuple[NormalizedChains, NormalizedChains]:
    """Normalize both sides against gold; returns (gold chains, system chains).

    Inputs are materialized first if they still carry bare split relations.
    ``strict_formula`` sizes an anaphor atom by its referent set instead of 1.
    """
    gold = materialize_plurals(gold)
    sys = materialize_plurals(sys)
    referents = gold_referents(gold)
    alignment = align_chains(span_chains(gold), span_chains(sys))
    sys_to_gold = alignment.system_to_gold()

    def gold_element(mid):
        return _rep_key(gold, gold.chain_of[mid])

    def sys_element(mid):
        chain = sys.chain_of.get(mid)
        if chain is None:
            raise ValidationError(
                f"plural element {mid} belongs to no system chain")
        if chain in sys_to_gold:
            return _rep_key(gold, sys_to_gold[chain])
        return ("sys", chain)

    return (_normalize_side(gold, gold_element, referents, strict_formula),
            _normalize_side(sys, sys_element, referents, strict_formula))


def subset_list(m: NormalizedMention) -> list[NormalizedMention]:
    """All non-empty subsets of ``m``, largest first; an atom yields itself.

    Ties in size are ordered lexicographically by sorted element keys.
    """
    if m.is_atom:
        return [m]
    if len(m.elements) > MAX_PLURAL_SIZE:
        raise ValueError(f"plural mention larger than {MAX_PLURAL_SIZE}")
    items = sorted(m.elements)
    out = []
    for size in range(len(items), 0, -1):
        for combo in combinations(items, size):
            out.append(NormalizedMention(("set", combo), size,
                                         elements=frozenset(combo)))
    return out


class EntityIndex:
    """Lookup structure over one side's normalized chains."""

    def __init__(self, chains: NormalizedChains):
        self.chains = chains
        self.entity_of = {m.key: i for i, c in enumerate(chains) for m in c}

    def occurrence(self, s: NormalizedMention) -> Optional[tuple]:
        """Key of the mention on this side that ``s`` stands for, if any."""
        if s.is_atom:
            key = s.key
        elif len(s.elements) == 1:
            (x,) = s.elements
            if x[0] != "rep":
                return None
            key = ("atom",) + x[1:]
        else:
            key = s.key
        return key if key in self.entity_of else None


def _is_plain(m: NormalizedMention) -> bool:
    return m.is_atom and m.referent_set == frozenset([("self",) + m.span])


def _contained(m: NormalizedMention, g: NormalizedMention) -> bool:
    if not m.is_atom:
        return not g.is_atom and m.elements <= g.elements
    if not g.is_atom:
        return False
    return g.span == m.span or m.referent_set <= g.referent_set


def _subset_reward(m_i, m_j, index: EntityIndex) -> float:
    best = 0.0
    denom = m_i.size * m_j.size
    found_j = []
    for s_j in subset_list(m_j):
        o = index.occurrence(s_j)
        if o is not None:
            found_j.append((s_j.size if s_j is not m_j else m_j.size, o))
    if not found_j:
        return 0.0
    for s_i in subset_list(m_i):
        o_i = index.occurrence(s_i)
        if o_i is None:
            continue
        size_i = m_i.size if s_i is m_i else s_i.size
        ent = index.entity_of[o_i]
        for size_j, o_j in found_j:
            if o_j != o_i and index.entity_of[o_j] == ent:
                best = max(best, size_i * size_j / denom)
    return best


def _superset_reward(m_i, m_j, index: EntityIndex) -> float:
    if _is_plain(m_i) and _is_plain(m_j):
        # a plain atom is only contained in the mention with its own span,
        # which the subset tier has already tried
        return 0.0
    best = 0.0
    for chain in index.chains:
        cand_i = [g for g in chain if _contained(m_i, g)]
        if not cand_i:
            continue
        cand_j = [g for g in chain if _contained(m_j, g)]
        for g1 in cand_i:
            for g2 in cand_j:
                if g1.key != g2.key:
                    best = max(best, m_i.size * m_j.size / (g1.size * g2.size))
    return best


def link_reward(m_i: NormalizedMention, m_j: NormalizedMention,
                other: NormalizedChains | EntityIndex) -> float:
    """Credit for the link (m_i, m_j) judged against the other side's chains.

    Full or partial credit when subsets of the two mentions are coreferent
    there; otherwise credit when both are contained in coreferent mentions;
    otherwise 0.
    """
    index = other if isinstance(other, EntityIndex) else EntityIndex(other)
    reward = _subset_reward(m_i, m_j, index)
    if reward > 0:
        return reward
    return _superset_reward(m_i, m_j, index)


def is_plural_entity(chain: Sequence[NormalizedMention]) -> bool:
    return any(not m.is_atom for m in chain)


def importance_factors(chains: NormalizedChains, cfg: ImportanceConfig) -> list[float]:
    return [cfg.imp_split if is_plural_entity(c) else 1.0 for c in chains]


def importance(chains: NormalizedChains, cfg: ImportanceConfig = ImportanceConfig()
               ) -> list[float]:
    """Normalized importance of each entity; sums to 1 when non-empty."""
    raw = [f * len(c) for f, c in zip(importance_factors(chains, cfg), chains)]
    z = sum(raw)
    return [r / z for r in raw] if z else raw


def resolution_score(chain: Sequence[NormalizedMention], other: EntityIndex) -> float:
    if len(chain) == 1:
        return 1.0 if chain[0].key in other.entity_of else 0.0
    links = list(combinations(chain, 2))
    return sum(link_reward(a, b, other) for a, b in links) / len(links)


@dataclass(frozen=True)
class EntityRow:
    side: str
    index: int
    size: int
    plural: bool
    factor: float
    resolution: float


def _side_rows(key: NormalizedChains, response: NormalizedChains,
               cfg: ImportanceConfig, side: str) -> list[EntityRow]:
    index = EntityIndex(response)
    return [EntityRow(side, i, len(c), is_plural_entity(c), f,
                      resolution_score(c, index))
            for i, (c, f) in enumerate(zip(key, importance_factors(key, cfg)))]


def lea_entities(gold: NormalizedChains, sys: NormalizedChains,
                 cfg: ImportanceConfig = ImportanceConfig()) -> list[EntityRow]:
    """Per-entity breakdown: gold rows feed recall, system rows precision."""
    return _side_rows(gold, sys, cfg, "gold") + _side_rows(sys, gold, cfg, "system")


def lea_extended(gold: NormalizedChains, sys: NormalizedChains,
                 cfg: ImportanceConfig = ImportanceConfig()) -> MetricScore:
    """Extended LEA over normalized chains.

    Numerators and denominators carry the unnormalized weights
    ``factor * |e|``; the normalizing constant cancels within a document.
    """
    num = {"gold": 0.0, "system": 0.0}
    den = {"gold": 0.0, "system": 0.0}
    for row in lea_entities(gold, sys, cfg):
        w = row.factor * row.size
        num[row.side] += w * row.resolution
        den[row.side] += w
    return MetricScore(num["gold"], den["gold"], num["system"], den["system"])


def lea_extended_documents(gold: DocumentAnnotation, sys: DocumentAnnotation,
                           cfg: ImportanceConfig = ImportanceConfig(),
                           strict_formula: bool = False) -> MetricScore:
    g, s = normalize(sys, gold, strict_formula)
    return lea_extended(g, s, cfg)
