"""Cluster-ranking decoder over precomputed score tables.

Candidates are pruned by mention score, then processed left to right.
Each one is discarded (NO), marked non-referring (NR), opens a new
cluster (DN) or joins the best existing cluster. Afterwards every
discourse-new mention may receive split antecedents: clusters that
existed before it and whose sigmoid pair score clears a threshold.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Callable, Iterator, Optional, Sequence

from .model import (Chain, DocumentAnnotation, Mention, ParseError, Span,
                    SplitRelation, ValidationError, SYSTEM)

NO, NR, DN = "NO", "NR", "DN"
NEG_INF = -math.inf


@dataclass(frozen=True)
class Candidate:
    start: int
    end: int
    s_m: float
    s_no: float
    s_nr: float
    s_dn: float


@dataclass(frozen=True)
class ScoreTable:
    doc_id: str
    token_count: int
    candidates: tuple[Candidate, ...]
    # (later index, earlier index) -> (s_mc, s_pmc)
    pairwise: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        for c in self.candidates:
            values = (c.s_m, c.s_no, c.s_nr, c.s_dn)
            if not all(math.isfinite(v) for v in values):
                raise ValidationError(f"{self.doc_id}: non-finite candidate score")
            if not 0 <= c.start < c.end <= self.token_count:
                raise ValidationError(
                    f"{self.doc_id}: bad candidate span [{c.start}, {c.end})")
        n = len(self.candidates)
        for (i, j), scores in self.pairwise.items():
            if not (0 <= j < i < n):
                raise ValidationError(f"{self.doc_id}: bad pairwise key ({i}, {j})")
            if not all(math.isfinite(v) for v in scores):
                raise ValidationError(f"{self.doc_id}: non-finite pairwise score")

    def s_mc(self, i: int, j: int) -> float:
        pair = self.pairwise.get((i, j))
        return NEG_INF if pair is None else pair[0]

    def s_pmc(self, i: int, j: int) -> float:
        pair = self.pairwise.get((i, j))
        return NEG_INF if pair is None else pair[1]


@dataclass(frozen=True)
class DecoderConfig:
    mention_ratio: float = 0.4
    max_clusters: int = 250
    split_threshold: float = 0.5
    min_antecedents: int = 2
    max_antecedents: int = 5

    def __post_init__(self):
        if not 0 < self.mention_ratio <= 1:
            raise ValueError("mention_ratio must be in (0, 1]")
        if not 0 < self.split_threshold < 1:
            raise ValueError("split_threshold must be in (0, 1)")
        if not 1 <= self.min_antecedents <= self.max_antecedents:
            raise ValueError("need 1 <= min_antecedents <= max_antecedents")
        if self.max_clusters < 1:
            raise ValueError("max_clusters must be positive")


@dataclass(frozen=True)
class Decision:
    """One step of the incremental pass: ``choice`` is NO, NR, DN or a cluster id."""

    mention: int
    choice: object
    score: float


@dataclass(frozen=True)
class DecodeResult:
    chains: tuple[Chain, ...]
    non_referring: frozenset
    discourse_status: dict = field(hash=False)
    split_relations: tuple[SplitRelation, ...] = ()
    trace: tuple[Decision, ...] = ()


def sigmoid(s: float) -> float:
    if s >= 0:
        return 1.0 / (1.0 + math.exp(-s))
    z = math.exp(s)
    return z / (1.0 + z)


def prune(table: ScoreTable, token_count: Optional[int] = None,
          cfg: DecoderConfig = DecoderConfig()) -> list[int]:
    """Indices of the floor(ratio * tokens) best candidates, in document order."""
    if token_count is None:
        token_count = table.token_count
    k = math.floor(cfg.mention_ratio * token_count)
    order = sorted(range(len(table.candidates)),
                   key=lambda i: (-table.candidates[i].s_m,
                                  table.candidates[i].start,
                                  table.candidates[i].end, i))
    return sorted(order[:k])


def mean_cluster_score(table: ScoreTable, members: Sequence[int]) -> float:
    return sum(table.candidates[m].s_m for m in members) / len(members)


def _cluster_pair(score: Callable[[int, int], float], i: int,
                  members: Sequence[int]) -> float:
    return max(score(i, m) for m in members)


def rank_clusters(table: ScoreTable, kept: Sequence[int],
                  cfg: DecoderConfig = DecoderConfig(),
                  cluster_score: Callable = mean_cluster_score) -> DecodeResult:
    """Incremental left-to-right clustering of the kept candidates.

    Ties go to NO, then NR, then DN, then the lowest cluster id. Once
    ``max_clusters`` clusters exist, DN is no longer offered.
    """
    clusters: list[list[int]] = []
    non_referring = set()
    status = {}
    trace = []
    for i in sorted(kept):
        c = table.candidates[i]
        options = [(NO, c.s_no), (NR, c.s_nr + c.s_m)]
        if len(clusters) < cfg.max_clusters:
            options.append((DN, c.s_dn + c.s_m))
        for cid, members in enumerate(clusters):
            pair = _cluster_pair(table.s_mc, i, members)
            if pair > NEG_INF:
                options.append((cid, c.s_m + cluster_score(table, members) + pair))
        choice, best = options[0]
        for opt, score in options[1:]:
            if score > best:
                choice, best = opt, score
        trace.append(Decision(i, choice, best))
        _apply(choice, i, clusters, non_referring, status)
    return _result(clusters, non_referring, status, (), tuple(trace))


def _apply(choice, i, clusters, non_referring, status):
    if choice == NO:
        return
    if choice == NR:
        non_referring.add(i)
    elif choice == DN:
        clusters.append([i])
        status[i] = "new"
    else:
        clusters[choice].append(i)
        status[i] = "old"


def _result(clusters, non_referring, status, relations, trace) -> DecodeResult:
    return DecodeResult(
        chains=tuple(Chain(cid, tuple(members)) for cid, members in enumerate(clusters)),
        non_referring=frozenset(non_referring),
        discourse_status=dict(status),
        split_relations=tuple(relations),
        trace=trace,
    )


def split_probabilities(result: DecodeResult, table: ScoreTable, i: int,
                        cluster_score: Callable = mean_cluster_score
                        ) -> dict[int, float]:
    """p_p(i, j) for every cluster j that existed before mention ``i``."""
    c = table.candidates[i]
    out = {}
    for chain in result.chains:
        members = [m for m in chain.mentions if m < i]
        if not members:
            continue
        pair = _cluster_pair(table.s_pmc, i, members)
        if pair == NEG_INF:
            out[chain.id] = 0.0
        else:
            out[chain.id] = sigmoid(c.s_m + cluster_score(table, members) + pair)
    return out


def assign_splits(result: DecodeResult, table: ScoreTable,
                  cfg: DecoderConfig = DecoderConfig(),
                  cluster_score: Callable = mean_cluster_score) -> DecodeResult:
    relations = []
    for i, state in sorted(result.discourse_status.items()):
        if state != "new":
            continue
        probs = split_probabilities(result, table, i, cluster_score)
        above = [(p, cid) for cid, p in probs.items() if p > cfg.split_threshold]
        if len(above) < cfg.min_antecedents:
            continue
        above.sort(key=lambda pc: (-pc[0], pc[1]))
        chosen = sorted(cid for _, cid in above[:cfg.max_antecedents])
        relations.append(SplitRelation(i, tuple(chosen)))
    return DecodeResult(result.chains, result.non_referring,
                        result.discourse_status, tuple(relations), result.trace)


def decode(table: ScoreTable, cfg: DecoderConfig = DecoderConfig(),
           cluster_score: Callable = mean_cluster_score) -> DecodeResult:
    kept = prune(table, table.token_count, cfg)
    result = rank_clusters(table, kept, cfg, cluster_score)
    return assign_splits(result, table, cfg, cluster_score)


def replay(table: ScoreTable, trace: Sequence[Decision],
           cfg: DecoderConfig = DecoderConfig(),
           cluster_score: Callable = mean_cluster_score) -> DecodeResult:
    """Rebuild a DecodeResult from recorded decisions."""
    clusters: list[list[int]] = []
    non_referring = set()
    status = {}
    for d in trace:
        if d.choice not in (NO, NR, DN) and not 0 <= d.choice < len(clusters):
            raise ValidationError(f"trace refers to unknown cluster {d.choice}")
        _apply(d.choice, d.mention, clusters, non_referring, status)
    result = _result(clusters, non_referring, status, (), tuple(trace))
    return assign_splits(result, table, cfg, cluster_score)


def to_document(table: ScoreTable, result: DecodeResult,
                tokens: Optional[Sequence[str]] = None) -> DocumentAnnotation:
    """System annotation with candidate indices as mention ids."""
    used = sorted({m for c in result.chains for m in c.mentions} | result.non_referring)
    mentions = tuple(Mention(i, Span(table.candidates[i].start, table.candidates[i].end))
                     for i in used)
    if tokens is None:
        tokens = [""] * table.token_count
    doc = DocumentAnnotation(
        doc_id=table.doc_id, tokens=tuple(tokens), mentions=mentions,
        chains=result.chains, non_referring=result.non_referring,
        split_relations=result.split_relations, side=SYSTEM)
    return doc.validate()


def trace_to_json(trace: Sequence[Decision]) -> list[dict]:
    return [{"mention": d.mention, "choice": d.choice, "score": d.score} for d in trace]


def trace_from_json(items: Sequence[dict]) -> tuple[Decision, ...]:
    return tuple(Decision(int(d["mention"]), d["choice"], float(d["score"])) for d in items)


def table_from_dict(record: dict) -> ScoreTable:
    try:
        candidates = tuple(Candidate(int(c["start"]), int(c["end"]), float(c["s_m"]),
                                     float(c["s_no"]), float(c["s_nr"]), float(c["s_dn"]))
                           for c in record["candidates"])
        pairwise = {}
        for p in record.get("pairwise", []):
            pairwise[(int(p["i"]), int(p["j"]))] = (float(p["s_mc"]), float(p["s_pmc"]))
        return ScoreTable(str(record["doc_id"]), int(record["tokens"]),
                          candidates, pairwise)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad score record: {exc}") from None


def table_to_dict(table: ScoreTable) -> dict:
    return {
        "doc_id": table.doc_id,
        "tokens": table.token_count,
        "candidates": [{"start": c.start, "end": c.end, "s_m": c.s_m, "s_no": c.s_no,
                        "s_nr": c.s_nr, "s_dn": c.s_dn} for c in table.candidates],
        "pairwise": [{"i": i, "j": j, "s_mc": v[0], "s_pmc": v[1]}
                     for (i, j), v in sorted(table.pairwise.items())],
    }


def iter_tables(fh: IO) -> Iterator[ScoreTable]:
    for lineno, line in enumerate(fh, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, lineno) from None
        yield table_from_dict(record)
