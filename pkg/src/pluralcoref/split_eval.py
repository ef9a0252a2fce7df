"""Recognition, lenient and strict scoring of split-antecedent anaphors.

System antecedent chains are mapped to gold chains through the CEAF-e
alignment before they are compared with the gold antecedent lists.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .assignment import align_chains
from .metrics import MetricScore, span_chains, total
from .model import DocumentAnnotation


@dataclass(frozen=True)
class AnaphorRow:
    doc_id: str
    span: tuple[int, int]
    matched: bool
    gold_count: int
    correct: int
    predicted: int

    @property
    def strict_correct(self) -> bool:
        return self.matched and self.correct == self.gold_count == self.predicted


@dataclass(frozen=True)
class SplitMatch:
    """Per-document matching of gold and system split relations."""

    doc_id: str
    rows: tuple[AnaphorRow, ...]
    # predicted antecedent counts of system anaphors with no gold counterpart
    spurious: tuple[int, ...] = ()


@dataclass(frozen=True)
class SplitEvalReport:
    recognition: MetricScore
    lenient: MetricScore
    strict: MetricScore
    lenient_macro: MetricScore
    per_anaphor: tuple[AnaphorRow, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "recognition": self.recognition.to_dict(counts=False),
            "lenient": self.lenient.to_dict(counts=False),
            "strict": self.strict.to_dict(counts=False),
            "lenient_macro": self.lenient_macro.to_dict(counts=False),
        }

    def per_anaphor_tsv(self) -> str:
        lines = ["doc_id\tstart\tend\tmatched\tgold_antecedents\tcorrect\tpredicted"]
        for r in self.per_anaphor:
            lines.append(f"{r.doc_id}\t{r.span[0]}\t{r.span[1]}\t{int(r.matched)}"
                         f"\t{r.gold_count}\t{r.correct}\t{r.predicted}")
        return "\n".join(lines) + "\n"


def _anaphors(doc: DocumentAnnotation) -> dict:
    out = {}
    for r in doc.split_relations:
        out.setdefault(doc.span_of(r.anaphor).as_tuple(), r)
    return out


def recognition_f1(gold: DocumentAnnotation, sys: DocumentAnnotation) -> MetricScore:
    g, s = set(_anaphors(gold)), set(_anaphors(sys))
    hits = len(g & s)
    return MetricScore(hits, len(g), hits, len(s))


def antecedent_match(gold: DocumentAnnotation, sys: DocumentAnnotation) -> SplitMatch:
    alignment = align_chains(span_chains(gold), span_chains(sys))
    sys_to_gold = alignment.system_to_gold()
    gold_anaphors = _anaphors(gold)
    sys_anaphors = _anaphors(sys)
    rows = []
    for span, grel in sorted(gold_anaphors.items()):
        srel = sys_anaphors.get(span)
        if srel is None:
            rows.append(AnaphorRow(gold.doc_id, span, False,
                                   len(grel.antecedent_chains), 0, 0))
            continue
        unclaimed = set(grel.antecedent_chains)
        correct = 0
        for chain in srel.antecedent_chains:
            target = sys_to_gold.get(chain)
            if target in unclaimed:
                unclaimed.discard(target)
                correct += 1
        rows.append(AnaphorRow(gold.doc_id, span, True,
                               len(grel.antecedent_chains), correct,
                               len(srel.antecedent_chains)))
    spurious = tuple(len(r.antecedent_chains)
                     for span, r in sorted(sys_anaphors.items())
                     if span not in gold_anaphors)
    return SplitMatch(gold.doc_id, tuple(rows), spurious)


def lenient_strict_f1(match: SplitMatch) -> tuple[MetricScore, MetricScore]:
    """Link-level lenient score and anaphor-level strict score."""
    correct = sum(r.correct for r in match.rows)
    gold_links = sum(r.gold_count for r in match.rows)
    sys_links = sum(r.predicted for r in match.rows if r.matched) + sum(match.spurious)
    lenient = MetricScore(correct, gold_links, correct, sys_links)
    n_strict = sum(r.strict_correct for r in match.rows)
    n_sys = sum(r.matched for r in match.rows) + len(match.spurious)
    strict = MetricScore(n_strict, len(match.rows), n_strict, n_sys)
    return lenient, strict


def lenient_macro(match: SplitMatch) -> MetricScore:
    """Lenient credit averaged over anaphors instead of antecedent links."""
    r_num = sum(r.correct / r.gold_count for r in match.rows)
    p_num = sum(r.correct / r.predicted for r in match.rows
                if r.matched and r.predicted)
    n_sys = sum(r.matched for r in match.rows) + len(match.spurious)
    return MetricScore(r_num, len(match.rows), p_num, n_sys)


def evaluate_document(gold: DocumentAnnotation, sys: DocumentAnnotation
                      ) -> SplitEvalReport:
    match = antecedent_match(gold, sys)
    lenient, strict = lenient_strict_f1(match)
    return SplitEvalReport(recognition_f1(gold, sys), lenient, strict,
                           lenient_macro(match), match.rows)


def combine(reports: Iterable[SplitEvalReport]) -> SplitEvalReport:
    reports = list(reports)
    return SplitEvalReport(
        total(r.recognition for r in reports),
        total(r.lenient for r in reports),
        total(r.strict for r in reports),
        total(r.lenient_macro for r in reports),
        tuple(row for r in reports for row in r.per_anaphor),
    )


def evaluate(gold_docs, sys_docs) -> SplitEvalReport:
    """Corpus-level split scores; documents are paired by doc_id."""
    sys_by_id = {d.doc_id: d for d in sys_docs}
    return combine(evaluate_document(g, sys_by_id[g.doc_id])
                   for g in sorted(gold_docs, key=lambda d: d.doc_id))
