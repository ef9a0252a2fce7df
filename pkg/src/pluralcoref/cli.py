"""Command-line entry point: score, split, baseline, decode and align."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Sequence

from . import __version__
from .assignment import align_chains
from .baselines import DEFAULT_PRONOUNS, BaselineConfig, apply_baseline
from .decoder import (DecoderConfig, decode, iter_tables, to_document,
                      trace_to_json)
from .lea import ImportanceConfig, lea_entities, normalize, lea_extended
from .metrics import (b_cubed, ceaf_phi4, conll_average,
                      lea_standard, muc, non_referring_f1, non_referring_spans,
                      span_chains, total)
from .model import (ParseError, ValidationError, document_to_dict,
                    dumps_document, parse_documents, GOLD, SYSTEM)
from . import split_eval

METRICS = ("muc", "bcubed", "ceafe", "conll", "lea", "nonref")
EXTRA_METRICS = ("lea_standard",)


class DocumentMismatch(Exception):
    def __init__(self, missing_sys, missing_gold):
        self.missing_sys = sorted(missing_sys)
        self.missing_gold = sorted(missing_gold)
        super().__init__(f"doc_id mismatch: no system output for {self.missing_sys}, "
                         f"no gold for {self.missing_gold}")


def pair_documents(gold_docs, sys_docs):
    gold = {d.doc_id: d for d in gold_docs}
    system = {d.doc_id: d for d in sys_docs}
    if set(gold) != set(system):
        raise DocumentMismatch(set(gold) - set(system), set(system) - set(gold))
    return [(gold[k], system[k]) for k in sorted(gold)]


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def score_document(pair, metrics: Sequence[str], imp_split: float = 1.0,
                   strict_formula: bool = False, entity_rows: bool = False) -> dict:
    """Per-document MetricScores for the requested metric names."""
    gold, sys_doc = pair
    wanted = set(metrics)
    if "conll" in wanted:
        wanted |= {"muc", "bcubed", "ceafe"}
    out: dict = {}
    g_chains = list(span_chains(gold).values())
    s_chains = list(span_chains(sys_doc).values())
    if "muc" in wanted:
        out["muc"] = muc(g_chains, s_chains)
    if "bcubed" in wanted:
        out["bcubed"] = b_cubed(g_chains, s_chains)
    if "ceafe" in wanted:
        out["ceafe"] = ceaf_phi4(g_chains, s_chains)
    if "lea_standard" in wanted:
        out["lea_standard"] = lea_standard(g_chains, s_chains)
    if "lea" in wanted:
        g_norm, s_norm = normalize(sys_doc, gold, strict_formula)
        cfg = ImportanceConfig(imp_split)
        out["lea"] = lea_extended(g_norm, s_norm, cfg)
        if entity_rows:
            out["lea_entities"] = [row.__dict__ for row in lea_entities(g_norm, s_norm, cfg)]
    if "nonref" in wanted:
        out["nonref"] = non_referring_f1(non_referring_spans(gold),
                                         non_referring_spans(sys_doc))
    return out


def _scores_to_json(scores: dict, metrics: Sequence[str], counts=True) -> dict:
    out = {}
    for name in metrics:
        if name == "conll":
            out["conll"] = conll_average(scores["muc"], scores["bcubed"], scores["ceafe"])
        else:
            out[name] = scores[name].to_dict(counts)
    return out


def run_score(gold_path: str, sys_path: str, metrics: Sequence[str] = METRICS,
              imp_split: float = 1.0, *, strict_formula: bool = False,
              only_split_docs: bool = False, macro: bool = False,
              per_document: bool = False, lea_report: str = "summary",
              jobs: int = 1) -> dict:
    for m in metrics:
        if m not in METRICS + EXTRA_METRICS:
            raise ValueError(f"unknown metric {m!r}")
    pairs = pair_documents(parse_documents(gold_path, GOLD),
                           parse_documents(sys_path, SYSTEM))
    if only_split_docs:
        pairs = [p for p in pairs if p[0].split_relations]
    entity_rows = lea_report == "per-entity"
    fn = partial(score_document, metrics=tuple(metrics), imp_split=imp_split,
                 strict_formula=strict_formula, entity_rows=entity_rows)
    results = _map(fn, pairs, jobs)

    names = [n for n in results[0] if n != "lea_entities"] if results else []
    corpus_scores = {n: total(r[n] for r in results) for n in names}
    report: dict = {"corpus": _scores_to_json(corpus_scores, metrics) if results else {}}
    if per_document or entity_rows:
        docs = {}
        for (gold, _), r in zip(pairs, results):
            entry = _scores_to_json(r, metrics) if per_document else {}
            if entity_rows:
                entry["lea_entities"] = r["lea_entities"]
            docs[gold.doc_id] = entry
        report["per_document"] = docs
    if macro and results:
        report["macro"] = {}
        for name in metrics:
            if name == "conll":
                vals = [conll_average(r["muc"], r["bcubed"], r["ceafe"]) for r in results]
                report["macro"]["conll"] = sum(vals) / len(vals)
                continue
            rows = [r[name] for r in results]
            report["macro"][name] = {
                k: sum(getattr(s, attr) for s in rows) / len(rows)
                for k, attr in (("r", "recall"), ("p", "precision"), ("f1", "f1"))}
    report["metadata"] = {
        "tool": "pluralcoref",
        "version": __version__,
        "documents": [g.doc_id for g, _ in pairs],
        "config": {"metrics": list(metrics), "imp_split": imp_split,
                   "strict_formula": strict_formula,
                   "only_split_docs": only_split_docs, "macro": macro,
                   "lea_report": lea_report, "aggregation": "micro"},
        "inputs": {"gold": _digest(gold_path), "system": _digest(sys_path)},
    }
    return report


def _split_doc(pair):
    return split_eval.evaluate_document(*pair)


def run_split(gold_path: str, sys_path: str, jobs: int = 1
              ) -> split_eval.SplitEvalReport:
    pairs = pair_documents(parse_documents(gold_path, GOLD),
                           parse_documents(sys_path, SYSTEM))
    return split_eval.combine(_map(_split_doc, pairs, jobs))


def run_baseline(sys_path: str, cfg: BaselineConfig, jobs: int = 1) -> list[str]:
    docs = parse_documents(sys_path, SYSTEM)
    out = _map(partial(apply_baseline, cfg=cfg), docs, jobs)
    return [dumps_document(d) for d in out]


def _decode_one(table, cfg: DecoderConfig, with_trace: bool) -> str:
    result = decode(table, cfg)
    record = document_to_dict(to_document(table, result))
    if with_trace:
        record["trace"] = trace_to_json(result.trace)
    return json.dumps(record, ensure_ascii=False)


def run_decode(scores_path: str, cfg: DecoderConfig, trace: bool = False,
               jobs: int = 1) -> list[str]:
    with open(scores_path, "rb") as fh:
        tables = list(iter_tables(fh))
    return _map(partial(_decode_one, cfg=cfg, with_trace=trace), tables, jobs)


def _align_doc(pair) -> dict:
    gold, sys_doc = pair
    result = align_chains(span_chains(gold), span_chains(sys_doc))
    return {"doc_id": gold.doc_id, **result.to_dict()}


def run_align(gold_path: str, sys_path: str, jobs: int = 1) -> list[dict]:
    pairs = pair_documents(parse_documents(gold_path, GOLD),
                           parse_documents(sys_path, SYSTEM))
    return _map(_align_doc, pairs, jobs)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pluralcoref",
        description="Score and decode coreference output with split-antecedent anaphors.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[common], help="coreference metrics")
    p.add_argument("--gold", required=True)
    p.add_argument("--sys", required=True)
    p.add_argument("--metrics", default=",".join(METRICS))
    p.add_argument("--imp-split", type=float, default=1.0)
    p.add_argument("--lea-report", choices=("summary", "per-entity"), default="summary")
    p.add_argument("--strict-formula", action="store_true",
                   help="size anaphor atoms by their referent set (not used by default)")
    p.add_argument("--only-split-docs", action="store_true")
    p.add_argument("--macro", action="store_true")
    p.add_argument("--per-document", action="store_true")

    p = sub.add_parser("split", parents=[common], help="split-antecedent scores")
    p.add_argument("--gold", required=True)
    p.add_argument("--sys", required=True)
    p.add_argument("--per-anaphor", default=None, help="write a per-anaphor TSV here")

    p = sub.add_parser("baseline", parents=[common], help="heuristic split baselines")
    p.add_argument("--sys", required=True)
    p.add_argument("--model", choices=("recent", "random"), required=True)
    p.add_argument("--x", type=int, default=2)
    p.add_argument("--pronouns", default=",".join(sorted(DEFAULT_PRONOUNS)))

    p = sub.add_parser("decode", parents=[common], help="decode score tables")
    p.add_argument("--scores", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--mention-ratio", type=float, default=0.4)
    p.add_argument("--max-clusters", type=int, default=250)
    p.add_argument("--trace", action="store_true")

    p = sub.add_parser("align", parents=[common], help="dump CEAF-e chain alignments")
    p.add_argument("--gold", required=True)
    p.add_argument("--sys", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "score":
            metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
            report = run_score(args.gold, args.sys, metrics, args.imp_split,
                               strict_formula=args.strict_formula,
                               only_split_docs=args.only_split_docs,
                               macro=args.macro, per_document=args.per_document,
                               lea_report=args.lea_report, jobs=args.jobs)
            _emit(_json(report), args.out)
        elif args.command == "split":
            report = run_split(args.gold, args.sys, args.jobs)
            _emit(_json(report.to_dict()), args.out)
            if args.per_anaphor:
                with open(args.per_anaphor, "w", encoding="utf-8") as fh:
                    fh.write(report.per_anaphor_tsv())
        elif args.command == "baseline":
            pronouns = frozenset(p.strip().lower() for p in args.pronouns.split(",")
                                 if p.strip())
            cfg = BaselineConfig(args.model, args.x, args.seed, pronouns)
            _emit("".join(line + "\n" for line in run_baseline(args.sys, cfg, args.jobs)),
                  args.out)
        elif args.command == "decode":
            cfg = DecoderConfig(mention_ratio=args.mention_ratio,
                                max_clusters=args.max_clusters,
                                split_threshold=args.threshold)
            lines = run_decode(args.scores, cfg, args.trace, args.jobs)
            _emit("".join(line + "\n" for line in lines), args.out)
        elif args.command == "align":
            _emit(_json(run_align(args.gold, args.sys, args.jobs)), args.out)
    except DocumentMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
