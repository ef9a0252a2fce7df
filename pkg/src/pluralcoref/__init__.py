"""Evaluation and decoding tools for coreference with split-antecedent anaphors."""

__version__ = "0.1.0"

from .assignment import AlignmentResult, align_chains, max_weight_matching, phi4
from .baselines import BaselineConfig, apply_baseline, recent_x, random_antecedents
from .decoder import (Candidate, DecodeResult, DecoderConfig, ScoreTable, decode,
                      prune, replay, to_document)
from .lea import (ImportanceConfig, NormalizedMention, lea_extended,
                  lea_extended_documents, link_reward, normalize, subset_list)
from .metrics import (MetricScore, b_cubed, ceaf_phi4, conll_average,
                      lea_standard, muc, non_referring_f1, span_chains)
from .model import (Chain, DocumentAnnotation, Mention, ParseError, Span,
                    SplitRelation, ValidationError, document_from_dict,
                    materialize_plurals, parse_document, parse_documents)
from .split_eval import SplitEvalReport, evaluate, evaluate_document

__all__ = [
    "align_chains", "AlignmentResult", "apply_baseline", "b_cubed",
    "BaselineConfig", "Candidate", "ceaf_phi4", "Chain", "conll_average", "decode",
    "DecoderConfig", "DecodeResult", "document_from_dict", "DocumentAnnotation",
    "evaluate", "evaluate_document", "ImportanceConfig", "lea_extended",
    "lea_extended_documents", "lea_standard", "link_reward", "materialize_plurals",
    "max_weight_matching", "Mention", "MetricScore", "muc", "non_referring_f1",
    "normalize", "NormalizedMention", "parse_document", "parse_documents",
    "ParseError", "phi4", "prune", "random_antecedents", "recent_x", "replay",
    "ScoreTable", "Span", "span_chains", "SplitEvalReport", "SplitRelation",
    "subset_list", "to_document", "ValidationError",
]
