"""Annotation data model and JSON-lines (de)serialization.

A document is a list of tokens plus mentions (token spans), chains of
mention ids, a set of non-referring mention ids and split-antecedent
relations linking an anaphor to two or more antecedent chains.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import IO, Iterable, Iterator, Optional, Union

GOLD = "gold"
SYSTEM = "system"


class ParseError(ValueError):
    """Malformed JSON-lines input."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    """Well-formed input that violates an annotation invariant."""


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValidationError(f"bad span [{self.start}, {self.end})")

    def as_tuple(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class Mention:
    """Either an individual mention (``span`` set) or a plural mention.

    A plural mention carries ``elements``: the ids of the representative
    mentions of the entities it groups.
    """

    id: int
    span: Optional[Span] = None
    elements: Optional[frozenset[int]] = None

    def __post_init__(self):
        if (self.span is None) == (self.elements is None):
            raise ValidationError(
                f"mention {self.id}: exactly one of span/elements is required")
        if self.elements is not None and len(self.elements) < 2:
            raise ValidationError(
                f"mention {self.id}: plural mention needs >= 2 elements")

    @property
    def is_plural(self) -> bool:
        return self.elements is not None

    @property
    def size(self) -> int:
        return 1 if self.elements is None else len(self.elements)


@dataclass(frozen=True)
class Chain:
    id: int
    mentions: tuple[int, ...]


@dataclass(frozen=True)
class SplitRelation:
    anaphor: int
    antecedent_chains: tuple[int, ...]


@dataclass(frozen=True)
class DocumentAnnotation:
    doc_id: str
    tokens: tuple[str, ...]
    mentions: tuple[Mention, ...]
    chains: tuple[Chain, ...]
    sentences: tuple[tuple[int, int], ...] = ()
    non_referring: frozenset[int] = frozenset()
    split_relations: tuple[SplitRelation, ...] = ()
    side: str = GOLD
    # ids of plural mentions added by materialize_plurals
    synthetic: frozenset[int] = field(default=frozenset(), compare=False)

    @cached_property
    def mention_by_id(self) -> dict[int, Mention]:
        return {m.id: m for m in self.mentions}

    @cached_property
    def chain_by_id(self) -> dict[int, Chain]:
        return {c.id: c for c in self.chains}

    @cached_property
    def chain_of(self) -> dict[int, int]:
        """Mention id -> id of the chain containing it."""
        return {m: c.id for c in self.chains for m in c.mentions}

    @cached_property
    def relation_of(self) -> dict[int, SplitRelation]:
        return {r.anaphor: r for r in self.split_relations}

    def span_of(self, mention_id: int) -> Span:
        return self.mention_by_id[mention_id].span

    def representative(self, chain_id: int) -> int:
        """First individual mention of a chain in document order."""
        chain = self.chain_by_id[chain_id]
        individual = [m for m in chain.mentions
                      if not self.mention_by_id[m].is_plural]
        if not individual:
            raise ValidationError(f"chain {chain_id} has no individual mentions")
        return min(individual,
                   key=lambda m: (self.span_of(m).start, self.span_of(m).end, m))

    def validate(self) -> "DocumentAnnotation":
        n = len(self.tokens)
        seen: set[int] = set()
        for m in self.mentions:
            if m.id in seen:
                raise ValidationError(f"duplicate mention id {m.id}")
            seen.add(m.id)
            if m.span is not None and m.span.end > n:
                raise ValidationError(
                    f"mention {m.id}: span end {m.span.end} exceeds {n} tokens")
        for m in self.mentions:
            if m.elements is not None:
                for e in m.elements:
                    if e not in seen:
                        raise ValidationError(
                            f"plural mention {m.id}: unknown element {e}")
        for s, e in self.sentences:
            if not 0 <= s < e <= n:
                raise ValidationError(f"bad sentence range [{s}, {e})")

        chain_ids: set[int] = set()
        in_chain: set[int] = set()
        for c in self.chains:
            if c.id in chain_ids:
                raise ValidationError(f"duplicate chain id {c.id}")
            chain_ids.add(c.id)
            if not c.mentions:
                raise ValidationError(f"chain {c.id} is empty")
            for m in c.mentions:
                if m not in seen:
                    raise ValidationError(f"chain {c.id}: unknown mention {m}")
                if m in in_chain:
                    raise ValidationError(f"mention {m} appears in two chains")
                in_chain.add(m)

        for m in self.non_referring:
            if m not in seen:
                raise ValidationError(f"unknown non-referring mention {m}")
            if m in in_chain:
                raise ValidationError(
                    f"non-referring mention {m} belongs to a chain")

        anaphors: set[int] = set()
        for r in self.split_relations:
            if r.anaphor not in seen:
                raise ValidationError(f"split relation: unknown anaphor {r.anaphor}")
            if self.mention_by_id[r.anaphor].is_plural:
                raise ValidationError(
                    f"split relation: anaphor {r.anaphor} is a plural mention")
            if r.anaphor in anaphors:
                raise ValidationError(
                    f"anaphor {r.anaphor} appears in two split relations")
            anaphors.add(r.anaphor)
            if len(r.antecedent_chains) < 2:
                raise ValidationError(
                    f"anaphor {r.anaphor}: split relation needs >= 2 antecedent chains")
            if len(set(r.antecedent_chains)) != len(r.antecedent_chains):
                raise ValidationError(
                    f"anaphor {r.anaphor}: duplicate antecedent chains")
            for c in r.antecedent_chains:
                if c not in chain_ids:
                    raise ValidationError(
                        f"anaphor {r.anaphor}: unknown antecedent chain {c}")
        return self


def _doc_position(doc: DocumentAnnotation, mention_id: int) -> tuple:
    """Sort key placing plural mentions right after their anaphor."""
    m = doc.mention_by_id[mention_id]
    if m.span is not None:
        return (m.span.start, m.span.end, 0, mention_id)
    for r in doc.split_relations:
        chain = doc.chain_of.get(r.anaphor)
        if chain is not None and mention_id in doc.chain_by_id[chain].mentions:
            s = doc.span_of(r.anaphor)
            return (s.start, s.end, 1, mention_id)
    return (float("inf"), float("inf"), 1, mention_id)


def _int_list(value, what: str) -> list[int]:
    if not isinstance(value, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ValidationError(f"{what} must be a list of integers")
    return value


def document_from_dict(record: dict, side: str = GOLD) -> DocumentAnnotation:
    if not isinstance(record, dict):
        raise ValidationError("record must be a JSON object")
    try:
        doc_id = record["doc_id"]
        tokens = record["tokens"]
        raw_mentions = record.get("mentions", [])
        raw_chains = record.get("chains", [])
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(doc_id, str):
        raise ValidationError("doc_id must be a string")
    if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
        raise ValidationError("tokens must be a list of strings")

    mentions = []
    for rm in raw_mentions:
        try:
            if "elements" in rm:
                mentions.append(Mention(
                    int(rm["id"]),
                    elements=frozenset(_int_list(rm["elements"], "elements"))))
            else:
                mentions.append(Mention(int(rm["id"]),
                                        Span(int(rm["start"]), int(rm["end"]))))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad mention {rm!r}: {exc}") from None
    chains = []
    for rc in raw_chains:
        try:
            chains.append(Chain(int(rc["id"]),
                                tuple(_int_list(rc["mentions"], "chain mentions"))))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad chain {rc!r}: {exc}") from None
    relations = []
    for rr in record.get("split_relations", []):
        try:
            relations.append(SplitRelation(
                int(rr["anaphor"]),
                tuple(_int_list(rr["antecedent_chains"], "antecedent_chains"))))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad split relation {rr!r}: {exc}") from None
    sentences = tuple(tuple(_int_list(s, "sentence")) for s in record.get("sentences", []))
    if any(len(s) != 2 for s in sentences):
        raise ValidationError("sentences must be [start, end] pairs")

    doc = DocumentAnnotation(
        doc_id=doc_id,
        tokens=tuple(tokens),
        mentions=tuple(mentions),
        chains=tuple(chains),
        sentences=sentences,
        non_referring=frozenset(_int_list(record.get("non_referring", []),
                                          "non_referring")),
        split_relations=tuple(relations),
        side=side,
    )
    doc.validate()
    # keep chains in document order
    ordered = tuple(Chain(c.id, tuple(sorted(c.mentions,
                                             key=lambda m: _doc_position(doc, m))))
                    for c in doc.chains)
    return replace(doc, chains=ordered)


def document_to_dict(doc: DocumentAnnotation) -> dict:
    mentions = []
    for m in doc.mentions:
        if m.is_plural:
            mentions.append({"id": m.id, "elements": sorted(m.elements)})
        else:
            mentions.append({"id": m.id, "start": m.span.start, "end": m.span.end})
    return {
        "doc_id": doc.doc_id,
        "tokens": list(doc.tokens),
        "sentences": [list(s) for s in doc.sentences],
        "mentions": mentions,
        "chains": [{"id": c.id, "mentions": list(c.mentions)} for c in doc.chains],
        "non_referring": sorted(doc.non_referring),
        "split_relations": [{"anaphor": r.anaphor,
                             "antecedent_chains": list(r.antecedent_chains)}
                            for r in doc.split_relations],
    }


def parse_document(line: Union[str, bytes], side: str = GOLD,
                   lineno: Optional[int] = None) -> DocumentAnnotation:
    """Parse and validate one JSON-lines record."""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(str(exc), lineno) from None
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, lineno) from None
    return document_from_dict(record, side)


def iter_documents(source: Union[str, bytes, IO], side: str = GOLD
                   ) -> Iterator[DocumentAnnotation]:
    """Yield annotations from a JSON-lines stream, file path or raw bytes."""
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    if isinstance(source, str):
        with open(source, "rb") as fh:
            yield from iter_documents(fh, side)
        return
    for lineno, line in enumerate(source, 1):
        if not line.strip():
            continue
        yield parse_document(line, side, lineno)


def parse_documents(source, side: str = GOLD) -> list[DocumentAnnotation]:
    docs = list(iter_documents(source, side))
    seen = set()
    for d in docs:
        if d.doc_id in seen:
            raise ValidationError(f"duplicate doc_id {d.doc_id!r}")
        seen.add(d.doc_id)
    return docs


def dumps_document(doc: DocumentAnnotation) -> str:
    return json.dumps(document_to_dict(doc), ensure_ascii=False)


def write_documents(docs: Iterable[DocumentAnnotation], fh: IO[str]) -> None:
    for doc in docs:
        fh.write(dumps_document(doc))
        fh.write("\n")


def materialize_plurals(doc: DocumentAnnotation) -> DocumentAnnotation:
    """Represent each split-antecedent relation as a plural mention.

    The plural mention groups the representatives of the antecedent chains
    and is placed right after its anaphor in the anaphor's chain (a new
    chain is opened when the anaphor has none). Idempotent.
    """
    if not doc.split_relations:
        return doc
    mentions = list(doc.mentions)
    chains = {c.id: list(c.mentions) for c in doc.chains}
    chain_order = [c.id for c in doc.chains]
    chain_of = dict(doc.chain_of)
    synthetic = set(doc.synthetic)
    next_mention = max((m.id for m in mentions), default=-1) + 1
    next_chain = max(chain_order, default=-1) + 1

    for rel in doc.split_relations:
        for c in rel.antecedent_chains:
            if c not in doc.chain_by_id:
                raise ValidationError(
                    f"anaphor {rel.anaphor}: unknown antecedent chain {c}")
        elements = frozenset(doc.representative(c) for c in rel.antecedent_chains)
        chain_id = chain_of.get(rel.anaphor)
        if chain_id is not None:
            members = chains[chain_id]
            pos = members.index(rel.anaphor)
            if pos + 1 < len(members):
                follower = doc.mention_by_id.get(members[pos + 1])
                if follower is not None and follower.elements == elements:
                    continue
        plural = Mention(next_mention, elements=elements)
        next_mention += 1
        mentions.append(plural)
        synthetic.add(plural.id)
        if chain_id is None:
            chain_id = next_chain
            next_chain += 1
            chains[chain_id] = [rel.anaphor]
            chain_order.append(chain_id)
            chain_of[rel.anaphor] = chain_id
        members = chains[chain_id]
        members.insert(members.index(rel.anaphor) + 1, plural.id)
        chain_of[plural.id] = chain_id

    out = replace(doc, mentions=tuple(mentions),
                  chains=tuple(Chain(c, tuple(chains[c])) for c in chain_order),
                  synthetic=frozenset(synthetic))
    return out.validate()
