"""Immutable inverted index over published minutes with BM25 ranking.

A snapshot indexes two unit kinds: one ``minute`` unit per published
document (its full raw text) and one ``subject`` unit per agenda item
(title plus summary). Facet fields are stored per unit so that filtering
and counting never touch the primary store. Snapshots are built once,
shared freely by readers, and swapped atomically on publish.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from typing import Any, Iterable

from .errors import LoadError, NotFoundError, ValidationError
from .model import MinuteDocument, MunicipalityRecord, ParticipantRecord, SubjectRecord
from .text import tokenize, tokenize_with_spans

SNAPSHOT_VERSION = "CIDX1"

K1_DEFAULT = 1.2
B_DEFAULT = 0.75

SCOPES = ("minutes", "subjects", "all")
FACET_DIMENSIONS = ("municipality", "topic", "party", "participant", "meeting_type")

MARK_START = "\u0001"
MARK_END = "\u0002"

SNIPPET_RADIUS = 8


@dataclass(frozen=True)
class IndexUnit:
    unit_id: str
    kind: str  # "minute" or "subject"
    minute_id: str
    subject_id: str | None
    municipality_id: str
    topic_ids: tuple[str, ...]
    parties: tuple[str, ...]
    participant_ids: tuple[str, ...]
    meeting_date: str  # ISO date
    meeting_type: str
    title: str
    text: str

    def facet_values(self, dimension: str) -> tuple[str, ...]:
        if dimension == "municipality":
            return (self.municipality_id,)
        if dimension == "topic":
            return self.topic_ids
        if dimension == "party":
            return self.parties
        if dimension == "participant":
            return self.participant_ids
        if dimension == "meeting_type":
            return (self.meeting_type,)
        raise ValueError(f"unknown facet dimension {dimension!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "unit_id": self.unit_id,
            "kind": self.kind,
            "minute_id": self.minute_id,
            "subject_id": self.subject_id,
            "municipality_id": self.municipality_id,
            "topic_ids": list(self.topic_ids),
            "parties": list(self.parties),
            "participant_ids": list(self.participant_ids),
            "meeting_date": self.meeting_date,
            "meeting_type": self.meeting_type,
            "title": self.title,
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "IndexUnit":
        return cls(
            unit_id=d["unit_id"],
            kind=d["kind"],
            minute_id=d["minute_id"],
            subject_id=d.get("subject_id"),
            municipality_id=d["municipality_id"],
            topic_ids=tuple(d["topic_ids"]),
            parties=tuple(d["parties"]),
            participant_ids=tuple(d["participant_ids"]),
            meeting_date=d["meeting_date"],
            meeting_type=d["meeting_type"],
            title=d["title"],
            text=d["text"],
        )


@dataclass(frozen=True)
class IndexSnapshot:
    units: dict[str, IndexUnit]
    postings: dict[str, tuple[tuple[str, int], ...]]
    doc_lengths: dict[str, int]
    avg_doc_length: float
    n: int
    municipality_ids: frozenset[str]

    def term_frequency(self, term: str, unit_id: str) -> int:
        for uid, tf in self.postings.get(term, ()):
            if uid == unit_id:
                return tf
        return 0

    def document_frequency(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def to_bytes(self) -> bytes:
        payload = {
            "version": SNAPSHOT_VERSION,
            "units": [self.units[uid].to_dict() for uid in sorted(self.units)],
            "postings": {
                term: [[uid, tf] for uid, tf in entries]
                for term, entries in sorted(self.postings.items())
            },
            "doc_lengths": {uid: self.doc_lengths[uid] for uid in sorted(self.doc_lengths)},
            "avg_doc_length": self.avg_doc_length,
            "n": self.n,
            "municipality_ids": sorted(self.municipality_ids),
        }
        body = json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        return SNAPSHOT_VERSION.encode() + b"\n" + body.encode("utf-8")

    @classmethod
    def from_bytes(cls, data: bytes) -> "IndexSnapshot":
        header, _, body = data.partition(b"\n")
        if header.decode("utf-8", errors="replace") != SNAPSHOT_VERSION:
            raise LoadError(f"unsupported index snapshot header {header!r}")
        payload = json.loads(body.decode("utf-8"))
        units = {d["unit_id"]: IndexUnit.from_dict(d) for d in payload["units"]}
        postings = {
            term: tuple((uid, tf) for uid, tf in entries)
            for term, entries in payload["postings"].items()
        }
        return cls(
            units=units,
            postings=postings,
            doc_lengths=dict(payload["doc_lengths"]),
            avg_doc_length=payload["avg_doc_length"],
            n=payload["n"],
            municipality_ids=frozenset(payload["municipality_ids"]),
        )


@dataclass(frozen=True)
class Query:
    text: str = ""
    scope: str = "all"
    municipality_ids: tuple[str, ...] = ()
    topic_ids: tuple[str, ...] = ()
    parties: tuple[str, ...] = ()
    participant_ids: tuple[str, ...] = ()
    meeting_types: tuple[str, ...] = ()
    date_from: date | None = None
    date_to: date | None = None
    page: int = 1
    page_size: int = 10

    def validate(self) -> None:
        fields: dict[str, str] = {}
        if self.scope not in SCOPES:
            fields["scope"] = f"must be one of {', '.join(SCOPES)}"
        if self.page < 1:
            fields["page"] = "page is 1-based"
        if not 1 <= self.page_size <= 100:
            fields["page_size"] = "page_size must be between 1 and 100"
        if self.date_from and self.date_to and self.date_from > self.date_to:
            fields["date_range"] = "date_from must not be after date_to"
        if fields:
            raise ValidationError("invalid query", fields)

    def selections(self, dimension: str) -> tuple[str, ...]:
        return {
            "municipality": self.municipality_ids,
            "topic": self.topic_ids,
            "party": self.parties,
            "participant": self.participant_ids,
            "meeting_type": self.meeting_types,
        }[dimension]


@dataclass(frozen=True)
class SearchHit:
    unit_id: str
    score: float
    snippet: str
    kind: str
    minute_id: str
    subject_id: str | None
    municipality_id: str
    title: str
    meeting_date: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "unit_id": self.unit_id,
            "score": self.score,
            "snippet": self.snippet,
            "kind": self.kind,
            "minute_id": self.minute_id,
            "subject_id": self.subject_id,
            "municipality_id": self.municipality_id,
            "title": self.title,
            "meeting_date": self.meeting_date,
        }


@dataclass(frozen=True)
class SearchResult:
    hits: tuple[SearchHit, ...]
    total: int
    facet_counts: dict[str, dict[str, int]] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "hits": [h.to_dict() for h in self.hits],
            "total": self.total,
            "facet_counts": self.facet_counts,
        }


def bm25_score(
    snapshot: IndexSnapshot,
    query_terms: Iterable[str],
    unit_id: str,
    k1: float = K1_DEFAULT,
    b: float = B_DEFAULT,
) -> float:
    """Sum of per-term BM25 contributions for one unit.

    Uses the +1-smoothed idf ``ln(1 + (N - df + 0.5) / (df + 0.5))``;
    duplicate query terms count once and unseen terms contribute zero.
    """
    length = snapshot.doc_lengths.get(unit_id)
    if length is None:
        return 0.0
    norm = k1 * (1 - b + b * length / snapshot.avg_doc_length)
    score = 0.0
    for term in sorted(set(query_terms)):
        df = snapshot.document_frequency(term)
        if df == 0:
            continue
        tf = snapshot.term_frequency(term, unit_id)
        if tf == 0:
            continue
        idf = math.log(1 + (snapshot.n - df + 0.5) / (df + 0.5))
        score += idf * (tf * (k1 + 1)) / (tf + norm)
    return score


def _date_sort_value(iso_date: str) -> int:
    return int(iso_date.replace("-", "") or 0)


def _matches_scope(unit: IndexUnit, scope: str) -> bool:
    if scope == "all":
        return True
    return unit.kind == ("minute" if scope == "minutes" else "subject")


def _matches_dimension(unit: IndexUnit, dimension: str, selected: tuple[str, ...]) -> bool:
    if not selected:
        return True
    values = unit.facet_values(dimension)
    return any(v in selected for v in values)


def _matches_date_range(unit: IndexUnit, query: Query) -> bool:
    if query.date_from and unit.meeting_date < query.date_from.isoformat():
        return False
    if query.date_to and unit.meeting_date > query.date_to.isoformat():
        return False
    return True


def _matches_filters(unit: IndexUnit, query: Query, skip_dimension: str | None = None) -> bool:
    if not _matches_scope(unit, query.scope):
        return False
    if not _matches_date_range(unit, query):
        return False
    for dimension in FACET_DIMENSIONS:
        if dimension == skip_dimension:
            continue
        if not _matches_dimension(unit, dimension, query.selections(dimension)):
            return False
    return True


def _matches_text(snapshot: IndexSnapshot, terms: list[str], unit_id: str) -> bool:
    return any(snapshot.term_frequency(t, unit_id) > 0 for t in terms)


def build_snippet(text: str, matched_terms: set[str]) -> str:
    """Window of up to ``SNIPPET_RADIUS`` tokens either side of the first
    match, with every matched token wrapped in marker bytes.

    With no matched terms (facet-only browsing) the leading window is
    returned unmarked.
    """
    spans = tokenize_with_spans(text)
    if not spans:
        return ""
    first = next((i for i, (tok, _, _) in enumerate(spans) if tok in matched_terms), None)
    if first is None:
        window = spans[: 2 * SNIPPET_RADIUS + 1]
        return text[window[0][1] : window[-1][2]]
    window = spans[max(0, first - SNIPPET_RADIUS) : first + SNIPPET_RADIUS + 1]
    parts: list[str] = []
    cursor = window[0][1]
    for tok, start, end in window:
        parts.append(text[cursor:start])
        if tok in matched_terms:
            parts.append(MARK_START + text[start:end] + MARK_END)
        else:
            parts.append(text[start:end])
        cursor = end
    return "".join(parts)


def search(
    snapshot: IndexSnapshot,
    query: Query,
    k1: float = K1_DEFAULT,
    b: float = B_DEFAULT,
    with_facet_counts: bool = True,
) -> SearchResult:
    """Rank units matching the query scope, facets, and text.

    Facet dimensions combine with AND across dimensions and OR within a
    dimension. Empty query text browses the filtered units newest first;
    otherwise candidates containing at least one query term are BM25
    ranked. Ties break by newest meeting date, then unit id. Pagination
    is applied after ranking.
    """
    query.validate()
    terms = sorted(set(tokenize(query.text)))
    candidates = [u for u in snapshot.units.values() if _matches_filters(u, query)]

    if not terms:
        ordered = sorted(
            candidates, key=lambda u: (-_date_sort_value(u.meeting_date), u.unit_id)
        )
        scored = [(u, 0.0) for u in ordered]
    else:
        matching = [u for u in candidates if _matches_text(snapshot, terms, u.unit_id)]
        scored = [(u, bm25_score(snapshot, terms, u.unit_id, k1, b)) for u in matching]
        scored.sort(key=lambda pair: (-pair[1], -_date_sort_value(pair[0].meeting_date), pair[0].unit_id))

    total = len(scored)
    start = (query.page - 1) * query.page_size
    page = scored[start : start + query.page_size]
    term_set = set(terms)
    hits = tuple(
        SearchHit(
            unit_id=u.unit_id,
            score=s,
            snippet=build_snippet(u.text, term_set),
            kind=u.kind,
            minute_id=u.minute_id,
            subject_id=u.subject_id,
            municipality_id=u.municipality_id,
            title=u.title,
            meeting_date=u.meeting_date,
        )
        for u, s in page
    )
    counts = facet_counts(snapshot, query) if with_facet_counts else {}
    return SearchResult(hits=hits, total=total, facet_counts=counts)


def facet_counts(snapshot: IndexSnapshot, query: Query) -> dict[str, dict[str, int]]:
    """Multi-select facet counts.

    Counts for dimension D ignore D's own selections (so choosing a value
    never zeroes its siblings) while applying the text query, the scope,
    the date range, and every other dimension's selections.
    """
    query.validate()
    terms = sorted(set(tokenize(query.text)))
    result: dict[str, dict[str, int]] = {}
    for dimension in FACET_DIMENSIONS:
        counter: Counter[str] = Counter()
        for unit in snapshot.units.values():
            if not _matches_filters(unit, query, skip_dimension=dimension):
                continue
            if terms and not _matches_text(snapshot, terms, unit.unit_id):
                continue
            for value in unit.facet_values(dimension):
                counter[value] += 1
        result[dimension] = dict(sorted(counter.items()))
    return result


def timeline(snapshot: IndexSnapshot, municipality_id: str) -> list[tuple[str, list[str]]]:
    """Published minutes grouped by year-month, both levels ascending."""
    if municipality_id not in snapshot.municipality_ids:
        raise NotFoundError(f"unknown municipality {municipality_id!r}")
    minutes = [
        u
        for u in snapshot.units.values()
        if u.kind == "minute" and u.municipality_id == municipality_id
    ]
    minutes.sort(key=lambda u: (u.meeting_date, u.minute_id))
    groups: dict[str, list[str]] = {}
    for unit in minutes:
        groups.setdefault(unit.meeting_date[:7], []).append(unit.minute_id)
    return sorted(groups.items())


def build_snapshot(
    municipalities: Iterable[MunicipalityRecord],
    participants: Iterable[ParticipantRecord],
    minutes: Iterable[MinuteDocument],
    subjects: Iterable[SubjectRecord],
) -> tuple[IndexSnapshot, list[str]]:
    """Deterministically index published minutes and their subjects.

    Records that cannot be indexed (non-published minutes, subjects whose
    minute is missing, units yielding no tokens) are skipped and reported
    in the returned warning list.
    """
    municipalities = list(municipalities)
    minutes = list(minutes)
    subjects = list(subjects)
    warnings: list[str] = []
    participant_by_id = {p.id: p for p in participants}
    subjects_by_minute: dict[str, list[SubjectRecord]] = {}
    for s in sorted(subjects, key=lambda s: (s.minute_id, s.order)):
        subjects_by_minute.setdefault(s.minute_id, []).append(s)

    units: dict[str, IndexUnit] = {}
    published: set[str] = set()
    for minute in sorted(minutes, key=lambda m: m.id):
        if minute.status != "published":
            continue  # not an anomaly: the index only covers published minutes
        published.add(minute.id)
        if minute.metadata is None:
            warnings.append(f"minute {minute.id} skipped: missing metadata")
            continue
        meta = minute.metadata
        parties = sorted(
            {
                participant_by_id[pid].party
                for pid in meta.participant_ids
                if pid in participant_by_id and participant_by_id[pid].party
            }
        )
        minute_subjects = subjects_by_minute.get(minute.id, [])
        minute_topics = sorted({t for s in minute_subjects for t in s.topic_ids})
        base = dict(
            minute_id=minute.id,
            municipality_id=minute.municipality_id,
            parties=tuple(parties),
            participant_ids=tuple(meta.participant_ids),
            meeting_date=meta.meeting_date.isoformat(),
            meeting_type=meta.meeting_type,
        )
        minute_unit = IndexUnit(
            unit_id=f"m:{minute.id}",
            kind="minute",
            subject_id=None,
            topic_ids=tuple(minute_topics),
            title=f"Minutes of {meta.meeting_date.isoformat()}",
            text=minute.raw_text,
            **base,
        )
        units[minute_unit.unit_id] = minute_unit
        for subject in minute_subjects:
            subject_unit = IndexUnit(
                unit_id=f"s:{subject.id}",
                kind="subject",
                subject_id=subject.id,
                topic_ids=tuple(subject.topic_ids),
                title=subject.title,
                text=subject.title + "\n" + subject.summary,
                **base,
            )
            units[subject_unit.unit_id] = subject_unit

    indexed_minutes = {u.minute_id for u in units.values() if u.kind == "minute"}
    for subject in sorted(subjects, key=lambda s: s.id):
        if subject.minute_id in published and subject.minute_id not in indexed_minutes:
            warnings.append(f"subject {subject.id} skipped: minute {subject.minute_id} not indexed")

    postings_builder: dict[str, dict[str, int]] = {}
    doc_lengths: dict[str, int] = {}
    for unit_id in sorted(units):
        tokens = tokenize(units[unit_id].text)
        if not tokens:
            warnings.append(f"unit {unit_id} skipped: no indexable tokens")
            del units[unit_id]
            continue
        doc_lengths[unit_id] = len(tokens)
        for term, tf in sorted(Counter(tokens).items()):
            postings_builder.setdefault(term, {})[unit_id] = tf

    n = len(doc_lengths)
    avg = sum(doc_lengths.values()) / n if n else 0.0
    postings = {
        term: tuple(sorted(entries.items())) for term, entries in sorted(postings_builder.items())
    }
    snapshot = IndexSnapshot(
        units=units,
        postings=postings,
        doc_lengths=doc_lengths,
        avg_doc_length=avg,
        n=n,
        municipality_ids=frozenset(m.id for m in municipalities),
    )
    return snapshot, warnings
