"""Turn raw minute text into validated, cross-referenced records.

Two interchangeable extractors produce the same three-layer result
(metadata, subjects, votes): a remote LLM behind a small HTTP client and
a deterministic rule-based parser for the normalized fixture format. The
resolution step cross-references extracted names and labels against the
participant and topic registries.

Normalized minute format (UTF-8, LF): five fixed header lines
``MUNICIPIO:`` / ``DATA:`` / ``LOCAL:`` / ``TIPO:`` / ``PRESENCAS:``,
then zero or more subject blocks: ``ASSUNTO: <title>``, an optional
``TEMAS: <label; label>`` topic line, free-text summary lines, and an
optional terminating ``VOTACAO: favor: ... | contra: ... | abstencao: ...``
line (any clause may be absent).
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from datetime import date
from typing import Any, Protocol

import jsonschema

from .errors import (
    ConfigError,
    ExtractionInvalidError,
    ParseError,
    TransportError,
    ValidationError,
)
from .model import (
    MinuteMetadata,
    MunicipalityRecord,
    ParticipantRecord,
    SubjectRecord,
    TopicRecord,
    VotePosition,
    resolve_participant,
    tally_votes,
)
from .text import normalize_name, slugify

LAYERS = ("metadata", "subjects", "votes")

DOCUMENT_PLACEHOLDER = "<<DOCUMENT>>"

# Accepted spellings for vote positions across the bilingual corpus,
# keyed by their accent-stripped casefolded form.
POSITION_LABELS = {
    "favor": "favor",
    "a favor": "favor",
    "in favor": "favor",
    "contra": "against",
    "against": "against",
    "abstencao": "abstention",
    "abstention": "abstention",
    "abstained": "abstention",
}

MEETING_TYPE_LABELS = {
    "ordinaria": "ordinary",
    "ordinary": "ordinary",
    "extraordinaria": "extraordinary",
    "extraordinary": "extraordinary",
}

DATE_FORMATS_HELP = "accepted date formats: YYYY-MM-DD, DD-MM-YYYY"

_ISO_DATE_RE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")
_DAY_FIRST_RE = re.compile(r"^(\d{2})-(\d{2})-(\d{4})$")


def normalize_position(label: str) -> str | None:
    """Map a raw position label to favor/against/abstention, or None."""
    return POSITION_LABELS.get(normalize_name(label))


def canonical_meeting_type(raw: str) -> str:
    """Fold known ordinary/extraordinary spellings; keep other labels."""
    return MEETING_TYPE_LABELS.get(normalize_name(raw), raw.strip())


def parse_minute_date(raw: str) -> date:
    """Parse ``YYYY-MM-DD`` or day-first ``DD-MM-YYYY``; reject the rest."""
    value = raw.strip()
    iso = _ISO_DATE_RE.match(value)
    day_first = _DAY_FIRST_RE.match(value)
    try:
        if iso:
            return date(int(iso.group(1)), int(iso.group(2)), int(iso.group(3)))
        if day_first:
            return date(int(day_first.group(3)), int(day_first.group(2)), int(day_first.group(1)))
    except ValueError as exc:
        raise ValidationError(f"invalid calendar date {value!r}") from exc
    raise ValidationError(f"cannot parse date {value!r}; {DATE_FORMATS_HELP}")


# --------------------------------------------------------------------------
# Extraction result (the three layers, before resolution)


@dataclass(frozen=True)
class RawParticipant:
    name: str
    party: str | None = None
    role: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "party": self.party, "role": self.role}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RawParticipant":
        return cls(name=d["name"], party=d.get("party"), role=d.get("role"))


@dataclass(frozen=True)
class RawVote:
    participant_name: str
    position: str

    def to_dict(self) -> dict[str, Any]:
        return {"participant_name": self.participant_name, "position": self.position}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RawVote":
        return cls(participant_name=d["participant_name"], position=d["position"])


@dataclass(frozen=True)
class RawMetadata:
    meeting_date: str
    location: str
    meeting_type: str
    participants: tuple[RawParticipant, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "meeting_date": self.meeting_date,
            "location": self.location,
            "meeting_type": self.meeting_type,
            "participants": [p.to_dict() for p in self.participants],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RawMetadata":
        return cls(
            meeting_date=d["meeting_date"],
            location=d["location"],
            meeting_type=d["meeting_type"],
            participants=tuple(RawParticipant.from_dict(p) for p in d.get("participants", ())),
        )


@dataclass(frozen=True)
class RawSubject:
    title: str
    summary: str
    topic_labels: tuple[str, ...] = ()
    votes: tuple[RawVote, ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "summary": self.summary,
            "topic_labels": list(self.topic_labels),
            "votes": None if self.votes is None else [v.to_dict() for v in self.votes],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RawSubject":
        votes = d.get("votes")
        return cls(
            title=d["title"],
            summary=d["summary"],
            topic_labels=tuple(d.get("topic_labels", ())),
            votes=None if votes is None else tuple(RawVote.from_dict(v) for v in votes),
        )


@dataclass(frozen=True)
class ExtractionResult:
    metadata_raw: RawMetadata
    subjects_raw: tuple[RawSubject, ...]
    extractor_id: str
    model_id: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "metadata_raw": self.metadata_raw.to_dict(),
            "subjects_raw": [s.to_dict() for s in self.subjects_raw],
            "extractor_id": self.extractor_id,
            "model_id": self.model_id,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExtractionResult":
        return cls(
            metadata_raw=RawMetadata.from_dict(d["metadata_raw"]),
            subjects_raw=tuple(RawSubject.from_dict(s) for s in d["subjects_raw"]),
            extractor_id=d["extractor_id"],
            model_id=d.get("model_id"),
        )


# --------------------------------------------------------------------------
# Prompt templates and the LLM path

METADATA_SCHEMA = {
    "type": "object",
    "required": ["meeting_date", "location", "meeting_type", "participants"],
    "properties": {
        "meeting_date": {"type": "string"},
        "location": {"type": "string"},
        "meeting_type": {"type": "string"},
        "participants": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "party": {"type": ["string", "null"]},
                    "role": {"type": ["string", "null"]},
                },
            },
        },
    },
}

SUBJECTS_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["title", "summary"],
        "properties": {
            "title": {"type": "string", "minLength": 1},
            "summary": {"type": "string"},
            "topic_labels": {"type": "array", "items": {"type": "string"}},
        },
    },
}

VOTES_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["subject_order", "votes"],
        "properties": {
            "subject_order": {"type": "integer", "minimum": 1},
            "votes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["participant_name", "position"],
                    "properties": {
                        "participant_name": {"type": "string", "minLength": 1},
                        "position": {"type": "string"},
                    },
                },
            },
        },
    },
}


@dataclass(frozen=True)
class PromptTemplate:
    layer: str
    template_text: str
    response_schema: dict[str, Any]

    def validate(self) -> None:
        if self.layer not in LAYERS:
            raise ConfigError(f"unknown extraction layer {self.layer!r}")
        occurrences = self.template_text.count(DOCUMENT_PLACEHOLDER)
        if occurrences != 1:
            raise ConfigError(
                f"template for layer {self.layer} must contain {DOCUMENT_PLACEHOLDER} "
                f"exactly once (found {occurrences})"
            )


def _template(layer: str, task: str, schema: dict[str, Any]) -> PromptTemplate:
    text = (
        f"You are given the full text of a municipal council meeting minute.\n"
        f"{task}\n"
        f"Answer with a single JSON value matching this schema and nothing else:\n"
        f"{json.dumps(schema, indent=2)}\n\n"
        f"Minute text:\n{DOCUMENT_PLACEHOLDER}\n"
    )
    return PromptTemplate(layer=layer, template_text=text, response_schema=schema)


DEFAULT_TEMPLATES: dict[str, PromptTemplate] = {
    "metadata": _template(
        "metadata",
        "Extract the meeting metadata: date, location, meeting type, and the "
        "list of participants with party and role when stated.",
        METADATA_SCHEMA,
    ),
    "subjects": _template(
        "subjects",
        "Extract every subject of discussion in document order, with a short "
        "title, a summary, and topic labels.",
        SUBJECTS_SCHEMA,
    ),
    "votes": _template(
        "votes",
        "Extract the voting record of each voted subject. subject_order is the "
        "1-based position of the subject in the document. Each position must be "
        "one of: favor, against, abstention.",
        VOTES_SCHEMA,
    ),
}

CORRECTIVE_INSTRUCTION = (
    "The previous answer was not valid JSON for the required schema. "
    "Answer again with only a JSON value that matches the schema exactly."
)


def build_prompt(
    layer: str, minute_text: str, templates: dict[str, PromptTemplate] | None = None
) -> str:
    """Fill the layer template with the document text, verbatim."""
    templates = templates or DEFAULT_TEMPLATES
    if layer not in templates:
        raise ConfigError(f"no prompt template for layer {layer!r}")
    template = templates[layer]
    template.validate()
    return template.template_text.replace(DOCUMENT_PLACEHOLDER, minute_text)


@dataclass(frozen=True)
class LlmClientConfig:
    endpoint_url: str
    api_key_env_var_name: str
    model_id: str
    timeout: float = 60.0
    max_retries: int = 2

    def validate(self) -> None:
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be non-negative")


class CompletionClient(Protocol):
    model_id: str

    def complete(self, prompt: str) -> str: ...


class LlmClient:
    """Minimal JSON-over-HTTP completion client.

    POSTs ``{model, prompt, response_format: "json"}`` and returns the
    ``text`` field of the JSON response. The API key comes from the
    environment variable named in the config, never from files.
    """

    def __init__(self, config: LlmClientConfig):
        config.validate()
        self.config = config
        self.model_id = config.model_id

    def complete(self, prompt: str) -> str:
        import httpx

        api_key = os.environ.get(self.config.api_key_env_var_name)
        if not api_key:
            raise ConfigError(
                f"environment variable {self.config.api_key_env_var_name} is not set"
            )
        body = {"model": self.config.model_id, "prompt": prompt, "response_format": "json"}
        headers = {"Authorization": f"Bearer {api_key}"}
        last_error: Exception | None = None
        for _ in range(self.config.max_retries + 1):
            try:
                response = httpx.post(
                    self.config.endpoint_url,
                    json=body,
                    headers=headers,
                    timeout=self.config.timeout,
                )
                if response.status_code >= 500:
                    last_error = TransportError(f"server error {response.status_code}")
                    continue
                if response.status_code >= 400:
                    raise TransportError(f"request rejected: {response.status_code} {response.text}")
                payload = response.json()
                if "text" not in payload:
                    raise TransportError("malformed completion response: missing 'text'")
                return str(payload["text"])
            except httpx.HTTPError as exc:
                last_error = exc
        raise TransportError(f"completion request failed after retries: {last_error}")


def _request_layer(client: CompletionClient, layer: str, prompt: str, schema: dict[str, Any]) -> Any:
    raw = client.complete(prompt)
    for attempt in (0, 1):
        try:
            parsed = json.loads(raw)
            jsonschema.validate(parsed, schema)
            return parsed
        except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
            if attempt == 1:
                raise ExtractionInvalidError(
                    layer, f"layer {layer} response failed validation: {exc}", raw_response=raw
                ) from exc
            raw = client.complete(prompt + "\n\n" + CORRECTIVE_INSTRUCTION)
    raise AssertionError("unreachable")


def _normalized_vote(layer: str, entry: dict[str, Any]) -> RawVote:
    position = normalize_position(entry["position"])
    if position is None:
        raise ExtractionInvalidError(
            layer,
            f"unknown vote position label {entry['position']!r}",
            raw_response=json.dumps(entry),
        )
    return RawVote(participant_name=entry["participant_name"], position=position)


def extract_llm(
    client: CompletionClient,
    minute_text: str,
    templates: dict[str, PromptTemplate] | None = None,
) -> ExtractionResult:
    """Run the three extraction layers through the completion client.

    One request per layer; a schema-invalid response earns one corrective
    retry for that layer before the extraction fails.
    """
    templates = templates or DEFAULT_TEMPLATES
    responses: dict[str, Any] = {}
    for layer in LAYERS:
        prompt = build_prompt(layer, minute_text, templates)
        responses[layer] = _request_layer(client, layer, prompt, templates[layer].response_schema)

    meta = responses["metadata"]
    metadata_raw = RawMetadata(
        meeting_date=meta["meeting_date"],
        location=meta["location"],
        meeting_type=meta["meeting_type"],
        participants=tuple(
            RawParticipant(name=p["name"], party=p.get("party"), role=p.get("role"))
            for p in meta["participants"]
        ),
    )

    subjects = [
        RawSubject(
            title=s["title"],
            summary=s["summary"],
            topic_labels=tuple(s.get("topic_labels", ())),
            votes=None,
        )
        for s in responses["subjects"]
    ]

    for entry in responses["votes"]:
        order = entry["subject_order"]
        if not 1 <= order <= len(subjects):
            raise ExtractionInvalidError(
                "votes",
                f"vote entry references subject_order {order} outside 1..{len(subjects)}",
                raw_response=json.dumps(entry),
            )
        votes = tuple(_normalized_vote("votes", v) for v in entry["votes"])
        current = subjects[order - 1]
        subjects[order - 1] = RawSubject(
            title=current.title,
            summary=current.summary,
            topic_labels=current.topic_labels,
            votes=votes,
        )

    return ExtractionResult(
        metadata_raw=metadata_raw,
        subjects_raw=tuple(subjects),
        extractor_id="llm",
        model_id=client.model_id,
    )


# --------------------------------------------------------------------------
# Rule-based path over the normalized minute format

_HEADER_KEYS = ("MUNICIPIO", "DATA", "LOCAL", "TIPO", "PRESENCAS")

_PRESENCE_RE = re.compile(r"^(?P<name>[^()]+?)\s*(?:\((?P<inner>[^)]*)\))?$")

_VOTE_CLAUSE_KEYS = {"favor": "favor", "contra": "against", "abstencao": "abstention"}


def _parse_presences(value: str) -> tuple[RawParticipant, ...]:
    participants: list[RawParticipant] = []
    for chunk in value.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        match = _PRESENCE_RE.match(chunk)
        if not match or not match.group("name").strip():
            raise ParseError(f"line 5: cannot parse attendee entry {chunk!r}", line=5)
        name = match.group("name").strip()
        party = role = None
        inner = match.group("inner")
        if inner is not None:
            parts = [p.strip() for p in inner.split(",", 1)]
            party = parts[0] or None
            if len(parts) == 2:
                role = parts[1] or None
        participants.append(RawParticipant(name=name, party=party, role=role))
    return tuple(participants)


def _parse_vote_line(value: str, subject_title: str) -> tuple[RawVote, ...]:
    votes: list[RawVote] = []
    seen_clauses: set[str] = set()
    for clause in value.split("|"):
        clause = clause.strip()
        if not clause:
            continue
        key, sep, names = clause.partition(":")
        normalized_key = normalize_name(key)
        if not sep or normalized_key not in _VOTE_CLAUSE_KEYS:
            raise ParseError(
                f"subject {subject_title!r}: malformed vote clause {clause!r}"
            )
        if normalized_key in seen_clauses:
            raise ParseError(
                f"subject {subject_title!r}: duplicate vote clause {key.strip()!r}"
            )
        seen_clauses.add(normalized_key)
        position = _VOTE_CLAUSE_KEYS[normalized_key]
        for name in names.split(";"):
            name = name.strip()
            if name:
                votes.append(RawVote(participant_name=name, position=position))
    return tuple(votes)


class _BlockBuilder:
    def __init__(self, title: str):
        self.title = title
        self.topic_labels: list[str] = []
        self.summary_lines: list[str] = []
        self.votes: tuple[RawVote, ...] | None = None

    def build(self) -> RawSubject:
        return RawSubject(
            title=self.title,
            summary="\n".join(self.summary_lines).strip(),
            topic_labels=tuple(self.topic_labels),
            votes=self.votes,
        )


def extract_rule_based(minute_text: str) -> ExtractionResult:
    """Deterministic extractor for the normalized minute format.

    Equal input bytes yield a structurally equal result; used for offline
    pipeline runs and as the reference shape for the LLM path.
    """
    lines = [line.rstrip("\r") for line in minute_text.split("\n")]

    header: dict[str, str] = {}
    for index, key in enumerate(_HEADER_KEYS, start=1):
        if index > len(lines) or not lines[index - 1].startswith(key + ":"):
            raise ParseError(f"line {index}: expected '{key}:' header line", line=index)
        header[key] = lines[index - 1][len(key) + 1 :].strip()

    metadata_raw = RawMetadata(
        meeting_date=header["DATA"],
        location=header["LOCAL"],
        meeting_type=header["TIPO"],
        participants=_parse_presences(header["PRESENCAS"]),
    )

    subjects: list[RawSubject] = []
    block: _BlockBuilder | None = None
    block_closed = False

    for number, line in enumerate(lines[5:], start=6):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("ASSUNTO:"):
            if block is not None:
                subjects.append(block.build())
            title = stripped[len("ASSUNTO:") :].strip()
            if not title:
                raise ParseError(f"line {number}: subject title is empty", line=number)
            block = _BlockBuilder(title)
            block_closed = False
            continue
        if block is None:
            raise ParseError(
                f"line {number}: content outside a subject block", line=number
            )
        if block_closed:
            raise ParseError(
                f"line {number}: content after the vote line of subject {block.title!r}",
                line=number,
            )
        if stripped.startswith("TEMAS:"):
            labels = [t.strip() for t in stripped[len("TEMAS:") :].split(";")]
            block.topic_labels.extend(t for t in labels if t)
            continue
        if stripped.startswith("VOTACAO:"):
            block.votes = _parse_vote_line(stripped[len("VOTACAO:") :], block.title)
            block_closed = True
            continue
        block.summary_lines.append(stripped)

    if block is not None:
        subjects.append(block.build())

    return ExtractionResult(
        metadata_raw=metadata_raw,
        subjects_raw=tuple(subjects),
        extractor_id="rule",
        model_id=None,
    )


# --------------------------------------------------------------------------
# Resolution against registries


@dataclass(frozen=True)
class ResolvedMinute:
    """Validated output of one minute, ready to commit.

    ``new_participants`` and ``new_topics`` are the registry entries the
    resolution had to create (provisional participants, fresh topics).
    """

    metadata: MinuteMetadata
    subjects: tuple[SubjectRecord, ...]
    new_participants: tuple[ParticipantRecord, ...]
    new_topics: tuple[TopicRecord, ...]

    @property
    def unresolved_names(self) -> tuple[str, ...]:
        return tuple(p.full_name for p in self.new_participants if p.unresolved)


@dataclass
class _Resolver:
    municipality_id: str
    registry: list[ParticipantRecord] = field(default_factory=list)
    created: list[ParticipantRecord] = field(default_factory=list)

    def resolve(self, name: str, party: str | None = None, role: str | None = None) -> str:
        resolution = resolve_participant(name, self.registry, self.municipality_id, party, role)
        if resolution.is_matched:
            return resolution.matched_id
        record = resolution.provisional
        taken = {r.id for r in self.registry}
        if record.id in taken:
            base = record.id
            suffix = 2
            while f"{base}-{suffix}" in taken:
                suffix += 1
            record = ParticipantRecord(
                id=f"{base}-{suffix}",
                full_name=record.full_name,
                municipality_id=record.municipality_id,
                party=record.party,
                role=record.role,
                unresolved=True,
            )
        self.registry.append(record)
        self.created.append(record)
        return record.id


class _TopicResolver:
    def __init__(self, topics: list[TopicRecord]):
        self.by_normalized = {t.normalized_label(): t for t in topics}
        self.taken_ids = {t.id for t in topics}
        self.created: list[TopicRecord] = []

    def resolve(self, label: str) -> str:
        normalized = normalize_name(label)
        existing = self.by_normalized.get(normalized)
        if existing is not None:
            return existing.id
        topic_id = f"t-{slugify(label)}"
        if topic_id in self.taken_ids:
            suffix = 2
            while f"{topic_id}-{suffix}" in self.taken_ids:
                suffix += 1
            topic_id = f"{topic_id}-{suffix}"
        record = TopicRecord(id=topic_id, label=label.strip())
        self.by_normalized[normalized] = record
        self.taken_ids.add(topic_id)
        self.created.append(record)
        return record.id


def subject_record_id(minute_id: str, order: int) -> str:
    return f"{minute_id}-s{order}"


def validate_and_resolve(
    result: ExtractionResult,
    minute_id: str,
    municipality_id: str,
    participants: list[ParticipantRecord] | tuple[ParticipantRecord, ...],
    topics: list[TopicRecord] | tuple[TopicRecord, ...],
) -> ResolvedMinute:
    """Validate an extraction result and cross-reference its entities.

    Dates are parsed (ISO or day-first), every name runs through
    participant resolution, unknown topic labels become new topics, and
    per-subject votes are tallied. Raises :class:`ValidationError` on an
    unparseable date or a duplicate voter within one subject.
    """
    meeting_date = parse_minute_date(result.metadata_raw.meeting_date)
    resolver = _Resolver(municipality_id=municipality_id, registry=list(participants))
    topic_resolver = _TopicResolver(list(topics))

    participant_ids: list[str] = []
    for raw in result.metadata_raw.participants:
        pid = resolver.resolve(raw.name, raw.party, raw.role)
        if pid not in participant_ids:
            participant_ids.append(pid)

    metadata = MinuteMetadata(
        meeting_date=meeting_date,
        location=result.metadata_raw.location,
        meeting_type=canonical_meeting_type(result.metadata_raw.meeting_type),
        participant_ids=tuple(participant_ids),
    )
    metadata.validate()

    subjects: list[SubjectRecord] = []
    for order, raw_subject in enumerate(result.subjects_raw, start=1):
        topic_ids = []
        for label in raw_subject.topic_labels:
            tid = topic_resolver.resolve(label)
            if tid not in topic_ids:
                topic_ids.append(tid)
        tally = None
        if raw_subject.votes is not None:
            positions = []
            seen_voters: set[str] = set()
            for vote in raw_subject.votes:
                position = normalize_position(vote.position)
                if position is None:
                    raise ValidationError(
                        f"subject {raw_subject.title!r}: unknown vote position "
                        f"{vote.position!r}"
                    )
                pid = resolver.resolve(vote.participant_name)
                if pid in seen_voters:
                    raise ValidationError(
                        f"subject {raw_subject.title!r}: participant "
                        f"{vote.participant_name!r} voted more than once"
                    )
                seen_voters.add(pid)
                positions.append(VotePosition(participant_id=pid, position=position))
            tally = tally_votes(positions)
        subject = SubjectRecord(
            id=subject_record_id(minute_id, order),
            minute_id=minute_id,
            order=order,
            title=raw_subject.title,
            summary=raw_subject.summary,
            topic_ids=tuple(topic_ids),
            tally=tally,
        )
        subject.validate()
        subjects.append(subject)

    return ResolvedMinute(
        metadata=metadata,
        subjects=tuple(subjects),
        new_participants=tuple(resolver.created),
        new_topics=tuple(topic_resolver.created),
    )


# --------------------------------------------------------------------------
# Rendering resolved records back into the normalized format


def _format_attendee(record: ParticipantRecord) -> str:
    if record.role:
        return f"{record.full_name} ({record.party or ''}, {record.role})"
    if record.party:
        return f"{record.full_name} ({record.party})"
    return record.full_name


def render_minute(
    municipality: MunicipalityRecord,
    metadata: MinuteMetadata,
    subjects: list[SubjectRecord] | tuple[SubjectRecord, ...],
    participants_by_id: dict[str, ParticipantRecord],
    topics_by_id: dict[str, TopicRecord],
) -> str:
    """Render a resolved minute as normalized-format text.

    Re-extracting and re-resolving the rendered text reproduces the
    resolved structure, which makes the format a lossless fixture medium.
    """
    lines = [
        f"MUNICIPIO: {municipality.name}",
        f"DATA: {metadata.meeting_date.isoformat()}",
        f"LOCAL: {metadata.location}",
        f"TIPO: {metadata.meeting_type}",
        "PRESENCAS: "
        + "; ".join(_format_attendee(participants_by_id[pid]) for pid in metadata.participant_ids),
    ]
    for subject in sorted(subjects, key=lambda s: s.order):
        lines.append("")
        lines.append(f"ASSUNTO: {subject.title}")
        if subject.topic_ids:
            lines.append(
                "TEMAS: " + "; ".join(topics_by_id[tid].label for tid in subject.topic_ids)
            )
        if subject.summary:
            lines.extend(subject.summary.split("\n"))
        if subject.tally is not None and subject.tally.positions is not None:
            clauses = []
            for clause_key, position in (("favor", "favor"), ("contra", "against"), ("abstencao", "abstention")):
                names = [
                    participants_by_id[p.participant_id].full_name
                    for p in subject.tally.positions
                    if p.position == position
                ]
                if names:
                    clauses.append(f"{clause_key}: " + "; ".join(names))
            lines.append("VOTACAO: " + " | ".join(clauses) if clauses else "VOTACAO:")
    return "\n".join(lines) + "\n"
