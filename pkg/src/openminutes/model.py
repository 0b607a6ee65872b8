"""Domain records for council minutes plus vote tallying and name resolution.

All record types are immutable value objects; mutation happens by
constructing replacements and committing them through the store. Every
type serializes to JSON with snake_case field names, calendar dates as
``YYYY-MM-DD`` strings, and enums as lowercase strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timezone
from typing import Any

from .errors import LifecycleError, ValidationError
from .text import jaccard, normalize_name, token_set

POSITIONS = ("favor", "against", "abstention")
OUTCOMES = ("approved", "rejected", "tied")
STATUSES = ("uploaded", "extracted", "validated", "published")

MEETING_TYPE_ORDINARY = "ordinary"
MEETING_TYPE_EXTRAORDINARY = "extraordinary"

_SLUG_RE = re.compile(r"^[a-z0-9]+(-[a-z0-9]+)*$")


def utcnow_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _require(condition: bool, message: str, fields: dict[str, str] | None = None) -> None:
    if not condition:
        raise ValidationError(message, fields)


@dataclass(frozen=True)
class MunicipalityRecord:
    id: str
    name: str
    slug: str

    def validate(self) -> None:
        _require(bool(self.name.strip()), "municipality name must be non-empty")
        _require(
            _SLUG_RE.match(self.slug) is not None,
            f"municipality slug {self.slug!r} must be lowercase alphanumeric-and-hyphen",
        )

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "name": self.name, "slug": self.slug}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MunicipalityRecord":
        return cls(id=d["id"], name=d["name"], slug=d["slug"])


@dataclass(frozen=True)
class ParticipantRecord:
    id: str
    full_name: str
    municipality_id: str
    party: str | None = None
    role: str | None = None
    unresolved: bool = False

    def validate(self) -> None:
        _require(bool(self.full_name.strip()), "participant full_name must be non-empty")

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "full_name": self.full_name,
            "party": self.party,
            "role": self.role,
            "municipality_id": self.municipality_id,
            "unresolved": self.unresolved,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ParticipantRecord":
        return cls(
            id=d["id"],
            full_name=d["full_name"],
            party=d.get("party"),
            role=d.get("role"),
            municipality_id=d["municipality_id"],
            unresolved=bool(d.get("unresolved", False)),
        )


@dataclass(frozen=True)
class TopicRecord:
    id: str
    label: str

    def validate(self) -> None:
        _require(bool(self.label.strip()), "topic label must be non-empty")

    def normalized_label(self) -> str:
        return normalize_name(self.label)

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "label": self.label}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TopicRecord":
        return cls(id=d["id"], label=d["label"])


@dataclass(frozen=True)
class MinuteMetadata:
    meeting_date: date
    location: str
    meeting_type: str
    participant_ids: tuple[str, ...] = ()

    def validate(self) -> None:
        _require(isinstance(self.meeting_date, date), "meeting_date must be a calendar date")
        _require(bool(self.meeting_type.strip()), "meeting_type must be non-empty")
        _require(
            len(set(self.participant_ids)) == len(self.participant_ids),
            "participant_ids must be distinct",
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "meeting_date": self.meeting_date.isoformat(),
            "location": self.location,
            "meeting_type": self.meeting_type,
            "participant_ids": list(self.participant_ids),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MinuteMetadata":
        return cls(
            meeting_date=date.fromisoformat(d["meeting_date"]),
            location=d["location"],
            meeting_type=d["meeting_type"],
            participant_ids=tuple(d.get("participant_ids", ())),
        )


@dataclass(frozen=True)
class VotePosition:
    participant_id: str
    position: str

    def validate(self) -> None:
        _require(
            self.position in POSITIONS,
            f"vote position {self.position!r} must be one of {', '.join(POSITIONS)}",
        )

    def to_dict(self) -> dict[str, Any]:
        return {"participant_id": self.participant_id, "position": self.position}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "VotePosition":
        return cls(participant_id=d["participant_id"], position=d["position"])


@dataclass(frozen=True)
class VoteTally:
    favor: int
    against: int
    abstention: int
    outcome: str
    positions: tuple[VotePosition, ...] | None = None

    def validate(self) -> None:
        _require(
            self.favor >= 0 and self.against >= 0 and self.abstention >= 0,
            "tally counts must be non-negative",
        )
        _require(self.outcome in OUTCOMES, f"unknown outcome {self.outcome!r}")
        _require(
            self.outcome == derive_outcome(self.favor, self.against),
            "outcome inconsistent with favor/against counts",
        )
        if self.positions is not None:
            for p in self.positions:
                p.validate()
            counts = {pos: 0 for pos in POSITIONS}
            for p in self.positions:
                counts[p.position] += 1
            _require(
                counts == {"favor": self.favor, "against": self.against, "abstention": self.abstention},
                "per-class counts do not match recorded positions",
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "favor": self.favor,
            "against": self.against,
            "abstention": self.abstention,
            "positions": None if self.positions is None else [p.to_dict() for p in self.positions],
            "outcome": self.outcome,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "VoteTally":
        positions = d.get("positions")
        return cls(
            favor=d["favor"],
            against=d["against"],
            abstention=d["abstention"],
            outcome=d["outcome"],
            positions=None if positions is None else tuple(VotePosition.from_dict(p) for p in positions),
        )


@dataclass(frozen=True)
class SubjectRecord:
    id: str
    minute_id: str
    order: int
    title: str
    summary: str
    topic_ids: tuple[str, ...] = ()
    tally: VoteTally | None = None

    def validate(self) -> None:
        _require(bool(self.title.strip()), "subject title must be non-empty")
        _require(self.order >= 1, "subject order is 1-based")
        if self.tally is not None:
            self.tally.validate()

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "minute_id": self.minute_id,
            "order": self.order,
            "title": self.title,
            "summary": self.summary,
            "topic_ids": list(self.topic_ids),
            "tally": None if self.tally is None else self.tally.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SubjectRecord":
        tally = d.get("tally")
        return cls(
            id=d["id"],
            minute_id=d["minute_id"],
            order=d["order"],
            title=d["title"],
            summary=d["summary"],
            topic_ids=tuple(d.get("topic_ids", ())),
            tally=None if tally is None else VoteTally.from_dict(tally),
        )


@dataclass(frozen=True)
class MinuteDocument:
    id: str
    municipality_id: str
    source_filename: str
    raw_text: str
    status: str = "uploaded"
    metadata: MinuteMetadata | None = None
    subject_ids: tuple[str, ...] = ()
    uploaded_at: str = field(default_factory=utcnow_iso)
    published_at: str | None = None

    def validate(self) -> None:
        _require(bool(self.raw_text), "minute raw_text must be non-empty")
        _require(self.status in STATUSES, f"unknown status {self.status!r}")
        if self.status in ("validated", "published"):
            _require(self.metadata is not None, f"status {self.status} requires metadata")
        if self.metadata is not None:
            self.metadata.validate()

    def advance_to(self, new_status: str) -> "MinuteDocument":
        """Return a copy at ``new_status``; transitions are strictly forward.

        Raises :class:`LifecycleError` when the move would skip or revisit
        a stage.
        """
        _require(new_status in STATUSES, f"unknown status {new_status!r}")
        if STATUSES.index(new_status) != STATUSES.index(self.status) + 1:
            raise LifecycleError(
                f"cannot move minute {self.id} from {self.status} to {new_status}",
                current_status=self.status,
            )
        updated = replace(self, status=new_status)
        if new_status == "published":
            updated = replace(updated, published_at=utcnow_iso())
        return updated

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "municipality_id": self.municipality_id,
            "source_filename": self.source_filename,
            "raw_text": self.raw_text,
            "status": self.status,
            "metadata": None if self.metadata is None else self.metadata.to_dict(),
            "subject_ids": list(self.subject_ids),
            "uploaded_at": self.uploaded_at,
            "published_at": self.published_at,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MinuteDocument":
        metadata = d.get("metadata")
        return cls(
            id=d["id"],
            municipality_id=d["municipality_id"],
            source_filename=d["source_filename"],
            raw_text=d["raw_text"],
            status=d["status"],
            metadata=None if metadata is None else MinuteMetadata.from_dict(metadata),
            subject_ids=tuple(d.get("subject_ids", ())),
            uploaded_at=d["uploaded_at"],
            published_at=d.get("published_at"),
        )


@dataclass(frozen=True)
class NewsletterSubscriber:
    email: str
    subscribed_at: str = field(default_factory=utcnow_iso)
    municipality_ids: tuple[str, ...] = ()

    def validate(self) -> None:
        _require(is_valid_email(self.email), f"invalid email address {self.email!r}", {"email": "invalid email"})

    def normalized_email(self) -> str:
        return self.email.strip().casefold()

    def to_dict(self) -> dict[str, Any]:
        return {
            "email": self.email,
            "subscribed_at": self.subscribed_at,
            "municipality_ids": list(self.municipality_ids),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "NewsletterSubscriber":
        return cls(
            email=d["email"],
            subscribed_at=d["subscribed_at"],
            municipality_ids=tuple(d.get("municipality_ids", ())),
        )


def is_valid_email(email: str) -> bool:
    """Syntactic check only: exactly one '@', non-empty local and domain."""
    email = email.strip()
    if email.count("@") != 1:
        return False
    local, domain = email.split("@")
    return bool(local) and bool(domain)


def derive_outcome(favor: int, against: int) -> str:
    """Approved iff favor > against, rejected iff against > favor, else tied.

    Abstentions never influence the outcome.
    """
    if favor > against:
        return "approved"
    if against > favor:
        return "rejected"
    return "tied"


def tally_votes(positions: list[VotePosition] | tuple[VotePosition, ...]) -> VoteTally:
    """Count per-class positions into a tally with a derived outcome.

    Rejects duplicate voters: each participant may hold one position.
    """
    seen: set[str] = set()
    counts = {pos: 0 for pos in POSITIONS}
    for p in positions:
        p.validate()
        if p.participant_id in seen:
            raise ValidationError(f"participant {p.participant_id} voted more than once")
        seen.add(p.participant_id)
        counts[p.position] += 1
    return VoteTally(
        favor=counts["favor"],
        against=counts["against"],
        abstention=counts["abstention"],
        positions=tuple(positions),
        outcome=derive_outcome(counts["favor"], counts["against"]),
    )


@dataclass(frozen=True)
class Resolution:
    """Outcome of matching an extracted name against the registry.

    ``matched`` carries the id of an existing participant; otherwise a
    provisional record (``unresolved=True``) is proposed for review.
    """

    matched_id: str | None = None
    provisional: ParticipantRecord | None = None

    @property
    def is_matched(self) -> bool:
        return self.matched_id is not None


JACCARD_THRESHOLD = 0.6


def provisional_participant_id(municipality_id: str, raw_name: str) -> str:
    from .text import slugify

    return f"{municipality_id}-p-{slugify(raw_name)}"


def resolve_participant(
    raw_name: str,
    registry: list[ParticipantRecord] | tuple[ParticipantRecord, ...],
    municipality_id: str,
    party: str | None = None,
    role: str | None = None,
) -> Resolution:
    """Match a raw extracted name against the participant registry.

    Exact match on normalized names wins; otherwise the unique best
    token-set Jaccard candidate at or above ``JACCARD_THRESHOLD`` is
    taken. Ties at the best similarity, or no candidate, fall through to
    a provisional record carrying the raw name. Never raises.
    """
    normalized = normalize_name(raw_name)
    exact = [r for r in registry if normalize_name(r.full_name) == normalized]
    if len(exact) == 1:
        return Resolution(matched_id=exact[0].id)

    if len(exact) < 2:
        raw_tokens = token_set(raw_name)
        scored = [(jaccard(raw_tokens, token_set(r.full_name)), r) for r in registry]
        eligible = [(s, r) for s, r in scored if s >= JACCARD_THRESHOLD]
        if eligible:
            best = max(s for s, _ in eligible)
            at_best = [r for s, r in eligible if s == best]
            if len(at_best) == 1:
                return Resolution(matched_id=at_best[0].id)

    provisional = ParticipantRecord(
        id=provisional_participant_id(municipality_id, raw_name),
        full_name=raw_name.strip(),
        municipality_id=municipality_id,
        party=party,
        role=role,
        unresolved=True,
    )
    return Resolution(provisional=provisional)
