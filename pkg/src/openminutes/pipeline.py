"""Minute lifecycle operations shared by the HTTP API and the CLI.

The pure ``op_*`` functions mutate an in-memory :class:`Dataset` and
enforce the lifecycle rules (uploaded → extracted → validated →
published, strictly forward). :class:`MinuteService` wraps them in store
transactions so both entry points produce identical state transitions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime
from typing import Any

from .errors import (
    ConfigError,
    ExtractionInvalidError,
    LifecycleError,
    NotFoundError,
    ParseError,
    TransportError,
    ValidationError,
)
from .extraction import (
    CompletionClient,
    ExtractionResult,
    ResolvedMinute,
    extract_llm,
    extract_rule_based,
    validate_and_resolve,
)
from .model import (
    MinuteDocument,
    MunicipalityRecord,
    NewsletterSubscriber,
    is_valid_email,
    utcnow_iso,
)
from .search import IndexSnapshot, build_snapshot
from .store import Dataset, Store
from .text import slugify

EXTRACTORS = ("rule", "llm")

_MINUTE_ID_RE = re.compile(r"^min-(\d+)$")


def ensure_municipality(dataset: Dataset, ref: str) -> MunicipalityRecord:
    """Find a municipality by slug or id, creating it when absent."""
    slug = slugify(ref)
    if not slug:
        raise ValidationError(f"cannot derive a municipality slug from {ref!r}")
    for record in dataset.municipalities.values():
        if record.id == ref or record.slug == slug:
            return record
    name = ref.strip() if ref.strip() != slug else slug.replace("-", " ").title()
    record = MunicipalityRecord(id=f"mun-{slug}", name=name, slug=slug)
    record.validate()
    dataset.municipalities[record.id] = record
    return record


def _next_minute_id(dataset: Dataset) -> str:
    highest = 0
    for minute_id in dataset.minutes:
        match = _MINUTE_ID_RE.match(minute_id)
        if match:
            highest = max(highest, int(match.group(1)))
    return f"min-{highest + 1:06d}"


def _require_minute(dataset: Dataset, minute_id: str) -> MinuteDocument:
    minute = dataset.minutes.get(minute_id)
    if minute is None:
        raise NotFoundError(f"minute {minute_id} not found")
    return minute


def op_upload(
    dataset: Dataset, municipality_ref: str, raw_text: str, source_filename: str
) -> MinuteDocument:
    if not raw_text.strip():
        raise ValidationError("minute text is empty")
    municipality = ensure_municipality(dataset, municipality_ref)
    minute = MinuteDocument(
        id=_next_minute_id(dataset),
        municipality_id=municipality.id,
        source_filename=source_filename,
        raw_text=raw_text,
        status="uploaded",
        metadata=None,
        subject_ids=(),
        uploaded_at=utcnow_iso(),
        published_at=None,
    )
    minute.validate()
    dataset.minutes[minute.id] = minute
    return minute


def op_record_extraction(
    dataset: Dataset, minute_id: str, result: ExtractionResult
) -> MinuteDocument:
    """Store a successful extraction and advance uploaded → extracted."""
    minute = _require_minute(dataset, minute_id)
    if minute.status not in ("uploaded", "extracted"):
        raise LifecycleError(
            f"cannot record extraction for minute in status {minute.status}",
            current_status=minute.status,
        )
    dataset.extractions[minute_id] = result
    dataset.extraction_errors.pop(minute_id, None)
    if minute.status == "uploaded":
        minute = minute.advance_to("extracted")
        dataset.minutes[minute_id] = minute
    return minute


def op_record_extraction_failure(dataset: Dataset, minute_id: str, error: str) -> None:
    """Keep the minute in its current status; make the failure retrievable."""
    _require_minute(dataset, minute_id)
    dataset.extraction_errors[minute_id] = error
    dataset.extractions.pop(minute_id, None)


@dataclass(frozen=True)
class ResolutionPreview:
    ok: bool
    errors: tuple[str, ...]
    unresolved_names: tuple[str, ...]
    new_topic_labels: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "errors": list(self.errors),
            "unresolved_names": list(self.unresolved_names),
            "new_topic_labels": list(self.new_topic_labels),
        }


def _resolve_extraction(dataset: Dataset, minute: MinuteDocument) -> ResolvedMinute:
    result = dataset.extractions.get(minute.id)
    if result is None:
        raise ValidationError(f"minute {minute.id} has no extraction draft")
    registry = sorted(
        (
            p
            for p in dataset.participants.values()
            if p.municipality_id == minute.municipality_id
        ),
        key=lambda p: p.id,
    )
    topics = sorted(dataset.topics.values(), key=lambda t: t.id)
    return validate_and_resolve(result, minute.id, minute.municipality_id, registry, topics)


def preview_resolution(dataset: Dataset, minute_id: str) -> ResolutionPreview:
    """Dry-run resolution of the stored draft, reporting what validate would do."""
    minute = _require_minute(dataset, minute_id)
    try:
        resolved = _resolve_extraction(dataset, minute)
    except ValidationError as exc:
        return ResolutionPreview(
            ok=False, errors=(str(exc),), unresolved_names=(), new_topic_labels=()
        )
    return ResolutionPreview(
        ok=True,
        errors=(),
        unresolved_names=resolved.unresolved_names,
        new_topic_labels=tuple(t.label for t in resolved.new_topics),
    )


def op_store_draft(
    dataset: Dataset, minute_id: str, result: ExtractionResult
) -> ExtractionResult | None:
    """Replace the extraction draft with operator edits; return the prior one.

    Accepted at status uploaded too (hand-authored draft after a failed
    extraction), which advances the minute to extracted.
    """
    previous = dataset.extractions.get(minute_id)
    op_record_extraction(dataset, minute_id, result)
    return previous


def op_validate(
    dataset: Dataset, minute_id: str, ack_unresolved: bool = False
) -> MinuteDocument:
    """Resolve the draft and advance extracted → validated.

    Refuses when resolution fails or when provisional participants would
    be created without ``ack_unresolved``.
    """
    minute = _require_minute(dataset, minute_id)
    if minute.status != "extracted":
        raise LifecycleError(
            f"cannot validate minute in status {minute.status}",
            current_status=minute.status,
        )
    resolved = _resolve_extraction(dataset, minute)
    if resolved.unresolved_names and not ack_unresolved:
        raise ValidationError(
            "unresolved participants need acknowledgment: "
            + ", ".join(resolved.unresolved_names),
            fields={"unresolved_names": ", ".join(resolved.unresolved_names)},
        )
    for participant in resolved.new_participants:
        dataset.participants[participant.id] = participant
    for topic in resolved.new_topics:
        dataset.topics[topic.id] = topic
    for sid in minute.subject_ids:
        dataset.subjects.pop(sid, None)
    for subject in resolved.subjects:
        dataset.subjects[subject.id] = subject
    updated = MinuteDocument(
        id=minute.id,
        municipality_id=minute.municipality_id,
        source_filename=minute.source_filename,
        raw_text=minute.raw_text,
        status=minute.status,
        metadata=resolved.metadata,
        subject_ids=tuple(s.id for s in resolved.subjects),
        uploaded_at=minute.uploaded_at,
        published_at=minute.published_at,
    ).advance_to("validated")
    dataset.minutes[minute_id] = updated
    return updated


def op_publish(dataset: Dataset, minute_id: str) -> MinuteDocument:
    minute = _require_minute(dataset, minute_id)
    updated = minute.advance_to("published")
    dataset.minutes[minute_id] = updated
    return updated


def op_subscribe(
    dataset: Dataset, email: str, municipality_ids: tuple[str, ...] = ()
) -> tuple[NewsletterSubscriber, bool]:
    """Idempotent on normalized email; returns (record, created)."""
    if not is_valid_email(email):
        raise ValidationError(f"invalid email address {email!r}", fields={"email": "invalid"})
    for mid in municipality_ids:
        if mid not in dataset.municipalities:
            raise ValidationError(
                f"unknown municipality {mid}", fields={"municipality_ids": mid}
            )
    key = email.strip().casefold()
    existing = dataset.subscribers.get(key)
    if existing is not None:
        return existing, False
    record = NewsletterSubscriber(
        email=email.strip(),
        subscribed_at=utcnow_iso(),
        municipality_ids=tuple(municipality_ids),
    )
    record.validate()
    dataset.subscribers[key] = record
    return record, True


def rebuild_snapshot(dataset: Dataset) -> tuple[IndexSnapshot, list[str]]:
    return build_snapshot(
        dataset.municipalities.values(),
        dataset.participants.values(),
        dataset.minutes.values(),
        dataset.subjects.values(),
    )


def _published_on_or_after(minute: MinuteDocument, since: date) -> bool:
    if minute.status != "published" or not minute.published_at:
        return False
    published_day = datetime.fromisoformat(minute.published_at).date()
    return published_day >= since


def digest_text(dataset: Dataset, since: date) -> tuple[str, int]:
    """Plain-text newsletter digest; returns (text, minutes listed)."""
    lines = [f"Minutes published since {since.isoformat()}", ""]
    listed: set[str] = set()
    if not dataset.subscribers:
        lines.append("No subscribers.")
        return "\n".join(lines) + "\n", 0
    for key in sorted(dataset.subscribers):
        subscriber = dataset.subscribers[key]
        wanted = set(subscriber.municipality_ids) or set(dataset.municipalities)
        lines.append(subscriber.email)
        any_entry = False
        for municipality in sorted(dataset.municipalities.values(), key=lambda m: m.name):
            if municipality.id not in wanted:
                continue
            minutes = sorted(
                (
                    m
                    for m in dataset.minutes.values()
                    if m.municipality_id == municipality.id
                    and _published_on_or_after(m, since)
                ),
                key=lambda m: (m.published_at or "", m.id),
            )
            if not minutes:
                continue
            any_entry = True
            lines.append(f"  {municipality.name}")
            for minute in minutes:
                day = minute.metadata.meeting_date.isoformat() if minute.metadata else "?"
                lines.append(
                    f"    - {day} meeting ({minute.id}), {len(minute.subject_ids)} subjects"
                )
                listed.add(minute.id)
        if not any_entry:
            lines.append("  (no new minutes)")
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n", len(listed)


class MinuteService:
    """Store-backed lifecycle operations with an audit trail."""

    def __init__(self, store: Store):
        self.store = store

    def upload(
        self, municipality_ref: str, raw_text: str, source_filename: str = "upload.txt"
    ) -> MinuteDocument:
        created: list[MinuteDocument] = []

        def mutate(dataset: Dataset) -> None:
            created.append(op_upload(dataset, municipality_ref, raw_text, source_filename))

        self.store.update(mutate)
        minute = created[0]
        self.store.append_audit(
            {"op": "upload", "minute_id": minute.id, "municipality_id": minute.municipality_id}
        )
        return minute

    def run_extraction(
        self, minute_id: str, extractor: str, client: CompletionClient | None = None
    ) -> ExtractionResult:
        """Extract one minute; persists the result or the failure."""
        if extractor not in EXTRACTORS:
            raise ConfigError(f"unknown extractor {extractor!r}; expected one of {EXTRACTORS}")
        dataset = self.store.load()
        minute = _require_minute(dataset, minute_id)
        if minute.status not in ("uploaded", "extracted"):
            raise LifecycleError(
                f"cannot extract minute in status {minute.status}",
                current_status=minute.status,
            )
        try:
            if extractor == "rule":
                result = extract_rule_based(minute.raw_text)
            else:
                if client is None:
                    raise ConfigError("llm extractor requires a completion client")
                result = extract_llm(client, minute.raw_text)
        except (ParseError, ExtractionInvalidError, TransportError) as exc:
            self.store.update(
                lambda ds: op_record_extraction_failure(ds, minute_id, str(exc))
            )
            self.store.append_audit(
                {"op": "extract_failed", "minute_id": minute_id, "error": str(exc)}
            )
            raise
        self.store.update(lambda ds: (op_record_extraction(ds, minute_id, result), None)[1])
        self.store.append_audit(
            {"op": "extract", "minute_id": minute_id, "extractor": result.extractor_id}
        )
        return result

    def pending_minute_ids(self) -> list[str]:
        dataset = self.store.load()
        return sorted(m.id for m in dataset.minutes.values() if m.status == "uploaded")

    def store_draft(self, minute_id: str, result: ExtractionResult) -> ResolutionPreview:
        previous: list[ExtractionResult | None] = []
        dataset_after: list[Dataset] = []

        def mutate(dataset: Dataset) -> None:
            previous.append(op_store_draft(dataset, minute_id, result))
            dataset_after.append(dataset)

        self.store.update(mutate)
        audit: dict[str, Any] = {"op": "edit_draft", "minute_id": minute_id}
        if previous[0] is not None:
            audit["previous_draft"] = previous[0].to_dict()
        self.store.append_audit(audit)
        return preview_resolution(dataset_after[0], minute_id)

    def validate_minute(self, minute_id: str, ack_unresolved: bool = False) -> MinuteDocument:
        validated: list[MinuteDocument] = []

        def mutate(dataset: Dataset) -> None:
            validated.append(op_validate(dataset, minute_id, ack_unresolved))

        self.store.update(mutate)
        self.store.append_audit({"op": "validate", "minute_id": minute_id})
        return validated[0]

    def publish_minute(self, minute_id: str) -> tuple[MinuteDocument, IndexSnapshot, list[str]]:
        published: list[MinuteDocument] = []
        warnings_out: list[str] = []
        snapshots: list[IndexSnapshot] = []

        def mutate(dataset: Dataset) -> IndexSnapshot:
            published.append(op_publish(dataset, minute_id))
            snapshot, warnings = rebuild_snapshot(dataset)
            warnings_out.extend(warnings)
            snapshots.append(snapshot)
            return snapshot

        _, manifest = self.store.update(mutate)
        self.store.append_audit(
            {"op": "publish", "minute_id": minute_id, "revision": manifest.revision}
        )
        return published[0], snapshots[0], warnings_out

    def rebuild_index(self) -> tuple[IndexSnapshot, list[str]]:
        warnings_out: list[str] = []
        snapshots: list[IndexSnapshot] = []

        def mutate(dataset: Dataset) -> IndexSnapshot:
            snapshot, warnings = rebuild_snapshot(dataset)
            warnings_out.extend(warnings)
            snapshots.append(snapshot)
            return snapshot

        self.store.update(mutate)
        self.store.append_audit({"op": "index_rebuild", "units": snapshots[0].n})
        return snapshots[0], warnings_out

    def subscribe(
        self, email: str, municipality_ids: tuple[str, ...] = ()
    ) -> tuple[NewsletterSubscriber, bool]:
        outcome: list[tuple[NewsletterSubscriber, bool]] = []

        def mutate(dataset: Dataset) -> None:
            outcome.append(op_subscribe(dataset, email, municipality_ids))

        self.store.update(mutate)
        record, created = outcome[0]
        if created:
            self.store.append_audit(
                {"op": "subscribe", "email": record.normalized_email()}
            )
        return record, created
