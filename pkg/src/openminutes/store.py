"""File-backed durable storage for all collections and the index snapshot.

Layout under the store root:

    manifest.json                     current manifest (atomic swap target)
    collections/<name>-<rev>.jsonl    one record per line, UTF-8, LF
    index/snapshot-<rev>.bin          serialized index snapshot
    lock                              writer lock (pid file)
    audit.jsonl                       append-only operator audit trail

Collection files are immutable once written; a commit stages new
revision-numbered files and then atomically replaces the manifest, so a
reader always sees a consistent set and a crashed commit leaves the prior
state intact. Many readers, single writer (lock file under the root).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .errors import IntegrityError, LoadError, StoreLockedError
from .extraction import ExtractionResult
from .model import (
    MinuteDocument,
    MunicipalityRecord,
    NewsletterSubscriber,
    ParticipantRecord,
    SubjectRecord,
    TopicRecord,
    utcnow_iso,
)
from .search import IndexSnapshot

SCHEMA_VERSION = 1

COLLECTIONS = (
    "municipalities",
    "participants",
    "topics",
    "minutes",
    "subjects",
    "subscribers",
    "extractions",
)

KEEP_REVISIONS = 2  # current + previous, for readers mid-load during a commit


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


@dataclass
class Dataset:
    """In-memory image of every collection, keyed by record id.

    Subscribers are keyed by normalized email; extraction drafts and
    extraction failure messages by minute id (a minute holds at most one
    of the two).
    """

    municipalities: dict[str, MunicipalityRecord] = field(default_factory=dict)
    participants: dict[str, ParticipantRecord] = field(default_factory=dict)
    topics: dict[str, TopicRecord] = field(default_factory=dict)
    minutes: dict[str, MinuteDocument] = field(default_factory=dict)
    subjects: dict[str, SubjectRecord] = field(default_factory=dict)
    subscribers: dict[str, NewsletterSubscriber] = field(default_factory=dict)
    extractions: dict[str, ExtractionResult] = field(default_factory=dict)
    extraction_errors: dict[str, str] = field(default_factory=dict)

    def copy(self) -> "Dataset":
        # records are frozen dataclasses, so shallow dict copies suffice
        return Dataset(
            municipalities=dict(self.municipalities),
            participants=dict(self.participants),
            topics=dict(self.topics),
            minutes=dict(self.minutes),
            subjects=dict(self.subjects),
            subscribers=dict(self.subscribers),
            extractions=dict(self.extractions),
            extraction_errors=dict(self.extraction_errors),
        )

    def check_integrity(self) -> None:
        """Validate every record and every cross-collection reference."""
        for key, record in self.municipalities.items():
            record.validate()
            if key != record.id:
                raise IntegrityError(f"municipality keyed {key!r} but id is {record.id!r}")
        for key, participant in self.participants.items():
            participant.validate()
            if key != participant.id:
                raise IntegrityError(f"participant keyed {key!r} but id is {participant.id!r}")
            if participant.municipality_id not in self.municipalities:
                raise IntegrityError(
                    f"participant {participant.id} references missing municipality "
                    f"{participant.municipality_id}"
                )
        for key, topic in self.topics.items():
            topic.validate()
            if key != topic.id:
                raise IntegrityError(f"topic keyed {key!r} but id is {topic.id!r}")
        for key, minute in self.minutes.items():
            minute.validate()
            if key != minute.id:
                raise IntegrityError(f"minute keyed {key!r} but id is {minute.id!r}")
            if minute.municipality_id not in self.municipalities:
                raise IntegrityError(
                    f"minute {minute.id} references missing municipality {minute.municipality_id}"
                )
            if minute.metadata is not None:
                for pid in minute.metadata.participant_ids:
                    if pid not in self.participants:
                        raise IntegrityError(
                            f"minute {minute.id} references missing participant {pid}"
                        )
            for sid in minute.subject_ids:
                subject = self.subjects.get(sid)
                if subject is None:
                    raise IntegrityError(f"minute {minute.id} references missing subject {sid}")
                if subject.minute_id != minute.id:
                    raise IntegrityError(
                        f"minute {minute.id} lists subject {sid} that belongs to "
                        f"minute {subject.minute_id}"
                    )
        for key, subject in self.subjects.items():
            subject.validate()
            if key != subject.id:
                raise IntegrityError(f"subject keyed {key!r} but id is {subject.id!r}")
            minute = self.minutes.get(subject.minute_id)
            if minute is None:
                raise IntegrityError(
                    f"subject {subject.id} references missing minute {subject.minute_id}"
                )
            if subject.id not in minute.subject_ids:
                raise IntegrityError(
                    f"subject {subject.id} is not listed by its minute {subject.minute_id}"
                )
            for tid in subject.topic_ids:
                if tid not in self.topics:
                    raise IntegrityError(f"subject {subject.id} references missing topic {tid}")
            if subject.tally is not None and subject.tally.positions is not None:
                for position in subject.tally.positions:
                    if position.participant_id not in self.participants:
                        raise IntegrityError(
                            f"subject {subject.id} vote references missing participant "
                            f"{position.participant_id}"
                        )
        for key, subscriber in self.subscribers.items():
            subscriber.validate()
            if key != subscriber.normalized_email():
                raise IntegrityError(
                    f"subscriber keyed {key!r} but normalized email is "
                    f"{subscriber.normalized_email()!r}"
                )
            for mid in subscriber.municipality_ids:
                if mid not in self.municipalities:
                    raise IntegrityError(
                        f"subscriber {key} references missing municipality {mid}"
                    )
        for minute_id in list(self.extractions) + list(self.extraction_errors):
            if minute_id not in self.minutes:
                raise IntegrityError(f"extraction stored for missing minute {minute_id}")


@dataclass(frozen=True)
class StoreManifest:
    schema_version: int
    revision: int
    collections: dict[str, str]
    last_snapshot_path: str | None
    updated_at: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "revision": self.revision,
            "collections": dict(self.collections),
            "last_snapshot_path": self.last_snapshot_path,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "StoreManifest":
        return cls(
            schema_version=d["schema_version"],
            revision=d["revision"],
            collections=dict(d["collections"]),
            last_snapshot_path=d.get("last_snapshot_path"),
            updated_at=d["updated_at"],
        )

    @classmethod
    def empty(cls) -> "StoreManifest":
        return cls(
            schema_version=SCHEMA_VERSION,
            revision=0,
            collections={},
            last_snapshot_path=None,
            updated_at=utcnow_iso(),
        )


_SERIALIZERS: dict[str, Callable[[Any], dict[str, Any]]] = {
    "municipalities": lambda r: r.to_dict(),
    "participants": lambda r: r.to_dict(),
    "topics": lambda r: r.to_dict(),
    "minutes": lambda r: r.to_dict(),
    "subjects": lambda r: r.to_dict(),
    "subscribers": lambda r: r.to_dict(),
}

_DESERIALIZERS: dict[str, Callable[[dict[str, Any]], Any]] = {
    "municipalities": MunicipalityRecord.from_dict,
    "participants": ParticipantRecord.from_dict,
    "topics": TopicRecord.from_dict,
    "minutes": MinuteDocument.from_dict,
    "subjects": SubjectRecord.from_dict,
    "subscribers": NewsletterSubscriber.from_dict,
}


def _collection_lines(name: str, dataset: Dataset) -> list[str]:
    if name == "extractions":
        keys = sorted(set(dataset.extractions) | set(dataset.extraction_errors))
        lines = []
        for minute_id in keys:
            result = dataset.extractions.get(minute_id)
            lines.append(
                canonical_json(
                    {
                        "minute_id": minute_id,
                        "result": None if result is None else result.to_dict(),
                        "error": dataset.extraction_errors.get(minute_id),
                    }
                )
            )
        return lines
    collection: dict[str, Any] = getattr(dataset, name)
    serialize = _SERIALIZERS[name]
    return [canonical_json(serialize(record)) for _, record in sorted(collection.items())]


def _read_jsonl(path: Path) -> list[tuple[int, dict[str, Any]]]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read collection file {path}: {exc}") from exc
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append((line_no, json.loads(line)))
        except ValueError as exc:
            raise LoadError(f"corrupt record in {path.name} line {line_no}: {exc}") from exc
    return rows


def _parse_collection(name: str, path: Path) -> dict[str, Any]:
    records: dict[str, Any] = {}
    for line_no, payload in _read_jsonl(path):
        try:
            record = _DESERIALIZERS[name](payload)
            record.validate()
            key = record.normalized_email() if name == "subscribers" else record.id
            records[key] = record
        except Exception as exc:
            raise LoadError(
                f"corrupt record in {path.name} line {line_no}: {exc}"
            ) from exc
    return records


def _parse_extractions(path: Path) -> tuple[dict[str, ExtractionResult], dict[str, str]]:
    results: dict[str, ExtractionResult] = {}
    errors: dict[str, str] = {}
    for line_no, payload in _read_jsonl(path):
        try:
            minute_id = payload["minute_id"]
            if payload.get("result") is not None:
                results[minute_id] = ExtractionResult.from_dict(payload["result"])
            if payload.get("error") is not None:
                errors[minute_id] = payload["error"]
        except Exception as exc:
            raise LoadError(
                f"corrupt record in {path.name} line {line_no}: {exc}"
            ) from exc
    return results, errors


class Store:
    """Durable store rooted at a directory; see the module docstring."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.collections_dir = self.root / "collections"
        self.index_dir = self.root / "index"
        self.manifest_path = self.root / "manifest.json"
        self.lock_path = self.root / "lock"
        self.audit_path = self.root / "audit.jsonl"
        for directory in (self.root, self.collections_dir, self.index_dir):
            directory.mkdir(parents=True, exist_ok=True)

    # -- loading ----------------------------------------------------------

    def read_manifest(self) -> StoreManifest:
        if not self.manifest_path.exists():
            return StoreManifest.empty()
        try:
            manifest = StoreManifest.from_dict(
                json.loads(self.manifest_path.read_text(encoding="utf-8"))
            )
        except (OSError, ValueError, KeyError) as exc:
            raise LoadError(f"cannot read manifest {self.manifest_path}: {exc}") from exc
        if manifest.schema_version != SCHEMA_VERSION:
            raise LoadError(
                f"unsupported schema_version {manifest.schema_version} "
                f"(this build reads {SCHEMA_VERSION})"
            )
        return manifest

    def load(self) -> Dataset:
        """Materialize all collections at the current manifest revision."""
        manifest = self.read_manifest()
        dataset = Dataset()
        for name in COLLECTIONS:
            relative = manifest.collections.get(name)
            if relative is None:
                continue
            if name == "extractions":
                results, errors = _parse_extractions(self.root / relative)
                dataset.extractions.update(results)
                dataset.extraction_errors.update(errors)
            else:
                records = _parse_collection(name, self.root / relative)
                getattr(dataset, name).update(records)
        dataset.check_integrity()
        return dataset

    def load_snapshot(self) -> IndexSnapshot | None:
        manifest = self.read_manifest()
        if manifest.last_snapshot_path is None:
            return None
        path = self.root / manifest.last_snapshot_path
        try:
            return IndexSnapshot.from_bytes(path.read_bytes())
        except OSError as exc:
            raise LoadError(f"cannot read snapshot {path}: {exc}") from exc

    # -- writer lock ------------------------------------------------------

    def acquire_lock(self) -> None:
        payload = canonical_json({"pid": os.getpid()}).encode("utf-8")
        for attempt in (0, 1):
            try:
                fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                with os.fdopen(fd, "wb") as handle:
                    handle.write(payload)
                return
            except FileExistsError:
                if attempt == 1 or not self._lock_is_stale():
                    raise StoreLockedError(
                        f"store {self.root} is locked by another writer ({self.lock_path})"
                    )
                self.lock_path.unlink(missing_ok=True)

    def release_lock(self) -> None:
        self.lock_path.unlink(missing_ok=True)

    def _lock_is_stale(self) -> bool:
        try:
            pid = json.loads(self.lock_path.read_text(encoding="utf-8"))["pid"]
            os.kill(int(pid), 0)
            return False
        except (OSError, ValueError, KeyError):
            return True  # unreadable lock or dead pid

    # -- committing -------------------------------------------------------

    def commit(
        self,
        dataset: Dataset,
        snapshot: IndexSnapshot | None = None,
        before_swap: Callable[[], None] | None = None,
    ) -> StoreManifest:
        """Write the data set as a new revision, all-or-nothing.

        Stages revision-numbered collection files (and the snapshot, when
        given), then atomically replaces the manifest. ``before_swap`` is a
        crash-test hook invoked after staging and before the swap.
        """
        self.acquire_lock()
        try:
            return self._commit_locked(dataset, snapshot, before_swap)
        finally:
            self.release_lock()

    def _commit_locked(
        self,
        dataset: Dataset,
        snapshot: IndexSnapshot | None,
        before_swap: Callable[[], None] | None,
    ) -> StoreManifest:
        dataset.check_integrity()
        previous = self.read_manifest()
        revision = previous.revision + 1
        collections: dict[str, str] = {}
        for name in COLLECTIONS:
            lines = _collection_lines(name, dataset)
            relative = f"collections/{name}-{revision:06d}.jsonl"
            self._write_file(self.root / relative, ("\n".join(lines) + "\n").encode("utf-8"))
            collections[name] = relative
        snapshot_path = previous.last_snapshot_path
        if snapshot is not None:
            snapshot_path = f"index/snapshot-{revision:06d}.bin"
            self._write_file(self.root / snapshot_path, snapshot.to_bytes())
        if before_swap is not None:
            before_swap()
        manifest = StoreManifest(
            schema_version=SCHEMA_VERSION,
            revision=revision,
            collections=collections,
            last_snapshot_path=snapshot_path,
            updated_at=utcnow_iso(),
        )
        self._write_file(
            self.manifest_path, (canonical_json(manifest.to_dict()) + "\n").encode("utf-8")
        )
        self._prune(manifest)
        return manifest

    def update(
        self, mutate: Callable[[Dataset], IndexSnapshot | None]
    ) -> tuple[Dataset, StoreManifest]:
        """Load, apply a mutation, and commit the result.

        The lock spans the whole read-modify-write so concurrent updates
        cannot lose each other's writes. The mutator may return a fresh
        index snapshot to persist alongside the data (or None to keep the
        previous one).
        """
        self.acquire_lock()
        try:
            dataset = self.load()
            snapshot = mutate(dataset)
            manifest = self._commit_locked(dataset, snapshot, None)
            return dataset, manifest
        finally:
            self.release_lock()

    @staticmethod
    def _write_file(path: Path, data: bytes) -> None:
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)

    def _prune(self, manifest: StoreManifest) -> None:
        keep = {manifest.revision - offset for offset in range(KEEP_REVISIONS)}
        referenced = {self.root / rel for rel in manifest.collections.values()}
        if manifest.last_snapshot_path:
            referenced.add(self.root / manifest.last_snapshot_path)
        for directory in (self.collections_dir, self.index_dir):
            for path in directory.iterdir():
                if path in referenced or path.suffix == ".tmp":
                    continue
                stem_rev = path.stem.rsplit("-", 1)[-1]
                if stem_rev.isdigit() and int(stem_rev) in keep:
                    continue
                try:
                    path.unlink()
                except OSError:
                    pass  # pruning is best-effort

    # -- audit trail ------------------------------------------------------

    def append_audit(self, entry: dict[str, Any]) -> None:
        """Append one event to the audit log (outside manifest atomicity)."""
        record = dict(entry)
        record.setdefault("at", utcnow_iso())
        with open(self.audit_path, "a", encoding="utf-8") as handle:
            handle.write(canonical_json(record) + "\n")
