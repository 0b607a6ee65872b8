"""HTTP interface: public read/search surface plus the back-office flow.

Public routes serve only published material; drafts answer 404 to
unauthenticated callers so their existence never leaks. Back-office
routes require ``Authorization: Bearer <admin token>``. When a site
access password is configured, public routes additionally require the
session cookie issued by ``POST /api/access`` (the admin token bypasses
the gate).

Every state-changing route commits through the store before answering,
so a restart right after a 2xx reproduces the new state.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from typing import Any

from fastapi import BackgroundTasks, Depends, FastAPI, Request
from fastapi import Query as FastAPIQuery
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .errors import (
    ConfigError,
    ExtractionInvalidError,
    LifecycleError,
    NotFoundError,
    ParseError,
    StoreLockedError,
    TransportError,
    ValidationError,
)
from .extraction import CompletionClient, ExtractionResult, parse_minute_date
from .model import MinuteDocument, ParticipantRecord
from .pipeline import (
    MinuteService,
    op_record_extraction_failure,
    preview_resolution,
)
from .search import IndexSnapshot, Query, build_snapshot, search, timeline
from .store import Dataset, Store

SESSION_COOKIE = "site_session"


@dataclass(frozen=True)
class ApiConfig:
    admin_token: str
    site_access_password: str | None = None
    host: str = "127.0.0.1"
    port: int = 8000
    page_size_default: int = 10
    cors_origins: tuple[str, ...] = ()

    def validate(self) -> None:
        if not self.admin_token:
            raise ConfigError("admin_token must be non-empty")
        if not 0 < self.port < 65536:
            raise ConfigError(f"invalid port {self.port}")
        if not 1 <= self.page_size_default <= 100:
            raise ConfigError("page_size_default must be between 1 and 100")


class _StoreView:
    """Read-through cache keyed on the manifest revision.

    Reloads when another process (e.g. the CLI) advances the store, so a
    running server picks up external publishes without restarting.
    """

    def __init__(self, store: Store):
        self.store = store
        self._revision: int | None = None
        self._snapshot_path: str | None = None
        self._dataset = Dataset()
        self._snapshot: IndexSnapshot | None = None
        self._empty_snapshot, _ = build_snapshot([], [], [], [])

    def current(self) -> tuple[Dataset, IndexSnapshot]:
        manifest = self.store.read_manifest()
        if manifest.revision != self._revision:
            self._dataset = self.store.load()
            self._revision = manifest.revision
            self._snapshot_path = None  # force a snapshot re-check
        if manifest.last_snapshot_path != self._snapshot_path:
            self._snapshot = self.store.load_snapshot()
            self._snapshot_path = manifest.last_snapshot_path
        return self._dataset, self._snapshot or self._empty_snapshot


class AccessBody(BaseModel):
    password: str


class SubscribeBody(BaseModel):
    email: str
    municipality_ids: list[str] = []


class UploadBody(BaseModel):
    municipality: str
    text: str
    source_filename: str = "upload.txt"
    extractor: str = "rule"


class ValidateBody(BaseModel):
    ack_unresolved: bool = False


def _participant_view(record: ParticipantRecord) -> dict[str, Any]:
    return {
        "id": record.id,
        "full_name": record.full_name,
        "party": record.party,
        "role": record.role,
        "unresolved": record.unresolved,
    }


def _minute_view(dataset: Dataset, minute: MinuteDocument) -> dict[str, Any]:
    metadata = None
    if minute.metadata is not None:
        metadata = {
            "meeting_date": minute.metadata.meeting_date.isoformat(),
            "location": minute.metadata.location,
            "meeting_type": minute.metadata.meeting_type,
            "participants": [
                _participant_view(dataset.participants[pid])
                for pid in minute.metadata.participant_ids
                if pid in dataset.participants
            ],
        }
    subjects = []
    summary = {"favor": 0, "against": 0, "abstention": 0}
    for sid in minute.subject_ids:
        subject = dataset.subjects.get(sid)
        if subject is None:
            continue
        tally = None
        if subject.tally is not None:
            tally = subject.tally.to_dict()
            summary["favor"] += subject.tally.favor
            summary["against"] += subject.tally.against
            summary["abstention"] += subject.tally.abstention
        subjects.append(
            {
                "id": subject.id,
                "order": subject.order,
                "title": subject.title,
                "summary": subject.summary,
                "topics": [
                    {"id": tid, "label": dataset.topics[tid].label}
                    for tid in subject.topic_ids
                    if tid in dataset.topics
                ],
                "tally": tally,
            }
        )
    return {
        "minute": {
            "id": minute.id,
            "municipality_id": minute.municipality_id,
            "source_filename": minute.source_filename,
            "status": minute.status,
            "uploaded_at": minute.uploaded_at,
            "published_at": minute.published_at,
            "metadata": metadata,
        },
        "subjects": subjects,
        "voting_summary": summary,
        "raw_text_path": f"/api/minutes/{minute.id}/raw",
    }


def _parse_query_date(value: str | None, field_name: str):
    if value is None or value == "":
        return None
    try:
        return parse_minute_date(value)
    except ValidationError as exc:
        raise ValidationError("invalid query", fields={field_name: str(exc)}) from exc


def _background_extract(
    service: MinuteService, minute_id: str, extractor: str, client: CompletionClient | None
) -> None:
    try:
        service.run_extraction(minute_id, extractor, client)
    except (ParseError, ExtractionInvalidError, TransportError):
        pass  # failure already recorded on the minute
    except (ConfigError, LifecycleError, ValidationError) as exc:
        message = str(exc)
        service.store.update(
            lambda ds: op_record_extraction_failure(ds, minute_id, message)
        )


def create_app(
    store: Store,
    config: ApiConfig,
    llm_client: CompletionClient | None = None,
) -> FastAPI:
    config.validate()
    app = FastAPI(title="openminutes", docs_url=None, redoc_url=None)
    view = _StoreView(store)
    service = MinuteService(store)
    gate_token = secrets.token_urlsafe(16)
    app.state.store = store
    app.state.service = service

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
            allow_credentials=True,
        )

    def _is_admin(request: Request) -> bool:
        return request.headers.get("authorization") == f"Bearer {config.admin_token}"

    def require_admin(request: Request) -> None:
        if not _is_admin(request):
            raise StarletteHTTPException(status_code=401, detail="admin token required")

    @app.middleware("http")
    async def site_gate(request: Request, call_next):
        path = request.url.path
        gated = (
            config.site_access_password is not None
            and request.method != "OPTIONS"
            and path.startswith("/api")
            and path != "/api/access"
            and not path.startswith("/api/admin")
        )
        if gated and request.cookies.get(SESSION_COOKIE) != gate_token:
            if not _is_admin(request):
                return JSONResponse({"error": "site access required"}, status_code=401)
        return await call_next(request)

    # -- error mapping ------------------------------------------------------

    @app.exception_handler(ValidationError)
    async def on_validation_error(request: Request, exc: ValidationError):
        body: dict[str, Any] = {"error": str(exc)}
        if exc.fields:
            body["fields"] = exc.fields
        return JSONResponse(body, status_code=400)

    @app.exception_handler(NotFoundError)
    async def on_not_found(request: Request, exc: NotFoundError):
        return JSONResponse({"error": str(exc)}, status_code=404)

    @app.exception_handler(LifecycleError)
    async def on_lifecycle_error(request: Request, exc: LifecycleError):
        return JSONResponse(
            {"error": str(exc), "status": exc.current_status}, status_code=409
        )

    @app.exception_handler(StoreLockedError)
    async def on_store_locked(request: Request, exc: StoreLockedError):
        return JSONResponse({"error": str(exc)}, status_code=503)

    @app.exception_handler(RequestValidationError)
    async def on_request_validation(request: Request, exc: RequestValidationError):
        fields = {
            ".".join(str(part) for part in error["loc"]): error["msg"]
            for error in exc.errors()
        }
        return JSONResponse({"error": "invalid request", "fields": fields}, status_code=400)

    @app.exception_handler(StarletteHTTPException)
    async def on_http_exception(request: Request, exc: StarletteHTTPException):
        return JSONResponse({"error": str(exc.detail)}, status_code=exc.status_code)

    # -- access gate ---------------------------------------------------------

    @app.post("/api/access")
    def access(body: AccessBody):
        if config.site_access_password is None:
            return JSONResponse({"gated": False})
        if body.password != config.site_access_password:
            return JSONResponse({"error": "wrong password"}, status_code=401)
        response = JSONResponse({"gated": True})
        response.set_cookie(SESSION_COOKIE, gate_token, httponly=True, samesite="lax")
        return response

    # -- public read surface --------------------------------------------------

    @app.get("/api/municipalities")
    def municipalities():
        dataset, _ = view.current()
        counts: dict[str, int] = {}
        for minute in dataset.minutes.values():
            if minute.status == "published":
                counts[minute.municipality_id] = counts.get(minute.municipality_id, 0) + 1
        return [
            {
                "id": m.id,
                "name": m.name,
                "slug": m.slug,
                "published_minutes": counts.get(m.id, 0),
            }
            for m in sorted(dataset.municipalities.values(), key=lambda m: (m.name, m.id))
        ]

    @app.get("/api/municipalities/{municipality_id}/overview")
    def municipality_overview(municipality_id: str):
        dataset, _ = view.current()
        municipality = dataset.municipalities.get(municipality_id)
        if municipality is None:
            raise NotFoundError(f"municipality {municipality_id} not found")
        published = [
            m
            for m in dataset.minutes.values()
            if m.municipality_id == municipality_id and m.status == "published"
        ]
        published.sort(
            key=lambda m: (m.metadata.meeting_date.isoformat() if m.metadata else "", m.id),
            reverse=True,
        )
        recent = [
            {
                "id": m.id,
                "meeting_date": m.metadata.meeting_date.isoformat() if m.metadata else None,
                "meeting_type": m.metadata.meeting_type if m.metadata else None,
                "subjects": len(m.subject_ids),
            }
            for m in published[:5]
        ]
        members = [
            _participant_view(p)
            for p in sorted(
                dataset.participants.values(), key=lambda p: (p.full_name, p.id)
            )
            if p.municipality_id == municipality_id and p.role
        ]
        published_ids = {m.id for m in published}
        date_of = {m.id: m.metadata.meeting_date.isoformat() for m in published if m.metadata}
        by_topic: dict[str, set[str]] = {}
        for subject in dataset.subjects.values():
            if subject.minute_id not in published_ids:
                continue
            for tid in subject.topic_ids:
                by_topic.setdefault(tid, set()).add(subject.minute_id)
        groups = [
            {
                "topic": {"id": tid, "label": dataset.topics[tid].label},
                "minute_ids": sorted(
                    minute_ids, key=lambda mid: (date_of.get(mid, ""), mid), reverse=True
                ),
            }
            for tid, minute_ids in by_topic.items()
            if tid in dataset.topics
        ]
        groups.sort(key=lambda g: (g["topic"]["label"], g["topic"]["id"]))
        return {
            "municipality": {
                "id": municipality.id,
                "name": municipality.name,
                "slug": municipality.slug,
            },
            "recent_minutes": recent,
            "executive_members": members,
            "topics": groups,
        }

    @app.get("/api/municipalities/{municipality_id}/timeline")
    def municipality_timeline(municipality_id: str):
        dataset, snapshot = view.current()
        if municipality_id not in dataset.municipalities:
            raise NotFoundError(f"municipality {municipality_id} not found")
        try:
            groups = timeline(snapshot, municipality_id)
        except NotFoundError:
            groups = []  # municipality created after the last snapshot build
        return {"municipality_id": municipality_id, "groups": groups}

    def _run_search(
        q: str,
        scope: str,
        municipality: list[str],
        topic: list[str],
        party: list[str],
        participant: list[str],
        meeting_type: list[str],
        date_from: str | None,
        date_to: str | None,
        page: int,
        page_size: int | None,
    ) -> dict[str, Any]:
        _, snapshot = view.current()
        query = Query(
            text=q,
            scope=scope,
            municipality_ids=tuple(municipality),
            topic_ids=tuple(topic),
            parties=tuple(party),
            participant_ids=tuple(participant),
            meeting_types=tuple(meeting_type),
            date_from=_parse_query_date(date_from, "date_from"),
            date_to=_parse_query_date(date_to, "date_to"),
            page=page,
            page_size=config.page_size_default if page_size is None else page_size,
        )
        result = search(snapshot, query)
        body = result.to_dict()
        body["page"] = query.page
        body["page_size"] = query.page_size
        return body

    @app.get("/api/search")
    def search_endpoint(
        q: str = "",
        scope: str = "all",
        municipality: list[str] = FastAPIQuery(default=[]),
        topic: list[str] = FastAPIQuery(default=[]),
        party: list[str] = FastAPIQuery(default=[]),
        participant: list[str] = FastAPIQuery(default=[]),
        meeting_type: list[str] = FastAPIQuery(default=[]),
        date_from: str | None = None,
        date_to: str | None = None,
        page: int = 1,
        page_size: int | None = None,
    ):
        return _run_search(
            q,
            scope,
            municipality,
            topic,
            party,
            participant,
            meeting_type,
            date_from,
            date_to,
            page,
            page_size,
        )

    @app.get("/api/municipalities/{municipality_id}/minutes")
    def municipality_minutes(
        municipality_id: str,
        q: str = "",
        scope: str = "minutes",
        topic: list[str] = FastAPIQuery(default=[]),
        party: list[str] = FastAPIQuery(default=[]),
        participant: list[str] = FastAPIQuery(default=[]),
        meeting_type: list[str] = FastAPIQuery(default=[]),
        date_from: str | None = None,
        date_to: str | None = None,
        page: int = 1,
        page_size: int | None = None,
    ):
        dataset, _ = view.current()
        if municipality_id not in dataset.municipalities:
            raise NotFoundError(f"municipality {municipality_id} not found")
        return _run_search(
            q,
            scope,
            [municipality_id],
            topic,
            party,
            participant,
            meeting_type,
            date_from,
            date_to,
            page,
            page_size,
        )

    def _visible_minute(request: Request, minute_id: str) -> tuple[Dataset, MinuteDocument]:
        dataset, _ = view.current()
        minute = dataset.minutes.get(minute_id)
        if minute is None or (minute.status != "published" and not _is_admin(request)):
            # 404 rather than 403 so draft existence never leaks
            raise NotFoundError(f"minute {minute_id} not found")
        return dataset, minute

    @app.get("/api/minutes/{minute_id}")
    def minute_detail(minute_id: str, request: Request):
        dataset, minute = _visible_minute(request, minute_id)
        return _minute_view(dataset, minute)

    @app.get("/api/minutes/{minute_id}/raw")
    def minute_raw(minute_id: str, request: Request):
        _, minute = _visible_minute(request, minute_id)
        return PlainTextResponse(minute.raw_text)

    @app.post("/api/newsletter/subscribe")
    def subscribe(body: SubscribeBody):
        try:
            record, created = service.subscribe(body.email, tuple(body.municipality_ids))
        except ValidationError as exc:
            status = 422 if "email" in (exc.fields or {}) else 400
            return JSONResponse(
                {"error": str(exc), "fields": exc.fields}, status_code=status
            )
        return JSONResponse(
            {
                "email": record.email,
                "municipality_ids": list(record.municipality_ids),
                "created": created,
            },
            status_code=201 if created else 200,
        )

    # -- back-office -----------------------------------------------------------

    admin = Depends(require_admin)

    @app.post("/api/admin/minutes", dependencies=[admin], status_code=201)
    def admin_upload(body: UploadBody, background: BackgroundTasks):
        if body.extractor not in ("rule", "llm"):
            raise ValidationError(
                f"unknown extractor {body.extractor!r}",
                fields={"extractor": "must be rule or llm"},
            )
        minute = service.upload(body.municipality, body.text, body.source_filename)
        background.add_task(
            _background_extract, service, minute.id, body.extractor, llm_client
        )
        return {"minute_id": minute.id, "status": minute.status}

    @app.get("/api/admin/minutes", dependencies=[admin])
    def admin_list(status: str | None = None):
        dataset, _ = view.current()
        minutes = [
            {
                "id": m.id,
                "municipality_id": m.municipality_id,
                "status": m.status,
                "source_filename": m.source_filename,
                "uploaded_at": m.uploaded_at,
            }
            for m in sorted(dataset.minutes.values(), key=lambda m: m.id)
            if status is None or m.status == status
        ]
        return {"minutes": minutes}

    @app.get("/api/admin/minutes/{minute_id}/extraction", dependencies=[admin])
    def admin_get_extraction(minute_id: str):
        dataset, _ = view.current()
        minute = dataset.minutes.get(minute_id)
        if minute is None:
            raise NotFoundError(f"minute {minute_id} not found")
        result = dataset.extractions.get(minute_id)
        preview = preview_resolution(dataset, minute_id).to_dict() if result else None
        return {
            "minute_id": minute_id,
            "status": minute.status,
            "extraction": result.to_dict() if result else None,
            "error": dataset.extraction_errors.get(minute_id),
            "preview": preview,
        }

    @app.put("/api/admin/minutes/{minute_id}/extraction", dependencies=[admin])
    def admin_put_extraction(minute_id: str, body: dict):
        try:
            result = ExtractionResult.from_dict(body)
        except (KeyError, TypeError) as exc:
            raise ValidationError(
                f"malformed extraction draft: missing {exc}",
                fields={"body": str(exc)},
            ) from exc
        preview = service.store_draft(minute_id, result)
        return {"minute_id": minute_id, "preview": preview.to_dict()}

    @app.post("/api/admin/minutes/{minute_id}/validate", dependencies=[admin])
    def admin_validate(minute_id: str, body: ValidateBody | None = None):
        ack = body.ack_unresolved if body else False
        minute = service.validate_minute(minute_id, ack_unresolved=ack)
        return {"minute_id": minute_id, "status": minute.status}

    @app.post("/api/admin/minutes/{minute_id}/publish", dependencies=[admin])
    def admin_publish(minute_id: str):
        minute, snapshot, warnings = service.publish_minute(minute_id)
        return {
            "minute_id": minute_id,
            "status": minute.status,
            "index_units": snapshot.n,
            "warnings": warnings,
        }

    return app
