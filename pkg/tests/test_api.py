"""HTTP surface: public reads, search plumbing, back office, gate, restarts."""

from __future__ import annotations

import random

import pytest
from fastapi.testclient import TestClient

from openminutes.api import ApiConfig, create_app
from openminutes.errors import ConfigError
from openminutes.extraction import extract_rule_based
from openminutes.pipeline import MinuteService
from openminutes.store import Store

from .conftest import FIXTURE_ORDER, fixture_text, municipality_of

ADMIN_TOKEN = "test-admin-token"
ADMIN = {"Authorization": f"Bearer {ADMIN_TOKEN}"}

MINUTE = """MUNICIPIO: Testland
DATA: 2025-01-10
LOCAL: Hall
TIPO: Ordinária
PRESENCAS: Ana Prata (PS, Mayor); Rui Costa (PSD)

ASSUNTO: Budget
TEMAS: budget
Approved the plan.
VOTACAO: favor: Ana Prata | contra: Rui Costa
"""


def make_client(store: Store, site_password: str | None = None) -> TestClient:
    config = ApiConfig(admin_token=ADMIN_TOKEN, site_access_password=site_password)
    return TestClient(create_app(store, config))


@pytest.fixture()
def public_client(published_store) -> TestClient:
    return make_client(published_store)


@pytest.fixture()
def admin_client(fresh_store) -> TestClient:
    return make_client(fresh_store)


class TestConfig:
    def test_requires_admin_token(self):
        with pytest.raises(ConfigError):
            ApiConfig(admin_token="").validate()

    def test_rejects_bad_port(self):
        with pytest.raises(ConfigError):
            ApiConfig(admin_token="x", port=0).validate()


class TestPublicReads:
    def test_municipalities_with_counts(self, public_client):
        body = public_client.get("/api/municipalities").json()
        by_id = {m["id"]: m for m in body}
        assert by_id["mun-covilha"]["published_minutes"] == 4
        assert by_id["mun-guimaraes"]["published_minutes"] == 2
        assert [m["name"] for m in body] == sorted(m["name"] for m in body)

    def test_overview(self, public_client):
        body = public_client.get("/api/municipalities/mun-covilha/overview").json()
        assert body["municipality"]["slug"] == "covilha"
        dates = [m["meeting_date"] for m in body["recent_minutes"]]
        assert dates == sorted(dates, reverse=True)
        assert len(body["recent_minutes"]) <= 5
        roles = {m["full_name"]: m["role"] for m in body["executive_members"]}
        assert roles.get("Ana Prata") == "Mayor"
        topic_labels = [g["topic"]["label"] for g in body["topics"]]
        assert topic_labels == sorted(topic_labels)
        assert "budget" in topic_labels

    def test_overview_unknown_municipality(self, public_client):
        response = public_client.get("/api/municipalities/mun-nope/overview")
        assert response.status_code == 404
        assert "error" in response.json()

    def test_timeline(self, public_client):
        body = public_client.get("/api/municipalities/mun-covilha/timeline").json()
        months = [group[0] for group in body["groups"]]
        assert months == ["2025-01", "2025-02", "2025-03"]

    def test_timeline_unknown_municipality(self, public_client):
        assert (
            public_client.get("/api/municipalities/mun-nope/timeline").status_code
            == 404
        )

    def test_minute_detail(self, public_client):
        body = public_client.get("/api/minutes/min-000001").json()
        assert body["minute"]["status"] == "published"
        assert body["minute"]["metadata"]["meeting_date"] == "2025-01-10"
        assert len(body["subjects"]) == 3
        summary = body["voting_summary"]
        by_subject = [s["tally"] for s in body["subjects"] if s["tally"]]
        assert summary["favor"] == sum(t["favor"] for t in by_subject)
        assert summary["against"] == sum(t["against"] for t in by_subject)
        assert summary["abstention"] == sum(t["abstention"] for t in by_subject)

    def test_minute_raw(self, public_client):
        response = public_client.get("/api/minutes/min-000001/raw")
        assert response.status_code == 200
        assert response.text == fixture_text(FIXTURE_ORDER[0])

    def test_unknown_minute_404(self, public_client):
        assert public_client.get("/api/minutes/min-999999").status_code == 404

    def test_municipality_minutes_listing(self, public_client):
        body = public_client.get(
            "/api/municipalities/mun-guimaraes/minutes", params={"page_size": 50}
        ).json()
        assert body["total"] == 2
        assert all(h["kind"] == "minute" for h in body["hits"])
        assert all(h["municipality_id"] == "mun-guimaraes" for h in body["hits"])


class TestSearchEndpoint:
    def test_planted_subjects_rank_first(self, public_client):
        body = public_client.get(
            "/api/search", params={"q": "health", "scope": "subjects"}
        ).json()
        assert body["total"] == 2
        assert all("health" in h["title"].casefold() for h in body["hits"])
        assert all("" in h["snippet"] for h in body["hits"])

    def test_multi_select_facets(self, public_client):
        body = public_client.get(
            "/api/search",
            params={
                "municipality": ["mun-covilha", "mun-guimaraes"],
                "page_size": 50,
            },
        ).json()
        assert body["total"] == 20
        narrowed = public_client.get(
            "/api/search",
            params={"municipality": ["mun-covilha"], "topic": ["t-budget"], "page_size": 50},
        ).json()
        assert 0 < narrowed["total"] < body["total"]

    def test_date_range(self, public_client):
        body = public_client.get(
            "/api/search",
            params={"date_from": "2025-03-01", "date_to": "2025-03-31", "page_size": 50},
        ).json()
        dates = {h["meeting_date"] for h in body["hits"]}
        assert dates and all(d.startswith("2025-03") for d in dates)

    def test_day_first_dates_accepted(self, public_client):
        iso = public_client.get("/api/search", params={"date_from": "2025-03-01"}).json()
        day_first = public_client.get(
            "/api/search", params={"date_from": "01-03-2025"}
        ).json()
        assert iso["total"] == day_first["total"]

    def test_malformed_date_names_field(self, public_client):
        response = public_client.get("/api/search", params={"date_from": "soon"})
        assert response.status_code == 400
        assert "date_from" in response.json()["fields"]

    def test_inverted_range_rejected(self, public_client):
        response = public_client.get(
            "/api/search", params={"date_from": "2025-03-01", "date_to": "2025-01-01"}
        )
        assert response.status_code == 400
        assert "date_range" in response.json()["fields"]

    def test_bad_scope_rejected(self, public_client):
        response = public_client.get("/api/search", params={"scope": "everything"})
        assert response.status_code == 400
        assert "scope" in response.json()["fields"]

    def test_non_numeric_page_is_a_field_error(self, public_client):
        response = public_client.get("/api/search", params={"page": "two"})
        assert response.status_code == 400
        assert any("page" in key for key in response.json()["fields"])

    def test_default_page_size_applied(self, public_client):
        body = public_client.get("/api/search").json()
        assert body["page_size"] == 10
        assert len(body["hits"]) <= 10

    def test_facet_counts_present(self, public_client):
        body = public_client.get("/api/search", params={"q": "health"}).json()
        assert set(body["facet_counts"]) == {
            "municipality",
            "topic",
            "party",
            "participant",
            "meeting_type",
        }

    def test_pagination_walk(self, public_client):
        seen: list[str] = []
        page = 1
        while True:
            body = public_client.get(
                "/api/search", params={"page": page, "page_size": 7}
            ).json()
            seen.extend(h["unit_id"] for h in body["hits"])
            if len(seen) >= body["total"]:
                break
            page += 1
        assert len(seen) == len(set(seen)) == 20


class TestDraftVisibility:
    def test_draft_is_404_to_public(self, admin_client):
        minute_id = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        ).json()["minute_id"]
        assert admin_client.get(f"/api/minutes/{minute_id}").status_code == 404
        assert admin_client.get(f"/api/minutes/{minute_id}/raw").status_code == 404

    def test_admin_sees_draft(self, admin_client):
        minute_id = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        ).json()["minute_id"]
        body = admin_client.get(f"/api/minutes/{minute_id}", headers=ADMIN).json()
        assert body["minute"]["status"] == "extracted"

    def test_published_is_public(self, admin_client):
        minute_id = self._publish_one(admin_client)
        assert admin_client.get(f"/api/minutes/{minute_id}").status_code == 200

    @staticmethod
    def _publish_one(client: TestClient) -> str:
        minute_id = client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        ).json()["minute_id"]
        client.post(
            f"/api/admin/minutes/{minute_id}/validate",
            json={"ack_unresolved": True},
            headers=ADMIN,
        )
        client.post(f"/api/admin/minutes/{minute_id}/publish", headers=ADMIN)
        return minute_id


class TestAdminAuth:
    @pytest.mark.parametrize(
        "method,path",
        [
            ("get", "/api/admin/minutes"),
            ("post", "/api/admin/minutes"),
            ("get", "/api/admin/minutes/min-000001/extraction"),
            ("post", "/api/admin/minutes/min-000001/validate"),
            ("post", "/api/admin/minutes/min-000001/publish"),
        ],
    )
    def test_admin_routes_require_token(self, admin_client, method, path):
        assert getattr(admin_client, method)(path).status_code == 401

    def test_wrong_token_rejected(self, admin_client):
        response = admin_client.get(
            "/api/admin/minutes", headers={"Authorization": "Bearer nope"}
        )
        assert response.status_code == 401


class TestBackOfficeFlow:
    def test_upload_runs_background_extraction(self, admin_client):
        response = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        )
        assert response.status_code == 201
        minute_id = response.json()["minute_id"]
        body = admin_client.get(
            f"/api/admin/minutes/{minute_id}/extraction", headers=ADMIN
        ).json()
        assert body["status"] == "extracted"
        assert body["extraction"]["extractor_id"] == "rule"
        assert body["error"] is None
        assert set(body["preview"]["unresolved_names"]) == {"Ana Prata", "Rui Costa"}

    def test_unparseable_upload_records_error(self, admin_client):
        minute_id = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": "NOT A MINUTE"},
            headers=ADMIN,
        ).json()["minute_id"]
        body = admin_client.get(
            f"/api/admin/minutes/{minute_id}/extraction", headers=ADMIN
        ).json()
        assert body["status"] == "uploaded"
        assert body["extraction"] is None
        assert "line 1" in body["error"]

    def test_unknown_extractor_rejected(self, admin_client):
        response = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "T", "text": MINUTE, "extractor": "regex"},
            headers=ADMIN,
        )
        assert response.status_code == 400
        assert "extractor" in response.json()["fields"]

    def test_missing_body_field_is_422_style_field_map(self, admin_client):
        response = admin_client.post(
            "/api/admin/minutes", json={"text": MINUTE}, headers=ADMIN
        )
        assert response.status_code == 400
        assert any("municipality" in key for key in response.json()["fields"])

    def test_list_filters_by_status(self, admin_client):
        admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        )
        extracted = admin_client.get(
            "/api/admin/minutes", params={"status": "extracted"}, headers=ADMIN
        ).json()["minutes"]
        assert len(extracted) == 1
        published = admin_client.get(
            "/api/admin/minutes", params={"status": "published"}, headers=ADMIN
        ).json()["minutes"]
        assert published == []

    def test_put_draft_edits_before_validation(self, admin_client):
        minute_id = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        ).json()["minute_id"]
        draft = admin_client.get(
            f"/api/admin/minutes/{minute_id}/extraction", headers=ADMIN
        ).json()["extraction"]
        draft["subjects_raw"][0]["title"] = "Budget (amended)"
        response = admin_client.put(
            f"/api/admin/minutes/{minute_id}/extraction", json=draft, headers=ADMIN
        )
        assert response.status_code == 200
        admin_client.post(
            f"/api/admin/minutes/{minute_id}/validate",
            json={"ack_unresolved": True},
            headers=ADMIN,
        )
        admin_client.post(f"/api/admin/minutes/{minute_id}/publish", headers=ADMIN)
        body = admin_client.get(f"/api/minutes/{minute_id}").json()
        assert body["subjects"][0]["title"] == "Budget (amended)"

    def test_malformed_draft_rejected(self, admin_client):
        minute_id = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        ).json()["minute_id"]
        response = admin_client.put(
            f"/api/admin/minutes/{minute_id}/extraction",
            json={"wrong": "shape"},
            headers=ADMIN,
        )
        assert response.status_code == 400

    def test_validate_without_ack_is_400(self, admin_client):
        minute_id = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        ).json()["minute_id"]
        response = admin_client.post(
            f"/api/admin/minutes/{minute_id}/validate", headers=ADMIN
        )
        assert response.status_code == 400
        assert "unresolved_names" in response.json()["fields"]

    def test_publish_before_validate_is_409(self, admin_client):
        minute_id = admin_client.post(
            "/api/admin/minutes",
            json={"municipality": "Testland", "text": MINUTE},
            headers=ADMIN,
        ).json()["minute_id"]
        response = admin_client.post(
            f"/api/admin/minutes/{minute_id}/publish", headers=ADMIN
        )
        assert response.status_code == 409
        assert response.json()["status"] == "extracted"

    def test_publish_updates_public_surface(self, admin_client):
        minute_id = TestDraftVisibility._publish_one(admin_client)
        search_body = admin_client.get("/api/search", params={"q": "budget"}).json()
        assert any(h["minute_id"] == minute_id for h in search_body["hits"])
        municipalities = admin_client.get("/api/municipalities").json()
        assert municipalities[0]["published_minutes"] == 1


class TestNewsletter:
    # subscribing commits, so these tests build their own store instead of
    # touching the shared session one

    def test_subscribe_created_then_idempotent(self, fresh_published_store):
        client = make_client(fresh_published_store)
        first = client.post(
            "/api/newsletter/subscribe",
            json={"email": "reader@example.org", "municipality_ids": ["mun-covilha"]},
        )
        assert first.status_code == 201 and first.json()["created"] is True
        again = client.post(
            "/api/newsletter/subscribe", json={"email": "Reader@Example.org"}
        )
        assert again.status_code == 200 and again.json()["created"] is False

    def test_invalid_email_is_422(self, public_client):
        response = public_client.post(
            "/api/newsletter/subscribe", json={"email": "nope"}
        )
        assert response.status_code == 422
        assert "email" in response.json()["fields"]

    def test_unknown_municipality_is_400(self, public_client):
        response = public_client.post(
            "/api/newsletter/subscribe",
            json={"email": "a@b", "municipality_ids": ["mun-ghost"]},
        )
        assert response.status_code == 400
        assert "municipality_ids" in response.json()["fields"]


class TestSiteGate:
    def test_public_routes_gated(self, fresh_published_store):
        client = make_client(fresh_published_store, site_password="open sesame")
        assert client.get("/api/municipalities").status_code == 401

    def test_access_flow_sets_cookie(self, fresh_published_store):
        client = make_client(fresh_published_store, site_password="open sesame")
        wrong = client.post("/api/access", json={"password": "guess"})
        assert wrong.status_code == 401
        right = client.post("/api/access", json={"password": "open sesame"})
        assert right.status_code == 200 and right.json()["gated"] is True
        assert client.get("/api/municipalities").status_code == 200

    def test_admin_token_bypasses_gate(self, fresh_published_store):
        client = make_client(fresh_published_store, site_password="open sesame")
        assert client.get("/api/municipalities", headers=ADMIN).status_code == 200
        assert client.get("/api/admin/minutes", headers=ADMIN).status_code == 200

    def test_ungated_site_reports_gated_false(self, public_client):
        body = public_client.post("/api/access", json={"password": "anything"}).json()
        assert body == {"gated": False}


class TestDurabilityAcrossRestart:
    def test_new_process_serves_identical_state(self, tmp_path):
        store_dir = tmp_path / "store"
        client = make_client(Store(store_dir))
        minute_id = TestDraftVisibility._publish_one(client)
        before_detail = client.get(f"/api/minutes/{minute_id}").json()
        before_search = client.get("/api/search", params={"q": "budget"}).json()

        restarted = make_client(Store(store_dir))
        assert restarted.get(f"/api/minutes/{minute_id}").json() == before_detail
        assert restarted.get("/api/search", params={"q": "budget"}).json() == before_search

    def test_view_picks_up_external_commits(self, tmp_path):
        store_dir = tmp_path / "store"
        client = make_client(Store(store_dir))
        assert client.get("/api/municipalities").json() == []

        # an out-of-process writer (the CLI path) advances the same store
        service = MinuteService(Store(store_dir))
        minute = service.upload("Testland", MINUTE, "m.txt")
        service.run_extraction(minute.id, "rule")
        service.validate_minute(minute.id, ack_unresolved=True)
        service.publish_minute(minute.id)

        body = client.get("/api/municipalities").json()
        assert body and body[0]["published_minutes"] == 1
        search_body = client.get("/api/search", params={"q": "budget"}).json()
        assert search_body["total"] > 0


def _redact_volatile(record: dict) -> dict:
    cleaned = {}
    for key, value in record.items():
        if key in ("uploaded_at", "published_at", "subscribed_at", "updated_at"):
            cleaned[key] = "<time>" if value else value
        elif isinstance(value, dict):
            cleaned[key] = _redact_volatile(value)
        else:
            cleaned[key] = value
    return cleaned


def _normalized_state(store: Store) -> dict:
    ds = store.load()
    return {
        "municipalities": {k: v.to_dict() for k, v in sorted(ds.municipalities.items())},
        "participants": {k: v.to_dict() for k, v in sorted(ds.participants.items())},
        "topics": {k: v.to_dict() for k, v in sorted(ds.topics.items())},
        "minutes": {k: _redact_volatile(v.to_dict()) for k, v in sorted(ds.minutes.items())},
        "subjects": {k: v.to_dict() for k, v in sorted(ds.subjects.items())},
        "subscribers": {k: _redact_volatile(v.to_dict()) for k, v in sorted(ds.subscribers.items())},
        "extractions": {k: v.to_dict() for k, v in sorted(ds.extractions.items())},
        "extraction_errors": dict(sorted(ds.extraction_errors.items())),
    }


class TestSharedCoreParity:
    """The CLI drives MinuteService directly; the API drives it over HTTP.

    Replaying one operation script through both paths must land both
    stores in the same state (timestamps aside).
    """

    SCRIPT = (
        ("upload", {"municipality": "Covilhã", "text_stem": "covilha-2025-01-10"}),
        ("upload", {"municipality": "Covilhã", "text_stem": "covilha-2025-01-28"}),
        ("validate", {"ref": 0, "ack": True}),
        ("publish", {"ref": 0}),
        ("validate", {"ref": 1, "ack": True}),
        ("subscribe", {"email": "reader@example.org"}),
        ("publish", {"ref": 1}),
        ("upload", {"municipality": "Guimarães", "text_stem": "guimaraes-2025-02-07"}),
        ("validate", {"ref": 2, "ack": True}),
    )

    def replay_via_service(self, store: Store) -> list[str]:
        service = MinuteService(store)
        ids: list[str] = []
        for op, args in self.SCRIPT:
            if op == "upload":
                minute = service.upload(
                    args["municipality"],
                    fixture_text(args["text_stem"]),
                    f"{args['text_stem']}.txt",
                )
                service.run_extraction(minute.id, "rule")
                ids.append(minute.id)
            elif op == "validate":
                service.validate_minute(ids[args["ref"]], ack_unresolved=args["ack"])
            elif op == "publish":
                service.publish_minute(ids[args["ref"]])
            elif op == "subscribe":
                service.subscribe(args["email"])
        return ids

    def replay_via_api(self, store: Store) -> list[str]:
        client = make_client(store)
        ids: list[str] = []
        for op, args in self.SCRIPT:
            if op == "upload":
                response = client.post(
                    "/api/admin/minutes",
                    json={
                        "municipality": args["municipality"],
                        "text": fixture_text(args["text_stem"]),
                        "source_filename": f"{args['text_stem']}.txt",
                    },
                    headers=ADMIN,
                )
                assert response.status_code == 201
                ids.append(response.json()["minute_id"])
            elif op == "validate":
                response = client.post(
                    f"/api/admin/minutes/{ids[args['ref']]}/validate",
                    json={"ack_unresolved": args["ack"]},
                    headers=ADMIN,
                )
                assert response.status_code == 200
            elif op == "publish":
                response = client.post(
                    f"/api/admin/minutes/{ids[args['ref']]}/publish", headers=ADMIN
                )
                assert response.status_code == 200
            elif op == "subscribe":
                response = client.post(
                    "/api/newsletter/subscribe", json={"email": args["email"]}
                )
                assert response.status_code in (200, 201)
        return ids

    def test_identical_state_transitions(self, tmp_path):
        service_store = Store(tmp_path / "via-service")
        api_store = Store(tmp_path / "via-api")
        assert self.replay_via_service(service_store) == self.replay_via_api(api_store)
        assert _normalized_state(service_store) == _normalized_state(api_store)

    def test_parity_holds_under_random_scripts(self, tmp_path):
        rng = random.Random(99)
        stems = list(FIXTURE_ORDER)
        for round_no in range(3):
            script: list[tuple[str, dict]] = []
            uploaded = 0
            for _ in range(8):
                action = rng.choice(("upload", "validate", "publish", "subscribe"))
                if action == "upload" and stems:
                    stem = stems[rng.randrange(len(stems))]
                    script.append(
                        ("upload", {"municipality": municipality_of(stem), "text_stem": stem})
                    )
                    uploaded += 1
                elif action in ("validate", "publish") and uploaded:
                    script.append((action, {"ref": rng.randrange(uploaded), "ack": True}))
                elif action == "subscribe":
                    script.append(("subscribe", {"email": f"r{round_no}@example.org"}))
            runner = TestSharedCoreParity()
            runner.SCRIPT = tuple(script)

            service_store = Store(tmp_path / f"svc-{round_no}")
            api_store = Store(tmp_path / f"api-{round_no}")
            service_error = api_error = None
            try:
                runner.replay_via_service(service_store)
            except Exception as exc:
                service_error = type(exc).__name__
            try:
                ids = []
                client = make_client(api_store)
                for op, args in runner.SCRIPT:
                    if op == "upload":
                        response = client.post(
                            "/api/admin/minutes",
                            json={
                                "municipality": args["municipality"],
                                "text": fixture_text(args["text_stem"]),
                            },
                            headers=ADMIN,
                        )
                        ids.append(response.json()["minute_id"])
                    elif op == "validate":
                        response = client.post(
                            f"/api/admin/minutes/{ids[args['ref']]}/validate",
                            json={"ack_unresolved": True},
                            headers=ADMIN,
                        )
                        if response.status_code >= 400:
                            api_error = "error"
                            break
                    elif op == "publish":
                        response = client.post(
                            f"/api/admin/minutes/{ids[args['ref']]}/publish",
                            headers=ADMIN,
                        )
                        if response.status_code >= 400:
                            api_error = "error"
                            break
                    elif op == "subscribe":
                        client.post(
                            "/api/newsletter/subscribe", json={"email": args["email"]}
                        )
            except Exception as exc:
                api_error = type(exc).__name__
            # both paths either fail at the same script or produce equal state
            assert (service_error is None) == (api_error is None)
            if service_error is None:
                left = _normalized_state(service_store)
                right = _normalized_state(api_store)
                assert left["minutes"].keys() == right["minutes"].keys()
                statuses_left = {k: v["status"] for k, v in left["minutes"].items()}
                statuses_right = {k: v["status"] for k, v in right["minutes"].items()}
                assert statuses_left == statuses_right


class TestLifecycleSafetyOverApi:
    def test_public_never_sees_unpublished(self, tmp_path):
        rng = random.Random(4242)
        client = make_client(Store(tmp_path / "store"))
        minute_ids: list[str] = []
        for _ in range(40):
            action = rng.choice(("upload", "validate", "publish"))
            if action == "upload" or not minute_ids:
                minute_ids.append(
                    client.post(
                        "/api/admin/minutes",
                        json={"municipality": "Testland", "text": MINUTE},
                        headers=ADMIN,
                    ).json()["minute_id"]
                )
            else:
                target = rng.choice(minute_ids)
                client.post(
                    f"/api/admin/minutes/{target}/validate",
                    json={"ack_unresolved": True},
                    headers=ADMIN,
                )
                if action == "publish":
                    client.post(f"/api/admin/minutes/{target}/publish", headers=ADMIN)
            admin_view = {
                m["id"]: m["status"]
                for m in client.get("/api/admin/minutes", headers=ADMIN).json()["minutes"]
            }
            for minute_id, status in admin_view.items():
                public = client.get(f"/api/minutes/{minute_id}")
                if status == "published":
                    assert public.status_code == 200
                else:
                    assert public.status_code == 404
