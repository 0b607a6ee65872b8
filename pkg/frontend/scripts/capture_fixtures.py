"""Regenerate tests/fixtures.json from a live backend.

The browser tests run against a mocked fetch whose payloads must be real
API output, not hand-typed approximations. This script stands up the
backend in-process over the six-minute corpus, replays the requests the
client issues, and freezes the responses. Run it from the repository
root after changing the API or the corpus:

    python3 frontend/scripts/capture_fixtures.py

Requires the Python package installed (pip install -e .).
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path
from urllib.parse import urlsplit, parse_qsl

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(REPO_ROOT / "tests"))

from fastapi.testclient import TestClient  # noqa: E402

from conftest import FIXTURE_ORDER, build_published_store, fixture_text, municipality_of  # noqa: E402
from openminutes.api import ApiConfig, create_app  # noqa: E402
from openminutes.pipeline import MinuteService  # noqa: E402
from openminutes.store import Store  # noqa: E402

ADMIN_TOKEN = "test-admin"
OUT_PATH = Path(__file__).resolve().parent.parent / "tests" / "fixtures.json"

# Every GET the public surfaces issue, written exactly as the client
# canonicalizes them (sorted query pairs), with the expected status.
PUBLIC_GETS = [
    ("/api/municipalities", 200),
    ("/api/municipalities/mun-covilha/overview", 200),
    ("/api/municipalities/mun-guimaraes/overview", 200),
    ("/api/municipalities/mun-nowhere/overview", 404),
    ("/api/municipalities/mun-covilha/timeline", 200),
    ("/api/municipalities/mun-guimaraes/timeline", 200),
    ("/api/municipalities/mun-covilha/minutes", 200),
    ("/api/municipalities/mun-covilha/minutes?topic=t-budget", 200),
    ("/api/municipalities/mun-covilha/minutes?topic=t-budget&topic=t-culture", 200),
    ("/api/municipalities/mun-covilha/minutes?meeting_type=ordinary&topic=t-budget", 200),
    ("/api/search?q=health&scope=subjects", 200),
    ("/api/search?q=health&scope=all", 200),
    ("/api/search?q=xyzzy&scope=all", 200),
    ("/api/minutes/min-000001", 200),
    ("/api/minutes/min-000002", 200),
    ("/api/minutes/min-000003", 200),
    ("/api/minutes/min-000004", 200),
    ("/api/minutes/min-000005", 200),
    ("/api/minutes/min-000006", 200),
    ("/api/minutes/min-000099", 404),
]


def canonical_key(method: str, url: str) -> str:
    """Mirror of normalizeKey in tests/mock.ts: path + sorted query pairs."""
    parts = urlsplit(url)
    pairs = sorted(parse_qsl(parts.query, keep_blank_values=True))
    query = "&".join(f"{k}={v}" for k, v in pairs)
    return f"{method} {parts.path}" + (f"?{query}" if query else "")


def capture_public() -> dict:
    store = build_published_store(Path(tempfile.mkdtemp()) / "store")
    client = TestClient(create_app(store, ApiConfig(admin_token=ADMIN_TOKEN)))
    requests = {}
    for url, expected in PUBLIC_GETS:
        response = client.get(url)
        assert response.status_code == expected, f"{url} -> {response.status_code}"
        requests[canonical_key("GET", url)] = {
            "status": response.status_code,
            "body": response.json(),
        }
    return requests


def capture_admin() -> dict:
    """Back-office walkthrough on a fresh store, recording every response.

    A fresh store has no known participants, so the first draft's preview
    carries unresolved names and validation demands acknowledgment: the
    exact situation the review screen has to surface.
    """
    store = Store(str(Path(tempfile.mkdtemp()) / "store"))
    service = MinuteService(store)
    stem = FIXTURE_ORDER[0]
    minute = service.upload(
        municipality_of(stem), fixture_text(stem), source_filename=f"{stem}.txt"
    )
    service.run_extraction(minute.id, "rule")

    client = TestClient(create_app(store, ApiConfig(admin_token=ADMIN_TOKEN)))
    auth = {"Authorization": f"Bearer {ADMIN_TOKEN}"}
    mid = minute.id

    listing = client.get("/api/admin/minutes", headers=auth).json()
    extraction = client.get(f"/api/admin/minutes/{mid}/extraction", headers=auth).json()
    raw_text = client.get(f"/api/minutes/{mid}/raw", headers=auth).text
    unauthorized = client.get("/api/admin/minutes")
    assert unauthorized.status_code == 401

    validate_no_ack = client.post(
        f"/api/admin/minutes/{mid}/validate", json={"ack_unresolved": False}, headers=auth
    )
    assert validate_no_ack.status_code == 400
    publish_early = client.post(f"/api/admin/minutes/{mid}/publish", headers=auth)
    assert publish_early.status_code == 409

    draft = extraction["extraction"]
    edited = json.loads(json.dumps(draft))
    flips = [
        v
        for s in edited["subjects_raw"]
        if s["votes"]
        for v in s["votes"]
        if v["position"] == "favor"
    ]
    assert flips, "expected at least one favor vote to flip in the seed draft"
    flips[0]["position"] = "against"
    put_edited = client.put(
        f"/api/admin/minutes/{mid}/extraction", json=edited, headers=auth
    )
    assert put_edited.status_code == 200

    validate_ok = client.post(
        f"/api/admin/minutes/{mid}/validate", json={"ack_unresolved": True}, headers=auth
    )
    assert validate_ok.status_code == 200
    put_after_validate = client.put(
        f"/api/admin/minutes/{mid}/extraction", json=edited, headers=auth
    )
    assert put_after_validate.status_code == 409
    publish_ok = client.post(f"/api/admin/minutes/{mid}/publish", headers=auth)
    assert publish_ok.status_code == 200
    publish_again = client.post(f"/api/admin/minutes/{mid}/publish", headers=auth)
    assert publish_again.status_code == 409

    upload = client.post(
        "/api/admin/minutes",
        json={
            "municipality": "covilha",
            "text": fixture_text(FIXTURE_ORDER[1]),
            "source_filename": f"{FIXTURE_ORDER[1]}.txt",
            "extractor": "rule",
        },
        headers=auth,
    )
    assert upload.status_code == 201

    return {
        "token": ADMIN_TOKEN,
        "draft_minute_id": mid,
        "minutes": listing["minutes"],
        "extraction": extraction,
        "raw_text": raw_text,
        "unauthorized": unauthorized.json(),
        "validate_no_ack": validate_no_ack.json(),
        "publish_early": {"status": 409, "body": publish_early.json()},
        "put_response": put_edited.json(),
        "validate_ok": validate_ok.json(),
        "put_after_validate": {"status": 409, "body": put_after_validate.json()},
        "publish_ok": publish_ok.json(),
        "publish_again": {"status": 409, "body": publish_again.json()},
        "upload_response": {"status": 201, "body": upload.json()},
    }


def capture_newsletter() -> dict:
    store = build_published_store(Path(tempfile.mkdtemp()) / "store")
    client = TestClient(create_app(store, ApiConfig(admin_token=ADMIN_TOKEN)))
    first = client.post(
        "/api/newsletter/subscribe",
        json={"email": "reader@example.org", "municipality_ids": []},
    )
    assert first.status_code == 201
    repeat = client.post(
        "/api/newsletter/subscribe",
        json={"email": "reader@example.org", "municipality_ids": []},
    )
    assert repeat.status_code == 200
    invalid = client.post(
        "/api/newsletter/subscribe", json={"email": "not-an-email", "municipality_ids": []}
    )
    assert invalid.status_code == 422
    return {
        "created": {"status": 201, "body": first.json()},
        "repeat": {"status": 200, "body": repeat.json()},
        "invalid": {"status": 422, "body": invalid.json()},
    }


def capture_gate() -> dict:
    store = build_published_store(Path(tempfile.mkdtemp()) / "store")
    app = create_app(
        store, ApiConfig(admin_token=ADMIN_TOKEN, site_access_password="open-sesame")
    )
    client = TestClient(app)
    blocked = client.get("/api/municipalities")
    assert blocked.status_code == 401
    wrong = client.post("/api/access", json={"password": "nope"})
    assert wrong.status_code == 401
    granted = client.post("/api/access", json={"password": "open-sesame"})
    assert granted.status_code == 200
    return {
        "password": "open-sesame",
        "blocked": {"status": 401, "body": blocked.json()},
        "wrong": {"status": 401, "body": wrong.json()},
        "granted": {"status": 200, "body": granted.json()},
    }


def main() -> None:
    fixtures = {
        "requests": capture_public(),
        "admin": capture_admin(),
        "newsletter": capture_newsletter(),
        "gate": capture_gate(),
    }
    OUT_PATH.write_text(
        json.dumps(fixtures, indent=1, ensure_ascii=True, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {OUT_PATH} ({OUT_PATH.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
