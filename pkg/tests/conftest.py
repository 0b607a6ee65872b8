"""Shared fixtures: the six-minute corpus in various stages."""

from __future__ import annotations

from pathlib import Path

import pytest

from openminutes import pipeline
from openminutes.extraction import extract_rule_based
from openminutes.pipeline import MinuteService
from openminutes.store import Dataset, Store

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

# Ingest order: per municipality, oldest first.
FIXTURE_ORDER = (
    "covilha-2025-01-10",
    "covilha-2025-01-28",
    "covilha-2025-02-21",
    "covilha-2025-03-14",
    "guimaraes-2025-02-07",
    "guimaraes-2025-03-03",
)


def municipality_of(stem: str) -> str:
    return stem.rsplit("-", 3)[0]


def fixture_text(stem: str) -> str:
    return (FIXTURE_DIR / f"{stem}.txt").read_text(encoding="utf-8")


def build_published_store(root: Path) -> Store:
    """Full walkthrough: ingest, rule extraction, validate, publish."""
    store = Store(str(root))
    service = MinuteService(store)
    for stem in FIXTURE_ORDER:
        minute = service.upload(
            municipality_of(stem), fixture_text(stem), source_filename=f"{stem}.txt"
        )
        service.run_extraction(minute.id, "rule")
        service.validate_minute(minute.id, ack_unresolved=True)
        service.publish_minute(minute.id)
    return store


def build_published_dataset() -> Dataset:
    """Same walkthrough as build_published_store, purely in memory."""
    dataset = Dataset()
    for stem in FIXTURE_ORDER:
        minute = pipeline.op_upload(
            dataset, municipality_of(stem), fixture_text(stem), f"{stem}.txt"
        )
        pipeline.op_record_extraction(
            dataset, minute.id, extract_rule_based(fixture_text(stem))
        )
        pipeline.op_validate(dataset, minute.id, ack_unresolved=True)
        pipeline.op_publish(dataset, minute.id)
    return dataset


@pytest.fixture(scope="session")
def published_store(tmp_path_factory) -> Store:
    """Read-only seeded store; tests that mutate must build their own."""
    return build_published_store(tmp_path_factory.mktemp("published-store"))


@pytest.fixture()
def fresh_store(tmp_path) -> Store:
    return Store(str(tmp_path / "store"))


@pytest.fixture()
def fresh_published_store(tmp_path) -> Store:
    return build_published_store(tmp_path / "store")


@pytest.fixture(scope="session")
def published_dataset(published_store) -> Dataset:
    return published_store.load()


@pytest.fixture(scope="session")
def published_snapshot(published_store):
    snapshot = published_store.load_snapshot()
    assert snapshot is not None
    return snapshot
