"""Operator command line: ingest, extract, validate, publish, index,
serve, eval, and newsletter digest.

Every command prints human-readable output first and finishes with a
single JSON summary object on the last stdout line. Exit codes: 0 on
success, 1 for validation and other user-facing errors (including lock
contention and bad flags), 2 for transport and internal errors.
"""

from __future__ import annotations

import json
import sys
import traceback
from pathlib import Path
from typing import Any, Callable, Sequence

import click

from .errors import (
    ConfigError,
    ExtractionInvalidError,
    IntegrityError,
    LifecycleError,
    LoadError,
    NotFoundError,
    OpenMinutesError,
    ParseError,
    StoreLockedError,
    TransportError,
    ValidationError,
)
from .evaluation import (
    NgramEmbeddingProvider,
    RemoteEmbeddingProvider,
    evaluate_directories,
)
from .extraction import LlmClient, LlmClientConfig, parse_minute_date
from .pipeline import MinuteService, digest_text
from .report import render_table, write_report
from .store import Store

USER_ERRORS = (
    ValidationError,
    LifecycleError,
    NotFoundError,
    StoreLockedError,
    ParseError,
    ConfigError,
)
INTERNAL_ERRORS = (TransportError, ExtractionInvalidError, LoadError, IntegrityError)


def _emit(payload: dict[str, Any]) -> None:
    click.echo(json.dumps(payload, ensure_ascii=False))


def _fail(exc: BaseException, code: int) -> None:
    click.echo(f"error: {exc}", err=True)
    _emit({"ok": False, "error": str(exc), "kind": type(exc).__name__})
    sys.exit(code)


def _run(body: Callable[[], dict[str, Any]]) -> None:
    try:
        summary = body()
    except USER_ERRORS as exc:
        _fail(exc, 1)
    except INTERNAL_ERRORS as exc:
        _fail(exc, 2)
    except OpenMinutesError as exc:
        _fail(exc, 2)
    except Exception as exc:  # pragma: no cover - defensive
        traceback.print_exc()
        _fail(exc, 2)
    else:
        _emit({"ok": True, **summary})


store_option = click.option(
    "--store",
    "store_dir",
    required=True,
    type=click.Path(file_okay=False),
    help="Store directory (created on first use).",
)


@click.group()
def cli() -> None:
    """Municipal meeting minutes: extraction, search, and publishing."""


@cli.command()
@store_option
@click.option("--municipality", "municipality_ref", required=True, help="Slug, id, or name.")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
def ingest(store_dir: str, municipality_ref: str, files: tuple[str, ...]) -> None:
    """Upload raw minute files into the store."""

    def body() -> dict[str, Any]:
        service = MinuteService(Store(store_dir))
        minute_ids = []
        for file_path in files:
            text = Path(file_path).read_text(encoding="utf-8")
            minute = service.upload(
                municipality_ref, text, source_filename=Path(file_path).name
            )
            minute_ids.append(minute.id)
            click.echo(f"ingested {file_path} as {minute.id}")
        return {"command": "ingest", "minute_ids": minute_ids, "count": len(minute_ids)}

    _run(body)


@cli.command()
@store_option
@click.option("--extractor", type=click.Choice(["rule", "llm"]), default="rule")
@click.option("--minute", "minute_id", default=None, help="Extract a single minute.")
@click.option("--all-pending", is_flag=True, help="Extract every uploaded minute.")
@click.option("--llm-endpoint", envvar="OPENMINUTES_LLM_ENDPOINT", default=None)
@click.option("--llm-model", envvar="OPENMINUTES_LLM_MODEL", default=None)
@click.option(
    "--llm-key-env",
    default="OPENMINUTES_LLM_API_KEY",
    show_default=True,
    help="Name of the environment variable holding the LLM API key.",
)
def extract(
    store_dir: str,
    extractor: str,
    minute_id: str | None,
    all_pending: bool,
    llm_endpoint: str | None,
    llm_model: str | None,
    llm_key_env: str,
) -> None:
    """Run extraction on uploaded minutes."""

    def body() -> dict[str, Any]:
        if bool(minute_id) == all_pending:
            raise ValidationError("pass exactly one of --minute or --all-pending")
        service = MinuteService(Store(store_dir))
        client = None
        if extractor == "llm":
            if not llm_endpoint or not llm_model:
                raise ConfigError(
                    "llm extractor needs --llm-endpoint and --llm-model "
                    "(or the matching environment variables)"
                )
            client = LlmClient(
                LlmClientConfig(
                    endpoint_url=llm_endpoint,
                    api_key_env_var_name=llm_key_env,
                    model_id=llm_model,
                )
            )
        if minute_id:
            service.run_extraction(minute_id, extractor, client=client)
            click.echo(f"extracted {minute_id}")
            return {"command": "extract", "extractor": extractor, "extracted": [minute_id], "failed": {}}
        extracted: list[str] = []
        failed: dict[str, str] = {}
        for pending_id in service.pending_minute_ids():
            try:
                service.run_extraction(pending_id, extractor, client=client)
                extracted.append(pending_id)
                click.echo(f"extracted {pending_id}")
            except (ParseError, ExtractionInvalidError) as exc:
                failed[pending_id] = str(exc)
                click.echo(f"failed {pending_id}: {exc}", err=True)
        return {"command": "extract", "extractor": extractor, "extracted": extracted, "failed": failed}

    _run(body)


@cli.command()
@store_option
@click.option("--minute", "minute_id", required=True)
@click.option("--ack-unresolved", is_flag=True, help="Accept provisional participants.")
def validate(store_dir: str, minute_id: str, ack_unresolved: bool) -> None:
    """Resolve and validate an extracted minute."""

    def body() -> dict[str, Any]:
        service = MinuteService(Store(store_dir))
        minute = service.validate_minute(minute_id, ack_unresolved=ack_unresolved)
        click.echo(f"validated {minute.id} ({len(minute.subject_ids)} subjects)")
        return {
            "command": "validate",
            "minute_id": minute.id,
            "status": minute.status,
            "subjects": len(minute.subject_ids),
        }

    _run(body)


@cli.command()
@store_option
@click.option("--minute", "minute_id", required=True)
def publish(store_dir: str, minute_id: str) -> None:
    """Publish a validated minute and rebuild the search index."""

    def body() -> dict[str, Any]:
        service = MinuteService(Store(store_dir))
        minute, snapshot, warnings = service.publish_minute(minute_id)
        for warning in warnings:
            click.echo(f"warning: {warning}", err=True)
        click.echo(f"published {minute.id}; index has {snapshot.n} units")
        return {
            "command": "publish",
            "minute_id": minute.id,
            "status": minute.status,
            "index_units": snapshot.n,
            "warnings": warnings,
        }

    _run(body)


@cli.group()
def index() -> None:
    """Search index maintenance."""


@index.command("rebuild")
@store_option
def index_rebuild(store_dir: str) -> None:
    """Rebuild the index snapshot from published minutes."""

    def body() -> dict[str, Any]:
        service = MinuteService(Store(store_dir))
        snapshot, warnings = service.rebuild_index()
        for warning in warnings:
            click.echo(f"warning: {warning}", err=True)
        click.echo(f"index rebuilt: {snapshot.n} units")
        return {"command": "index rebuild", "index_units": snapshot.n, "warnings": warnings}

    _run(body)


@cli.command()
@store_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--site-password", default=None, help="Gate all public routes behind this password.")
@click.option(
    "--admin-token",
    envvar="OPENMINUTES_ADMIN_TOKEN",
    required=True,
    help="Bearer token for back-office routes.",
)
def serve(
    store_dir: str, host: str, port: int, site_password: str | None, admin_token: str
) -> None:
    """Serve the HTTP API over the store."""

    def body() -> dict[str, Any]:
        import uvicorn

        from .api import ApiConfig, create_app

        config = ApiConfig(
            admin_token=admin_token,
            site_access_password=site_password,
            host=host,
            port=port,
        )
        config.validate()
        store = Store(store_dir)
        store.load()  # fail fast on a corrupt store
        app = create_app(store, config)
        _emit(
            {
                "ok": True,
                "command": "serve",
                "url": f"http://{host}:{port}",
                "gated": site_password is not None,
            }
        )
        uvicorn.run(app, host=host, port=port, log_level="warning", access_log=False)
        return {}

    try:
        body()
    except USER_ERRORS as exc:
        _fail(exc, 1)
    except INTERNAL_ERRORS as exc:
        _fail(exc, 2)


@cli.command("eval")
@click.option("--gold", "gold_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--pred", "pred_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--provider", type=click.Choice(["ngram", "remote"]), default="ngram", show_default=True)
@click.option("--out", "out_dir", default=None, type=click.Path(file_okay=False), help="Write eval-report.json, metrics.csv and figures here.")
@click.option("--embed-endpoint", envvar="OPENMINUTES_EMBED_ENDPOINT", default=None)
@click.option("--embed-model", envvar="OPENMINUTES_EMBED_MODEL", default=None)
@click.option("--embed-key-env", default="OPENMINUTES_EMBED_API_KEY", show_default=True)
def eval_command(
    gold_dir: str,
    pred_dir: str,
    provider: str,
    out_dir: str | None,
    embed_endpoint: str | None,
    embed_model: str | None,
    embed_key_env: str,
) -> None:
    """Score predicted extractions against gold annotations."""

    def body() -> dict[str, Any]:
        if provider == "remote":
            if not embed_endpoint or not embed_model:
                raise ConfigError(
                    "remote provider needs --embed-endpoint and --embed-model"
                )
            embedder = RemoteEmbeddingProvider(
                endpoint_url=embed_endpoint,
                api_key_env_var_name=embed_key_env,
                model_id=embed_model,
            )
        else:
            embedder = NgramEmbeddingProvider()
        report = evaluate_directories(gold_dir, pred_dir, embedder)
        click.echo(render_table(report))
        summary: dict[str, Any] = {
            "command": "eval",
            "metadata_macro_f1": report.metadata["macro_f1"],
            "voting_macro_f1": report.voting["macro_f1"],
            "rouge_l_f1": report.subjects["rouge_l"]["f1"],
            "bleu": report.subjects["bleu"],
            "documents": report.corpus["documents"],
        }
        if out_dir:
            summary["artifacts"] = write_report(report, out_dir)
        return summary

    _run(body)


@cli.group()
def newsletter() -> None:
    """Newsletter utilities."""


@newsletter.command("digest")
@store_option
@click.option("--since", "since_raw", required=True, help="Date (ISO or DD-MM-YYYY).")
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False), help="Write the digest here instead of stdout.")
def newsletter_digest(store_dir: str, since_raw: str, out_path: str | None) -> None:
    """Render the plain-text digest of minutes published since a date."""

    def body() -> dict[str, Any]:
        since = parse_minute_date(since_raw)
        dataset = Store(store_dir).load()
        text, n_minutes = digest_text(dataset, since)
        if out_path:
            Path(out_path).write_text(text, encoding="utf-8")
        else:
            click.echo(text)
        return {
            "command": "newsletter digest",
            "since": since.isoformat(),
            "minutes": n_minutes,
            "out": out_path,
        }

    _run(body)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except SystemExit as exc:
        return int(exc.code or 0)
    except click.UsageError as exc:
        message = exc.format_message()
        click.echo(f"error: {message}", err=True)
        _emit({"ok": False, "error": message, "kind": "usage"})
        return 1
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        _emit({"ok": False, "error": exc.format_message(), "kind": "cli"})
        return 1
    except click.Abort:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
