"""Rendering of evaluation reports: text table, CSV, and figures.

The CSV is the machine-readable artifact; the PNG figures are written
next to it so a report directory is self-contained.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .evaluation import EvalReport, METADATA_FIELDS, VOTE_CLASSES


def _rows(report: EvalReport) -> list[tuple[str, float]]:
    rows: list[tuple[str, float]] = []
    for field_name in METADATA_FIELDS:
        score = report.metadata["per_field"][field_name]
        rows.append((f"metadata/{field_name}/f1", score["f1"]))
    rows.append(("metadata/macro_f1", report.metadata["macro_f1"]))
    rouge = report.subjects["rouge_l"]
    rows.append(("subjects/rouge_l/precision", rouge["precision"]))
    rows.append(("subjects/rouge_l/recall", rouge["recall"]))
    rows.append(("subjects/rouge_l/f1", rouge["f1"]))
    rows.append(("subjects/bleu", report.subjects["bleu"]))
    for cls in VOTE_CLASSES:
        rows.append((f"voting/{cls}/f1", report.voting["per_class"][cls]["f1"]))
    rows.append(("voting/macro_f1", report.voting["macro_f1"]))
    return rows


def render_table(report: EvalReport) -> str:
    rows = _rows(report)
    width = max(len(name) for name, _ in rows)
    lines = [f"{'metric'.ljust(width)}  value", f"{'-' * width}  -----"]
    lines.extend(f"{name.ljust(width)}  {value:.4f}" for name, value in rows)
    corpus = report.corpus
    lines.append("")
    lines.append(
        "documents={documents} gold_subjects={gold_subjects} "
        "pred_subjects={pred_subjects} matched={matched_subjects}".format(**corpus)
    )
    return "\n".join(lines)


def write_csv(report: EvalReport, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["metric", "value"])
        for name, value in _rows(report):
            writer.writerow([name, f"{value:.6f}"])


def write_figures(report: EvalReport, directory: Path) -> list[Path]:
    """Render summary bar charts as PNG files; returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written: list[Path] = []

    labels = ["metadata F1", "ROUGE-L F1", "BLEU", "voting F1"]
    values = [
        report.metadata["macro_f1"],
        report.subjects["rouge_l"]["f1"],
        report.subjects["bleu"],
        report.voting["macro_f1"],
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(labels, values, color="#2b6cb0")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.set_title("extraction quality overview")
    for i, value in enumerate(values):
        ax.text(i, value + 0.02, f"{value:.2f}", ha="center", fontsize=9)
    fig.tight_layout()
    overview = directory / "overview.png"
    fig.savefig(overview, dpi=120)
    plt.close(fig)
    written.append(overview)

    fields = list(METADATA_FIELDS)
    field_values = [report.metadata["per_field"][f]["f1"] for f in fields]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(fields, field_values, color="#2f855a")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("F1")
    ax.set_title("metadata fields")
    for i, value in enumerate(field_values):
        ax.text(i, value + 0.02, f"{value:.2f}", ha="center", fontsize=9)
    fig.tight_layout()
    fields_path = directory / "metadata_fields.png"
    fig.savefig(fields_path, dpi=120)
    plt.close(fig)
    written.append(fields_path)

    return written


def write_report(report: EvalReport, out_dir: str | Path) -> dict[str, object]:
    """Write eval-report.json, metrics.csv and figures into out_dir."""
    import json

    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    json_path = directory / "eval-report.json"
    json_path.write_text(
        json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    csv_path = directory / "metrics.csv"
    write_csv(report, csv_path)
    figures = write_figures(report, directory)
    return {
        "report": str(json_path),
        "csv": str(csv_path),
        "figures": [str(p) for p in figures],
    }
