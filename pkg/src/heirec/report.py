"""Report rendering: quantile table, per-user CSV, and figures.

The simulate path writes a JSON report plus human-readable artifacts next
to it: a plain-text quantile shift table, a delimited per-user outcome
file, and before/after distribution figures.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .evaluation import EvaluationReport, UserOutcome  # noqa: E402

_ROW_LABELS = ("25th", "50th", "75th")
_ROW_KEYS = ("q25", "q50", "q75")


def format_quantile_table(report: EvaluationReport) -> str:
    """Fixed-layout text table: Quantile | Before | After | Delta."""
    lines = [
        "Quantile | Before | After | Delta",
        "---------+--------+-------+------",
    ]
    for label, key in zip(_ROW_LABELS, _ROW_KEYS):
        before = report.quantiles["before"][key]
        after = report.quantiles["after"][key]
        lines.append(f"{label:<8} | {before:6.2f} | {after:5.2f} | {after - before:5.2f}")
    return "\n".join(lines) + "\n"


def write_user_outcomes_csv(path: str | Path, outcomes: Sequence[UserOutcome]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seqn", "hei_before", "hei_after", "delta", "n_steps"])
        for o in outcomes:
            writer.writerow([o.seqn, repr(o.h_base), repr(o.h_rec), repr(o.delta), o.n_steps])


def render_histogram_figure(report: EvaluationReport, path: str | Path) -> None:
    """Overlaid before/after score histograms from the report's fixed bins."""
    edges = report.histogram["bin_edges"]
    centers = [(a + b) / 2 for a, b in zip(edges[:-1], edges[1:])]
    width = (edges[1] - edges[0]) * 0.42
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar([c - width / 2 for c in centers], report.histogram["before"], width=width,
           label="before", color="#6b8fc2", edgecolor="white")
    ax.bar([c + width / 2 for c in centers], report.histogram["after"], width=width,
           label="after", color="#d98a4e", edgecolor="white")
    ax.axvline(report.tau, color="gray", linestyle="--", linewidth=1,
               label=f"threshold {report.tau:g}")
    ax.set_xlabel("HEI-2020 total score")
    ax.set_ylabel("users")
    ax.set_title("Score distribution before and after recommendations")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_quantile_figure(report: EvaluationReport, path: str | Path) -> None:
    """Grouped bars of the quantile shift mirroring the text table."""
    before = [report.quantiles["before"][k] for k in _ROW_KEYS]
    after = [report.quantiles["after"][k] for k in _ROW_KEYS]
    xs = range(len(_ROW_LABELS))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([x - 0.18 for x in xs], before, width=0.36, label="before", color="#6b8fc2")
    ax.bar([x + 0.18 for x in xs], after, width=0.36, label="after", color="#d98a4e")
    ax.set_xticks(list(xs), [f"{lbl} pct" for lbl in _ROW_LABELS])
    ax.set_ylabel("HEI-2020 total score")
    ax.set_title("Quantile shift")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report_bundle(report: EvaluationReport, outcomes: Sequence[UserOutcome],
                        out_json: str | Path) -> dict[str, Path]:
    """Write report.json plus table/CSV/figures alongside it; returns the paths."""
    out_json = Path(out_json)
    out_json.parent.mkdir(parents=True, exist_ok=True)
    stem = out_json.with_suffix("")
    paths = {
        "report": out_json,
        "table": stem.with_name(stem.name + "_table.txt"),
        "outcomes": stem.with_name(stem.name + "_users.csv"),
        "histogram": stem.with_name(stem.name + "_histogram.png"),
        "quantiles": stem.with_name(stem.name + "_quantiles.png"),
    }
    out_json.write_text(report.to_json(), encoding="utf-8")
    paths["table"].write_text(format_quantile_table(report), encoding="utf-8")
    write_user_outcomes_csv(paths["outcomes"], outcomes)
    render_histogram_figure(report, paths["histogram"])
    render_quantile_figure(report, paths["quantiles"])
    return paths
