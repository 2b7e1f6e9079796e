"""Serialization of evaluation results: CSV tables, a JSON summary,
rendered figures, and a reproducible configuration echo.

CSV cells use Python's shortest-round-trip float formatting, so reruns
with identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import fields
from pathlib import Path
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .config import RunConfig, format_config
from .harness import EvalReport, PairRow, aggregate

_SUMMARY_LABELS = ("average", "weighted")

TABLE_ORDER = (
    "outer_hausdorff", "outer_hausdorff_wins", "outer_aesthetics",
    "inner_whitespace", "inner_whitespace_wins", "inner_aesthetics",
    "multi_shape_change", "multi_shape_change_wins",
    "multi_whitespace", "multi_aesthetics",
)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_pairs_csv(path: Path, rows: Sequence[PairRow]) -> None:
    names = [f.name for f in fields(PairRow)]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(names)
        for row in rows:
            writer.writerow([_cell(getattr(row, name)) for name in names])


def write_table_csv(path: Path, table: List[dict]) -> None:
    if not table:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write("")
        return
    names = list(table[0].keys())
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(names)
        for row in table:
            writer.writerow([_cell(row.get(name)) for name in names])


def _data_rows(table: List[dict]) -> List[dict]:
    return [t for t in table if t["change_type"] not in _SUMMARY_LABELS]


def _bar_labels(rows: List[dict]) -> List[str]:
    return [r["change_type"] if r["approach"] == "-"
            else f"{r['change_type']}\n{r['approach']}" for r in rows]


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=110, metadata={"Software": "dagshape"},
                bbox_inches="tight")
    plt.close(fig)


def _figure_ratios(tables: Dict[str, List[dict]], path: Path) -> bool:
    """Enhanced-over-baseline ratio per population and change type."""
    panels = [("outer_hausdorff", "hull distance"),
              ("inner_whitespace", "relative white space"),
              ("multi_shape_change", "shape change (1 - IoU)"),
              ("multi_whitespace", "relative white space")]
    panels = [(k, label) for k, label in panels if _data_rows(tables.get(k, []))]
    if not panels:
        return False
    fig, axes = plt.subplots(1, len(panels),
                             figsize=(3.4 * len(panels) + 1, 4.2))
    axes = [axes] if len(panels) == 1 else list(axes)
    for ax, (key, label) in zip(axes, panels):
        rows = _data_rows(tables[key])
        values = [r["ratio"] if r["ratio"] is not None else 0.0 for r in rows]
        ax.bar(range(len(rows)), values, color="#4a74c9")
        ax.axhline(1.0, color="#888888", linewidth=1, linestyle="--")
        ax.set_xticks(range(len(rows)))
        ax.set_xticklabels(_bar_labels(rows), fontsize=7, rotation=45,
                           ha="right")
        ax.set_title(f"{key}\n({label})", fontsize=9)
        ax.set_ylabel("enhanced / baseline", fontsize=8)
    fig.suptitle("Metric ratios, enhanced over baseline", fontsize=11)
    _save(fig, path)
    return True


def _figure_wins(tables: Dict[str, List[dict]], path: Path) -> bool:
    """Stacked better/equal/worse fractions per population."""
    keys = [k for k in ("outer_hausdorff_wins", "inner_whitespace_wins",
                        "multi_shape_change_wins")
            if _data_rows(tables.get(k, []))]
    if not keys:
        return False
    fig, axes = plt.subplots(1, len(keys), figsize=(3.8 * len(keys) + 1, 4.2))
    axes = [axes] if len(keys) == 1 else list(axes)
    colors = {"enhanced_better": "#1d7a46", "equal": "#cccccc",
              "base_better": "#c0392b"}
    for ax, key in zip(axes, keys):
        rows = _data_rows(tables[key])
        xs = range(len(rows))
        bottom = [0.0] * len(rows)
        for part in ("enhanced_better", "equal", "base_better"):
            vals = [r[part] for r in rows]
            ax.bar(xs, vals, bottom=bottom, color=colors[part], label=part)
            bottom = [b + v for b, v in zip(bottom, vals)]
        ax.set_xticks(list(xs))
        ax.set_xticklabels(_bar_labels(rows), fontsize=7, rotation=45,
                           ha="right")
        ax.set_ylim(0, 1)
        ax.set_title(key, fontsize=9)
    axes[-1].legend(fontsize=7, loc="lower right")
    fig.suptitle("Share of pairs improved by the enhancement", fontsize=11)
    _save(fig, path)
    return True


def _figure_aesthetics(tables: Dict[str, List[dict]], path: Path) -> bool:
    """Aesthetics averages, baseline beside enhanced."""
    keys = [k for k in ("outer_aesthetics", "inner_aesthetics",
                        "multi_aesthetics") if _data_rows(tables.get(k, []))]
    if not keys:
        return False
    fig, axes = plt.subplots(1, len(keys), figsize=(3.8 * len(keys) + 1, 4.2))
    axes = [axes] if len(keys) == 1 else list(axes)
    for ax, key in zip(axes, keys):
        rows = _data_rows(tables[key])
        xs = range(len(rows))
        width = 0.38
        ax.bar([x - width / 2 for x in xs],
               [r["aesthetics_base"] for r in rows],
               width, color="#9dafd1", label="baseline")
        ax.bar([x + width / 2 for x in xs],
               [r["aesthetics_enhanced"] for r in rows],
               width, color="#4a74c9", label="enhanced")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(_bar_labels(rows), fontsize=7, rotation=45,
                           ha="right")
        ax.set_ylim(0, 1)
        ax.set_title(key, fontsize=9)
    axes[-1].legend(fontsize=7, loc="lower right")
    fig.suptitle("Aesthetics average, baseline versus enhanced", fontsize=11)
    _save(fig, path)
    return True


def write_report(outdir: Path, run_config: RunConfig,
                 report: EvalReport) -> List[Path]:
    """Write every evaluation artifact into ``outdir``; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tables = aggregate(report)
    written: List[Path] = []

    path = outdir / "pairs.csv"
    write_pairs_csv(path, report.rows)
    written.append(path)

    for name in TABLE_ORDER:
        path = outdir / f"{name}.csv"
        write_table_csv(path, tables.get(name, []))
        written.append(path)

    path = outdir / "summary.json"
    with open(path, "w", encoding="utf-8") as handle:
        json.dump({"meta": report.meta, "tables": tables}, handle,
                  indent=2, sort_keys=True)
        handle.write("\n")
    written.append(path)

    path = outdir / "config.txt"
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_config(run_config))
    written.append(path)

    for name, figure in (("ratios.png", _figure_ratios),
                         ("wins.png", _figure_wins),
                         ("aesthetics.png", _figure_aesthetics)):
        path = outdir / name
        if figure(tables, path):
            written.append(path)
    return written
