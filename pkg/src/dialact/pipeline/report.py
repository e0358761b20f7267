"""Deterministic report serialization: text document + machine-readable JSON.

Both forms carry, per condition: name, runs, accuracies, mean, std, epochs,
learning rate, plus the labeled confusion grid of the last run. Timing never
appears here; a fixed seed must reproduce the files byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..corpus import Corpus
from .evaluate import ConfusionMatrix, EvalResult
from .experiments import ExperimentReport, RunResult


def _run_record(name: str, result: RunResult, meta: dict) -> dict:
    record = {
        "name": name,
        "runs": len(result.accuracies),
        "accuracies": result.accuracies,
        "mean": result.mean,
        "std": result.std,
        "epochs": meta.get("epochs"),
        "learning_rate": meta.get("learning_rate"),
    }
    if result.degenerate_std:
        record["std_degenerate"] = True
    if result.pooled_accuracy is not None:
        record["pooled_accuracy"] = result.pooled_accuracy
    if result.confusion is not None:
        record["confusion"] = result.confusion.to_dict()
    return record


def report_to_dict(report: ExperimentReport) -> dict:
    return {
        "config": report.config,
        "labels": report.labels,
        "conditions": [
            _run_record(name, result, report.condition_meta.get(name, {}))
            for name, result in report.conditions.items()
        ],
    }


def report_to_json(report: ExperimentReport) -> str:
    return json.dumps(report_to_dict(report), sort_keys=True, indent=2) + "\n"


def confusion_grid(confusion: ConfusionMatrix) -> str:
    """Labeled gold-by-predicted grid; an extra column appears when any
    prediction had no target label."""
    labels = confusion.labels
    show_unmapped = bool(confusion.unmapped.any())
    width = max([len(t) for t in labels] + [9])
    header = " " * (width + 2) + " ".join(f"{t:>{width}}" for t in labels)
    if show_unmapped:
        header += " " + f"{'(no map)':>{width}}"
    lines = [header]
    for i, tag in enumerate(labels):
        cells = " ".join(f"{int(c):>{width}}" for c in confusion.matrix[i])
        if show_unmapped:
            cells += " " + f"{int(confusion.unmapped[i]):>{width}}"
        lines.append(f"{tag:>{width}}: " + cells)
    return "\n".join(lines)


def _format_float(value: float | None) -> str:
    return "-" if value is None else f"{value:.6f}"


def report_to_text(report: ExperimentReport) -> str:
    lines = ["experiment report", "=" * 17, ""]
    lines.append("config:")
    for key in sorted(report.config):
        lines.append(f"  {key} = {report.config[key]}")
    lines.append("")
    for name, result in report.conditions.items():
        meta = report.condition_meta.get(name, {})
        lines.append(f"condition: {name}")
        lines.append(f"  runs          = {len(result.accuracies)}")
        lines.append(f"  epochs        = {meta.get('epochs') if meta.get('epochs') is not None else '-'}")
        lines.append(
            "  learning_rate = "
            + ("-" if meta.get("learning_rate") is None else repr(meta.get("learning_rate")))
        )
        lines.append("  accuracies    = " + " ".join(f"{a:.6f}" for a in result.accuracies))
        lines.append(f"  mean          = {_format_float(result.mean)}")
        std_suffix = " (single run)" if result.degenerate_std else ""
        lines.append(f"  std           = {_format_float(result.std)}{std_suffix}")
        if result.pooled_accuracy is not None:
            lines.append(f"  pooled        = {_format_float(result.pooled_accuracy)}")
        if result.confusion is not None:
            lines.append("  confusion (last run):")
            for row in confusion_grid(result.confusion).splitlines():
                lines.append("    " + row)
        lines.append("")
    return "\n".join(lines)


def write_report(report: ExperimentReport, base_path: str | Path) -> tuple[Path, Path]:
    """Write <base>.txt and <base>.json; returns both paths."""
    base = Path(base_path)
    text_path = base.with_name(base.name + ".txt")
    json_path = base.with_name(base.name + ".json")
    text_path.write_text(report_to_text(report), encoding="utf-8")
    json_path.write_text(report_to_json(report), encoding="utf-8")
    return text_path, json_path


def eval_report(result: EvalResult, labels: list[str]) -> ExperimentReport:
    """Single-evaluation wrapper so `eval` can reuse the report writers."""
    report = ExperimentReport(config={"kind": "eval"}, labels=labels)
    report.conditions["eval"] = RunResult.from_accuracies([result.accuracy], result.confusion)
    report.condition_meta["eval"] = {}
    return report


def distribution_rows(corpus: Corpus) -> list[dict]:
    """Label distribution like the corpus tables: count and percent, sorted
    by frequency then label-set order."""
    counts = {tag: 0 for tag in corpus.label_set.tags}
    for turn in corpus.turns():
        counts[turn.label] += 1
    total = max(len(corpus), 1)
    order = sorted(
        corpus.label_set.tags, key=lambda t: (-counts[t], corpus.label_set.index(t))
    )
    return [
        {"label": tag, "count": counts[tag], "percent": 100.0 * counts[tag] / total}
        for tag in order
    ]


def distribution_table(corpus: Corpus) -> str:
    rows = distribution_rows(corpus)
    width = max([len(r["label"]) for r in rows] + [5])
    lines = [f"{'Label':<{width}}  {'Count':>6}  {'Occurrence':>10}"]
    for row in rows:
        lines.append(f"{row['label']:<{width}}  {row['count']:>6}  {row['percent']:>9.1f}%")
    lines.append(f"{'total':<{width}}  {len(corpus.turns()):>6}")
    return "\n".join(lines)
