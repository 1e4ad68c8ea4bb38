"""Run reports: a stable JSON document plus a human-readable table."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InvariantViolation

VERDICT_PROVED = "proved"
VERDICT_CEX = "cex_found"
VERDICT_UNKNOWN = "unknown"


def sample_row(
    index: int,
    concrete_label: int,
    verdict: str,
    output_range: tuple[float, float] | None = None,
    decision_value: float | None = None,
    counterexample: list[float] | None = None,
) -> dict:
    row: dict = {"index": index, "label": concrete_label, "verdict": verdict}
    if output_range is not None:
        row["range"] = [output_range[0], output_range[1]]
    if decision_value is not None:
        row["decision_value"] = decision_value
    if counterexample is not None:
        row["counterexample"] = counterexample
    return row


def validate_report(report: dict) -> None:
    samples = report.get("samples", [])
    agg = report.get("aggregates", {})
    counts = agg.get("counts")
    if counts is not None and samples:
        if sum(counts.values()) != len(samples):
            raise InvariantViolation("verdict counts do not sum to the sample count")
    lb, ub = agg.get("lb"), agg.get("ub")
    if lb is not None and ub is not None and lb > ub + 1e-12:
        raise InvariantViolation(f"lb {lb} exceeds ub {ub}")


def write_report(report: dict, path: str | Path) -> None:
    validate_report(report)
    Path(path).write_text(json.dumps(report, indent=2) + "\n")


def format_table(report: dict) -> str:
    lines = []
    agg = report.get("aggregates", {})
    lines.append(f"command: {report.get('command')}")
    if "similarity" in report:
        lines.append(f"similarity: {report['similarity']}")
    if "domain" in report:
        lines.append(f"abstraction: {report['domain']}, one-hot: {report.get('oh')}")
    counts = agg.get("counts")
    if counts:
        lines.append(
            "verdicts: "
            + "  ".join(f"{k}={v}" for k, v in counts.items())
        )
    for key in ("lb", "ub", "accuracy", "balanced_accuracy"):
        if key in agg and agg[key] is not None:
            lines.append(f"{key}: {agg[key]:.6f}")
    imp = report.get("importance")
    if imp:
        lines.append("feature importance:")
        names = imp.get("feature_names", [])
        for i, name in enumerate(names):
            grade = imp["grades"][i] if imp.get("grades") else ""
            lines.append(f"  {name:24s} {imp['indices'][i]:<12.6g} grade={grade}")
        for cat, vals in (imp.get("tier_indices") or {}).items():
            lines.append(f"  tier {cat}: " + ", ".join(f"{v:.6g}" for v in vals))
        if imp.get("pfi") is not None:
            lines.append("  pfi: " + ", ".join(f"{k}={v:.4g}" for k, v in imp["pfi"].items()))
        for key in ("afi_vs_pfi", "afi_vs_stability"):
            if imp.get(key):
                c = imp[key]
                lines.append(
                    f"  {key}: spearman={c['spearman']:.4f} kendall={c['kendall']:.4f}"
                )
    if "timing" in report:
        lines.append(f"elapsed: {report['timing'].get('seconds', 0.0):.3f}s")
    return "\n".join(lines)
