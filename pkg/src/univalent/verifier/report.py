"""Byte-stable JSON and CSV renderings of a verification report."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .scan import VerificationReport

__all__ = ["CSV_COLUMNS", "report_to_json", "report_to_csv", "emit_report", "load_report"]

CSV_COLUMNS = ("functional_id", "family", "params", "abs_value", "bound", "margin", "witness", "tail_radius")


def _clean(x):
    # JSON has no NaN/inf; keep them readable and deterministic
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def report_to_json(report: VerificationReport) -> str:
    doc = {"config": report.config, "summary": report.summary, "records": report.records}
    return json.dumps(_clean(doc), sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def report_to_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.records:
        w.writerow([
            r["functional_id"], r["family"], r["params"], r["abs_value"], r["bound"], r["margin"],
            "true" if r["witness"] else "false", repr(float(r["tail_radius"])),
        ])
    return buf.getvalue()


def emit_report(report: VerificationReport, out_dir, fmt: str = "both", stem: str = "report") -> list:
    """Write ``<stem>.json`` and/or ``<stem>.csv`` into ``out_dir``; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    if fmt in ("json", "both"):
        p = out / f"{stem}.json"
        p.write_text(report_to_json(report))
        paths.append(p)
    if fmt in ("csv", "both"):
        p = out / f"{stem}.csv"
        p.write_text(report_to_csv(report))
        paths.append(p)
    return paths


def load_report(path) -> VerificationReport:
    doc = json.loads(Path(path).read_text())
    return VerificationReport(doc["records"], doc["summary"], doc.get("config", {}))
