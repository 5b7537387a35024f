"""CSV and JSON serialization of study reports."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from ..errors import IoFailure
from .study import StudyReport


def _num(x) -> str:
    return "" if x is None else format(x, ".17g")


def report_to_csv(report: StudyReport) -> str:
    names = report.norm_names()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "param"] + names + [f"eoc_{n}" for n in names])
    for k, lv in enumerate(report.levels):
        eocs = [_num(report.orders(n)[k - 1]) if k >= 1 else "" for n in names]
        w.writerow([lv.level, _num(lv.param)] + [_num(lv.errors[n]) for n in names] + eocs)
    return buf.getvalue()


def report_to_json(report: StudyReport) -> str:
    # json writes floats with repr(), the shortest string that round-trips exactly
    return json.dumps(report.to_dict(), indent=2, allow_nan=False) + "\n"


def parse_report_json(text) -> StudyReport:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return StudyReport.from_dict(json.loads(text))


def emit_report(report: StudyReport, fmt: str = "json", path=None) -> bytes:
    """Serialize the report; write it to ``path`` when given. Returns the bytes."""
    if fmt == "csv":
        data = report_to_csv(report).encode()
    elif fmt == "json":
        data = report_to_json(report).encode()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        try:
            Path(path).write_bytes(data)
        except OSError as exc:
            raise IoFailure(f"cannot write report to {path}: {exc}") from exc
    return data
