"""Serialise fairness reports as JSON, CSV or an aligned text table.

JSON and CSV carry full float precision (``repr``) and parse back exactly.
The text table rounds to four decimals, half up.
"""

from __future__ import annotations

import csv
import io
import json
import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Sequence

from .core import Distribution
from .gce import INFINITE_DIVERGENCE, GceResult
from .metrics import GroupMetricTable, MadResult
from .pipeline import FairnessReport

FORMATS = ("json", "csv", "table")
CSV_HEADER = ("run_tag", "metric", "pf_label", "alpha", "group", "value")
OVERALL = "ALL"


def round4(x: float | None) -> str:
    """Four decimals, ties rounded away from zero on the printed digits."""
    if x is None:
        return "-"
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return str(Decimal(repr(float(x))).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP))


def _gce_to_dict(cell: GceResult) -> dict:
    finite = not cell.is_infinite
    return {
        "fair_label": cell.fair_label,
        "alpha": cell.alpha,
        "signed_value": cell.signed_value if finite else None,
        "absolute_value": cell.absolute_value if finite else None,
        "status": cell.status,
    }


def _gce_from_dict(d: dict) -> GceResult:
    if d["status"] == INFINITE_DIVERGENCE:
        return GceResult(float(d["alpha"]), -math.inf, math.inf, d["fair_label"])
    return GceResult(float(d["alpha"]), float(d["signed_value"]), float(d["absolute_value"]), d["fair_label"])


def report_to_dict(report: FairnessReport) -> dict[str, Any]:
    return {
        "run_tag": report.run_tag,
        "attribute_name": report.attribute_name,
        "side": report.side,
        "cutoff": report.cutoff,
        "gain_kind": report.gain_kind,
        "report_absolute": report.report_absolute,
        "categories": list(report.categories),
        "group_sizes": dict(report.group_sizes),
        "performance_distribution": list(report.performance.weights),
        "gce": [_gce_to_dict(c) for c in report.gce],
        "metrics": [
            {
                "metric_name": t.metric_name,
                "cutoff": t.cutoff,
                "per_group": dict(t.per_group),
                "overall": t.overall,
            }
            for t in report.metrics
        ],
        "mad": {
            variant: (None if res is None else res.value) for variant, res in report.mad.items()
        },
        "provenance": report.provenance,
    }


def report_from_dict(d: dict[str, Any]) -> FairnessReport:
    categories = tuple(d["categories"])
    return FairnessReport(
        run_tag=d["run_tag"],
        attribute_name=d["attribute_name"],
        side=d["side"],
        cutoff=d["cutoff"],
        gain_kind=d["gain_kind"],
        categories=categories,
        group_sizes=dict(d["group_sizes"]),
        performance=Distribution(categories, tuple(d["performance_distribution"])),
        gce=tuple(_gce_from_dict(c) for c in d["gce"]),
        metrics=tuple(
            GroupMetricTable(t["metric_name"], t["cutoff"], dict(t["per_group"]), t["overall"])
            for t in d["metrics"]
        ),
        mad={v: (None if val is None else MadResult(v, val)) for v, val in d["mad"].items()},
        report_absolute=d["report_absolute"],
        provenance=d["provenance"],
    )


def parse_report(data: bytes | str) -> FairnessReport:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return report_from_dict(json.loads(data))


def load_report(path) -> FairnessReport:
    with open(path, "rb") as fh:
        return parse_report(fh.read())


def csv_rows(report: FairnessReport) -> list[dict[str, Any]]:
    """One row per reported number.

    GCE rows use metric ``gce_signed`` or ``gce_absolute``, following
    ``report.report_absolute``; infinite cells carry value ``-inf``/``inf``.
    """
    rows = []
    tag = report.run_tag
    gce_metric = "gce_absolute" if report.report_absolute else "gce_signed"
    for cell in report.gce:
        rows.append({"run_tag": tag, "metric": gce_metric, "pf_label": cell.fair_label,
                     "alpha": cell.alpha, "group": "", "value": cell.value(report.report_absolute)})
    for cat, w in zip(report.categories, report.performance.weights):
        rows.append({"run_tag": tag, "metric": "p", "pf_label": "", "alpha": None, "group": cat, "value": w})
    for table in report.metrics:
        for cat, v in table.per_group.items():
            rows.append({"run_tag": tag, "metric": table.metric_name, "pf_label": "", "alpha": None,
                         "group": cat, "value": v})
        rows.append({"run_tag": tag, "metric": table.metric_name, "pf_label": "", "alpha": None,
                     "group": OVERALL, "value": table.overall})
    for variant, res in report.mad.items():
        rows.append({"run_tag": tag, "metric": f"mad_{variant}", "pf_label": "", "alpha": None,
                     "group": "", "value": None if res is None else res.value})
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _uncell(s: str, numeric: bool):
    if s == "":
        return None
    return float(s) if numeric else s


def emit_csv(reports: FairnessReport | Sequence[FairnessReport]) -> bytes:
    if isinstance(reports, FairnessReport):
        reports = [reports]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for report in reports:
        for row in csv_rows(report):
            writer.writerow([_cell(row[c]) for c in CSV_HEADER])
    return buf.getvalue().encode("utf-8")


def parse_csv(data: bytes | str) -> list[dict[str, Any]]:
    """Inverse of ``emit_csv``; empty strings in pf_label/group stay ``""``."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.DictReader(io.StringIO(data))
    rows = []
    for raw in reader:
        rows.append({
            "run_tag": raw["run_tag"],
            "metric": raw["metric"],
            "pf_label": raw["pf_label"],
            "alpha": _uncell(raw["alpha"], True),
            "group": raw["group"],
            "value": _uncell(raw["value"], True),
        })
    return rows


def _gce_columns(reports):
    columns = []
    for report in reports:
        for cell in report.gce:
            key = (cell.fair_label, cell.alpha)
            if key not in columns:
                columns.append(key)
    return columns


def render_table(reports: FairnessReport | Sequence[FairnessReport]) -> str:
    """Runs as rows; GCE per fair distribution, accuracy and MAD as columns."""
    if isinstance(reports, FairnessReport):
        reports = [reports]
    gce_cols = _gce_columns(reports)
    alphas = {a for _, a in gce_cols}
    metric_names = []
    for report in reports:
        for table in report.metrics:
            if table.metric_name not in metric_names:
                metric_names.append(table.metric_name)
    show_mad = any(res is not None for r in reports for res in r.mad.values())

    header = ["run"]
    header += [label if len(alphas) == 1 else f"{label} a={a:g}" for label, a in gce_cols]
    header += metric_names
    if show_mad:
        header += ["MAD-rating", "MAD-ranking"]

    body = []
    for report in reports:
        cells = {(c.fair_label, c.alpha): c for c in report.gce}
        row = [report.run_tag]
        for key in gce_cols:
            cell = cells.get(key)
            row.append("-" if cell is None else round4(cell.value(report.report_absolute)))
        for name in metric_names:
            try:
                row.append(round4(report.metric(name).overall))
            except KeyError:
                row.append("-")
        if show_mad:
            for variant in ("rating", "ranking"):
                res = report.mad.get(variant)
                row.append(round4(None if res is None else res.value))
        body.append(row)

    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    first = reports[0] if reports else None
    lines = []
    if first is not None:
        sign = "|GCE|" if first.report_absolute else "GCE"
        alpha_note = f", alpha={next(iter(alphas)):g}" if len(alphas) == 1 else ""
        lines.append(f"{sign}(pf, p{alpha_note}) on {first.side} attribute "
                     f"'{first.attribute_name}', gain={first.gain_kind}, K={first.cutoff}")
    fmt = lambda r: "  ".join(v.ljust(w) if i == 0 else v.rjust(w) for i, (v, w) in enumerate(zip(r, widths)))
    lines.append(fmt(header))
    lines.append("  ".join("-" * w for w in widths))
    lines.extend(fmt(r) for r in body)
    return "\n".join(lines) + "\n"


def emit_report(report: FairnessReport | Sequence[FairnessReport], fmt: str = "json") -> bytes:
    """Serialise one report (json) or one or more reports (csv, table)."""
    if fmt == "json":
        if not isinstance(report, FairnessReport):
            if len(report) != 1:
                raise ValueError("json output holds exactly one report")
            report = report[0]
        return (json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n").encode("utf-8")
    if fmt == "csv":
        return emit_csv(report)
    if fmt == "table":
        return render_table(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
