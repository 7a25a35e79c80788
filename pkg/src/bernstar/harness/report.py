"""CSV emission with fixed column layouts and deterministic row order."""

import csv
import json
import math
from pathlib import Path

CURVE_COLUMNS = ("function_id", "alpha", "beta", "lambda", "r", "m", "n", "x",
                 "weighted_error", "normalized_ratio")
RATE_COLUMNS = ("function_id", "alpha", "beta", "lambda", "r", "m", "slope", "intercept",
                "max_residual")
CHECK_COLUMNS = ("lemma_id", "param_json", "n", "ratio", "pass")


def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    if hasattr(value, "item"):
        return _cell(value.item())
    return str(value)


def _sort_key(columns):
    def key(row):
        out = []
        for col in columns:
            if col in ("n", "x"):
                continue
            if col in ("function_id", "lemma_id", "param_json"):
                out.append(str(row.get(col, "")))
        return (*out, float(row.get("n", 0) or 0), float(row.get("x", 0) or 0))

    return key


def emit_csv(rows, path, columns):
    """Write ``rows`` (dicts) as UTF-8 CSV with LF endings and a header row.

    Rows are ordered by id, then n, then x, so output does not depend on the
    order in which rows were produced.
    """
    rows = sorted(rows, key=_sort_key(columns))
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(col, "")) for col in columns])


def rate_row(report, kind=None):
    params = report.params
    fid = report.function_id if kind is None else f"{report.function_id}/{kind}"
    return {"function_id": fid, "alpha": params.get("alpha"), "beta": params.get("beta"),
            "lambda": params.get("lambda"), "r": params.get("r"), "m": params.get("m"),
            "slope": report.slope, "intercept": report.intercept,
            "max_residual": report.max_residual}


def check_rows(report):
    param_json = json.dumps(report.params, sort_keys=True)
    return [{"lemma_id": report.check_id, "param_json": param_json, "n": n,
             "ratio": float(ratio), "pass": bool(ok)} for n, ratio, ok in report.rows]
