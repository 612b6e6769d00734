"""File formats: POVM JSON, fiducial JSON, probability CSV and report CSV / JSON lines.

POVM JSON is ``{"dim": d, "elements": [[[re, im], ...], ...]}`` with each element
flattened row-major into d*d ``[re, im]`` pairs.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .errors import DimensionMismatch, SicLabError

REPORT_COLUMNS = ("bound_name", "d", "a", "purity", "alpha", "eta", "lhs", "rhs", "slack", "satisfied")


class FormatError(SicLabError):
    """Input file does not follow the expected schema."""


def _pairs(z) -> list:
    return [[float(c.real), float(c.imag)] for c in np.asarray(z).reshape(-1)]


def _complex(pairs, what) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what}: expected [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FormatError(f"{what}: expected [re, im] pairs, got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def povm_to_dict(elements) -> dict:
    arr = np.asarray(getattr(elements, "elements", elements))
    return {"dim": int(arr.shape[1]), "elements": [_pairs(e) for e in arr]}


def povm_from_dict(data) -> np.ndarray:
    if not isinstance(data, dict) or "dim" not in data or "elements" not in data:
        raise FormatError("POVM JSON needs 'dim' and 'elements'")
    d = data["dim"]
    if not isinstance(d, int) or d < 1:
        raise FormatError(f"bad dim {d!r}")
    out = []
    for j, e in enumerate(data["elements"]):
        z = _complex(e, f"element {j}")
        if z.size != d * d:
            raise DimensionMismatch(f"element {j} has {z.size} entries, expected {d * d}")
        out.append(z.reshape(d, d))
    if not out:
        raise FormatError("POVM has no elements")
    return np.array(out)


def write_povm(path, elements) -> None:
    with open(path, "w") as fh:
        json.dump(povm_to_dict(elements), fh)
        fh.write("\n")


def read_povm(path) -> np.ndarray:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return povm_from_dict(data)


def read_fiducial(path) -> np.ndarray:
    """``{"dim": d, "vector": [[re, im], ...]}``; the vector is normalized on load."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(data, dict) or "vector" not in data:
        raise FormatError("fiducial JSON needs 'vector'")
    v = _complex(data["vector"], "vector")
    if "dim" in data and data["dim"] != v.size:
        raise DimensionMismatch(f"dim {data['dim']} but vector has {v.size} entries")
    return v / np.linalg.norm(v)


def write_probabilities_csv(fh, probs) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["p"])
    for x in np.asarray(probs).reshape(-1):
        w.writerow([fmt(x)])


def read_probabilities_csv(fh) -> np.ndarray:
    rows = [r for r in csv.reader(fh) if r]
    if rows and rows[0][0].strip().lower() == "p":
        rows = rows[1:]
    try:
        return np.array([float(r[0]) for r in rows])
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def fmt(x) -> str:
    """17 significant digits, which round-trips any double."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def report_row(rep) -> list:
    c = rep.context
    return [rep.bound_name, c.get("d"), c.get("a"), c.get("purity"), c.get("alpha"),
            c.get("eta"), rep.lhs, rep.rhs, rep.slack, rep.satisfied]


def write_reports_csv(fh, reports) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for rep in reports:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in report_row(rep)])


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def write_reports_jsonl(fh, reports) -> None:
    for rep in reports:
        row = {k: _json_value(v) for k, v in zip(REPORT_COLUMNS, report_row(rep))}
        row["context"] = {k: _json_value(v) for k, v in sorted(rep.context.items())}
        fh.write(json.dumps(row, sort_keys=False) + "\n")


def reports_to_string(reports, fmt_name: str = "csv") -> str:
    buf = io.StringIO()
    if fmt_name == "csv":
        write_reports_csv(buf, reports)
    elif fmt_name == "json":
        write_reports_jsonl(buf, reports)
    else:
        raise ValueError(f"unknown format {fmt_name!r}")
    return buf.getvalue()
