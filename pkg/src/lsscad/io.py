"""CSV ingestion and report serialization.

Structured reports are JSON. Floats are written with Python's shortest
round-trip representation, so reading a report back gives bit-identical
numbers. Deselected coefficients are written as the integer token ``0``.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np

from .design import Dataset
from .errors import ParseError, SelectorError, ValidationError

FORMATS = ("json", "csv")


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_table(path):
    """Parse a comma-separated file into ``(header or None, rows)``.

    The first line is a header when any of its cells is not a number.
    Blank lines are skipped. Row numbers in error messages are 1-based file
    lines, column numbers are zero-based.
    """
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"data file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from None
    lines = [(i + 1, row) for i, row in enumerate(csv.reader(text.splitlines()))]
    lines = [(i, [c.strip() for c in row]) for i, row in lines if any(c.strip() for c in row)]
    if not lines:
        raise ParseError(f"{path}: no rows")
    header = None
    first_line, first = lines[0]
    if not all(_is_number(c) for c in first):
        header = first
        lines = lines[1:]
    width = len(first)
    rows = []
    for lineno, row in lines:
        if len(row) != width:
            raise ParseError(f"{path}: row {lineno} has {len(row)} columns, expected {width} "
                             f"(columns 0-{width - 1}, as in row {first_line})")
        values = []
        for j, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"{path}: row {lineno}, column {j}: {cell!r} is not a number") from None
            if not math.isfinite(v):
                raise ParseError(f"{path}: row {lineno}, column {j}: {cell!r} is not finite")
            values.append(v)
        rows.append(values)
    if not rows:
        raise ParseError(f"{path}: header only, no data rows")
    return header, np.array(rows, dtype=float)


def resolve_selector(selector, header, width):
    """Column index for a response selector given by name or zero-based index."""
    if selector is None:
        return width - 1
    sel = str(selector)
    if header is not None and sel in header:
        if header.count(sel) > 1:
            raise SelectorError(f"response column name {sel!r} is not unique")
        return header.index(sel)
    try:
        idx = int(sel)
    except ValueError:
        known = f"; columns are {', '.join(header)}" if header else "; the file has no header"
        raise SelectorError(f"--response {sel!r} matches no column{known}") from None
    if not 0 <= idx < width:
        raise SelectorError(f"--response index {idx} out of range for {width} columns")
    return idx


def load_dataset(path, response_selector=None):
    """Read a CSV file into a Dataset.

    Parameters
    ----------
    path : path-like
    response_selector : str or int, optional
        Column name or zero-based index of the response; defaults to the
        last column. The remaining columns form the design, in file order.
    """
    header, table = read_table(path)
    width = table.shape[1]
    if width < 2:
        raise ValidationError(f"{path}: need a response and at least one covariate column")
    r = resolve_selector(response_selector, header, width)
    cols = [j for j in range(width) if j != r]
    names = [header[j] for j in cols] if header else [f"x{j + 1}" for j in range(len(cols))]
    return Dataset(table[:, cols], table[:, r], names=names)


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _coef_token(c):
    return 0 if c == 0 else float(c)


def fit_record(fit, cov=None, names=None, gcv=None, effective_params=None):
    """Plain-dict view of a fit with its standard errors."""
    p = len(fit.coefficients)
    names = list(names) if names is not None else [f"x{j + 1}" for j in range(p)]
    support = [int(j) for j in fit.support.nonzero_indices]
    se = [] if cov is None else [float(v) for v in cov.se]
    return {
        "estimator": fit.estimator,
        "names": names,
        "coefficients": [_coef_token(c) for c in fit.coefficients],
        "intercept": float(fit.intercept),
        "support": support,
        "se": se,
        "lambda": float(fit.lam),
        "a": _num(fit.a),
        "xi": float(fit.xi),
        "gcv": None if gcv is None else float(gcv),
        "effective_params": None if effective_params is None else float(effective_params),
        "iterations": int(fit.iterations),
        "converged": bool(fit.converged),
        "rss": float(fit.rss),
    }


def dumps(obj):
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _write_text(path, text):
    if path is None or str(path) == "-":
        return text
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc.strerror}") from None
    return text


def coefficient_csv(record):
    """One row per coefficient: index, name, estimate, se (blank if deselected)."""
    se = dict(zip(record["support"], record["se"]))
    lines = ["index,name,estimate,se"]
    for j, (name, c) in enumerate(zip(record["names"], record["coefficients"])):
        s = se.get(j)
        lines.append(f"{j},{name},{c!r},{'' if s is None else repr(s)}")
    return "\n".join(lines) + "\n"


def write_fit_report(fit, cov, path, format="json", names=None, gcv=None, extra=None):
    """Write a fit report; returns the text written.

    ``path`` of ``None`` or ``"-"`` skips the file and only returns the text.
    ``extra`` is merged into the JSON document (settings, tuning path, ...).
    """
    if format not in FORMATS:
        raise ValidationError(f"--format must be one of {FORMATS}, got {format!r}")
    record = fit_record(fit, cov, names, gcv)
    if format == "csv":
        return _write_text(path, coefficient_csv(record))
    doc = dict(extra or {})
    doc["fit"] = record
    return _write_text(path, dumps(doc))


def read_fit_report(path, format="json"):
    """Read back a report written by :func:`write_fit_report`.

    JSON gives the whole document; CSV gives ``{"names", "coefficients",
    "support", "se"}`` reconstructed from the coefficient rows.
    """
    text = Path(path).read_text(encoding="utf-8")
    if format == "json":
        return json.loads(text)
    if format != "csv":
        raise ValidationError(f"format must be one of {FORMATS}, got {format!r}")
    rows = list(csv.DictReader(text.splitlines()))
    out = {"names": [], "coefficients": [], "support": [], "se": []}
    for r in rows:
        out["names"].append(r["name"])
        out["coefficients"].append(float(r["estimate"]))
        if r["se"]:
            out["support"].append(int(r["index"]))
            out["se"].append(float(r["se"]))
    return out
