"""JSON series files.

Schema::

    {"n": 2, "n_prime": 1, "q_prime": 0, "field": "real",
     "terms": [{"alpha": [2, 0], "alpha_prime": [0], "re": 5, "im": 0}, ...]}

``im`` is optional and must be zero (or absent) in a real file.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .series import CoefficientMap

__all__ = ["SeriesFileError", "parse_series", "parse_series_file", "serialize_series", "write_series_file"]


class SeriesFileError(ValueError):
    """Malformed or inconsistent series file."""


def _int_list(value, where: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise SeriesFileError(f"{where}: expected an array of integers, got {value!r}")
    if any(v < 0 for v in value):
        raise SeriesFileError(f"{where}: negative entry in {value!r}")
    return tuple(value)


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SeriesFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_series(doc) -> CoefficientMap:
    """Validate a decoded JSON document and build its coefficient map."""
    if not isinstance(doc, dict):
        raise SeriesFileError("top level must be a JSON object")
    for key in ("n", "n_prime", "q_prime", "field", "terms"):
        if key not in doc:
            raise SeriesFileError(f"missing field {key!r}")
    n, n_prime, q_prime = doc["n"], doc["n_prime"], doc["q_prime"]
    for key, v, lo in (("n", n, 1), ("n_prime", n_prime, 1), ("q_prime", q_prime, 0)):
        if isinstance(v, bool) or not isinstance(v, int) or v < lo:
            raise SeriesFileError(f"{key!r} must be an integer >= {lo}, got {v!r}")
    field = doc["field"]
    if field not in ("real", "complex"):
        raise SeriesFileError(f"'field' must be 'real' or 'complex', got {field!r}")
    if not isinstance(doc["terms"], list):
        raise SeriesFileError("'terms' must be an array")

    terms = {}
    for i, rec in enumerate(doc["terms"]):
        where = f"terms[{i}]"
        if not isinstance(rec, dict):
            raise SeriesFileError(f"{where}: expected an object")
        for key in ("alpha", "alpha_prime", "re"):
            if key not in rec:
                raise SeriesFileError(f"{where}: missing {key!r}")
        alpha = _int_list(rec["alpha"], f"{where}.alpha")
        alpha_p = _int_list(rec["alpha_prime"], f"{where}.alpha_prime")
        if len(alpha) != n:
            raise SeriesFileError(f"{where}.alpha has length {len(alpha)}, expected n={n}")
        if len(alpha_p) != n_prime:
            raise SeriesFileError(f"{where}.alpha_prime has length {len(alpha_p)}, expected n_prime={n_prime}")
        if sum(alpha_p) != q_prime:
            raise SeriesFileError(f"{where}.alpha_prime has degree {sum(alpha_p)}, expected q_prime={q_prime}")
        re = _number(rec["re"], f"{where}.re")
        im = _number(rec.get("im", 0), f"{where}.im")
        if field == "real" and im != 0:
            raise SeriesFileError(f"{where}: nonzero imaginary part in a real series")
        if (alpha, alpha_p) in terms:
            raise SeriesFileError(f"{where}: duplicate term alpha={list(alpha)}, alpha_prime={list(alpha_p)}")
        terms[(alpha, alpha_p)] = complex(re, im) if field == "complex" else re
    return CoefficientMap(n, n_prime, q_prime, terms, field)


def parse_series_file(path) -> CoefficientMap:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SeriesFileError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return parse_series(doc)
    except SeriesFileError as exc:
        raise SeriesFileError(f"{path}: {exc}") from None


def serialize_series(c: CoefficientMap) -> dict:
    terms = []
    for (alpha, alpha_p), value in sorted(c.terms.items()):
        rec = {"alpha": list(alpha), "alpha_prime": list(alpha_p), "re": float(np.real(value))}
        if c.field == "complex":
            rec["im"] = float(np.imag(value))
        terms.append(rec)
    return {"n": c.n, "n_prime": c.n_prime, "q_prime": c.q_prime, "field": c.field, "terms": terms}


def write_series_file(c: CoefficientMap, path) -> None:
    Path(path).write_text(json.dumps(serialize_series(c), indent=1) + "\n", encoding="utf-8")
