"""JSON wire formats for forms, linear maps and operator matrices."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .exterior import Form, LinearMap
from .report import fraction_str

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class FormatError(ValueError):
    """Malformed JSON input; ``position`` locates the offending item when known."""

    def __init__(self, message: str, position: Any = None):
        super().__init__(message if position is None else f"{message} (at {position})")
        self.reason = message
        self.position = position

    def to_json(self) -> dict:
        return {"error": self.reason, "position": self.position}


def parse_scalar(value: Any, position: Any = None) -> Fraction:
    if isinstance(value, bool):
        raise FormatError(f"boolean is not a rational: {value!r}", position)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value.strip()):
        num, _, den = value.strip().partition("/")
        if den and int(den) == 0:
            raise FormatError(f"zero denominator in {value!r}", position)
        return Fraction(int(num), int(den) if den else 1)
    raise FormatError(f"expected an integer or a 'p/q' string, got {value!r}", position)


def form_to_json(a: Form) -> dict:
    return {
        "n": a.n,
        "degree": a.degree,
        "terms": [{"idx": list(idx), "coeff": fraction_str(c)} for idx, c in a.terms.items()],
    }


def _int_field(data: dict, key: str, position: Any) -> int:
    v = data.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"field {key!r} must be an integer", position)
    return v


def form_from_json(data: Any) -> Form:
    if not isinstance(data, dict):
        raise FormatError("form must be a JSON object")
    n = _int_field(data, "n", "n")
    degree = _int_field(data, "degree", "degree")
    if n < 1:
        raise FormatError("n must be positive", "n")
    if not 0 <= degree <= 2 * n:
        raise FormatError(f"degree must lie in 0..{2 * n}", "degree")
    terms = data.get("terms")
    if not isinstance(terms, list):
        raise FormatError("field 'terms' must be a list", "terms")
    out: dict = {}
    for pos, term in enumerate(terms):
        where = f"terms[{pos}]"
        if not isinstance(term, dict) or set(term) != {"idx", "coeff"}:
            raise FormatError("term must be an object with exactly 'idx' and 'coeff'", where)
        idx = term["idx"]
        if not isinstance(idx, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in idx):
            raise FormatError("idx must be a list of integers", where)
        if len(idx) != degree:
            raise FormatError(f"idx has length {len(idx)}, expected {degree}", where)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise FormatError("idx is not strictly increasing", where)
        if idx and (idx[0] < 1 or idx[-1] > 2 * n):
            raise FormatError(f"idx entries must lie in 1..{2 * n}", where)
        key = tuple(idx)
        if key in out:
            raise FormatError("repeated monomial", where)
        c = parse_scalar(term["coeff"], where)
        if c == 0:
            raise FormatError("zero coefficients are not stored", where)
        out[key] = c
    return Form(n, degree, out)


def linear_map_to_json(T: LinearMap) -> dict:
    return {"n": T.n, "matrix": [[fraction_str(c) for c in row] for row in T.matrix]}


def linear_map_from_json(data: Any) -> LinearMap:
    if not isinstance(data, dict):
        raise FormatError("linear map must be a JSON object")
    n = _int_field(data, "n", "n")
    if n < 1:
        raise FormatError("n must be positive", "n")
    rows = data.get("matrix")
    size = 2 * n
    if not isinstance(rows, list) or len(rows) != size:
        raise FormatError(f"matrix must have {size} rows", "matrix")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != size:
            raise FormatError(f"row must have {size} entries", f"matrix[{i}]")
        out.append([parse_scalar(c, f"matrix[{i}][{j}]") for j, c in enumerate(row)])
    return LinearMap(n, out)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def load_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from exc
