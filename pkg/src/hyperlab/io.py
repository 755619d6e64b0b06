"""JSON encodings of matrices, vectors and scalars; atomic file writes.

Matrix format: ``{"field": "R"|"C", "n": n, "entries": [[...], ...]}``.
Real entries are numbers or exact tokens (``"1/3"``, ``"sqrt(2)"``); complex
entries are ``[re, im]`` pairs of those.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ConfigError, DimensionMismatch
from .surd import Surd, parse_scalar


def scalar_to_json(x):
    if isinstance(x, Surd):
        if x.is_rational():
            return str(x.rational_part())
        terms = [f"{v}*sqrt({d})" if d != 1 else str(v) for d, v in x.coeffs.items()]
        return "".join(t if i == 0 or t.startswith("-") else "+" + t for i, t in enumerate(terms))
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


_TERM = re.compile(r"[+-]?[^+-]+")
_FLOAT = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _parse_real(tok):
    """Parse one real entry; returns ``(value, certified)``.

    Sums of exact terms such as ``"1 - sqrt(2)"`` are accepted.
    """
    if isinstance(tok, bool):
        raise ConfigError(f"bad matrix entry {tok!r}")
    if isinstance(tok, int):
        return Fraction(tok), True
    if isinstance(tok, float):
        return tok, False
    text = str(tok).replace(" ", "")
    if _FLOAT.match(text):
        v, cert = parse_scalar(text)
        return (_simplify(v) if cert else v), cert
    terms = _TERM.findall(text)
    if len(terms) > 1:
        parsed = [parse_scalar(t) for t in terms]
        if all(c for _, c in parsed):
            return _simplify(sum((v for v, _ in parsed), Surd(0))), True
        raise ConfigError(f"cannot parse entry {tok!r}")
    v, cert = parse_scalar(tok)
    return (_simplify(v) if cert else v), cert


def _simplify(x):
    if isinstance(x, Surd) and x.is_rational():
        return x.rational_part()
    return x


def matrix_from_json(obj) -> tuple[np.ndarray, str]:
    """Decode a matrix; exact tokens give an object array, otherwise float/complex."""
    try:
        field = obj.get("field", "R")
        rows = obj["entries"]
    except (AttributeError, KeyError):
        raise ConfigError("matrix needs 'entries'") from None
    n = obj.get("n", len(rows))
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionMismatch(f"matrix entries are not {n}x{n}")
    if field == "C":
        vals = []
        for r in rows:
            row = []
            for e in r:
                if isinstance(e, list):
                    re_, _ = _parse_real(e[0])
                    im_, _ = _parse_real(e[1])
                    row.append(complex(float(re_), float(im_)))
                else:
                    row.append(complex(float(_parse_real(e)[0])))
            vals.append(row)
        return np.array(vals, dtype=complex), "C"
    parsed = [[_parse_real(e) for e in r] for r in rows]
    if all(c for r in parsed for _, c in r):
        return np.array([[v for v, _ in r] for r in parsed], dtype=object), "R"
    return np.array([[float(v) for v, _ in r] for r in parsed], dtype=float), "R"


def matrix_to_json(A, field: str | None = None) -> dict:
    A = np.asarray(A)
    if field is None:
        field = "C" if np.iscomplexobj(A) else "R"
    return {"field": field, "n": int(A.shape[0]), "entries": [[scalar_to_json(x) for x in row] for row in A]}


def vector_from_json(obj, field: str = "R") -> np.ndarray:
    if field == "C":
        return np.array([complex(e[0], e[1]) if isinstance(e, list) else complex(e) for e in obj])
    parsed = [_parse_real(e) for e in obj]
    if all(c for _, c in parsed):
        return np.array([v for v, _ in parsed], dtype=object)
    return np.array([float(v) for v, _ in parsed])


def write_atomic(path: str | Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str | Path, obj) -> None:
    write_atomic(path, json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n")


def _default(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (Fraction, Surd)):
        return scalar_to_json(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"not JSON serializable: {type(x).__name__}")
