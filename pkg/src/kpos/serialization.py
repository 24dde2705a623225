"""JSON encodings of matrices, maps, Choi operators and results.

Matrix: ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` (row-major).
Map: ``{"d1": n, "d2": m, "positive": [{"lambda": x, "F": <matrix>}], "negative": [...]}``.
Choi operator: ``{"dims": [d1, ..., dn], "matrix": <matrix>}``.

:func:`dumps` writes canonical JSON (sorted keys, reals with 17
significant digits) so identical inputs produce identical bytes.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from ._config import ValidationError
from .certificates import Certificate
from .maps import ChoiOperator, MapDecomposition, Term
from .multipartite import SepNormResult
from .oracle import OracleResult

__all__ = [
    "SchemaError",
    "matrix_to_json",
    "matrix_from_json",
    "map_to_json",
    "map_from_json",
    "choi_to_json",
    "choi_from_json",
    "certificate_to_json",
    "oracle_result_to_json",
    "sep_norm_result_to_json",
    "dumps",
    "load_json",
]


class SchemaError(ValidationError):
    """Malformed JSON document; the message names the offending field."""


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a[:, None]
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in a.reshape(-1)]}


def _require(obj, key, where):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise SchemaError(f"{where}: missing field '{key}'")
    return obj[key]


def _positive_int(value, where) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SchemaError(f"{where}: expected a positive integer, got {value!r}")
    return value


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    rows = _positive_int(_require(obj, "rows", where), f"{where}.rows")
    cols = _positive_int(_require(obj, "cols", where), f"{where}.cols")
    data = _require(obj, "data", where)
    if not isinstance(data, list) or len(data) != rows * cols:
        n = len(data) if isinstance(data, list) else "non-list"
        raise SchemaError(f"{where}.data: expected {rows * cols} entries, got {n}")
    out = np.empty(rows * cols, dtype=complex)
    for idx, z in enumerate(data):
        if (not isinstance(z, list) or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)):
            raise SchemaError(f"{where}.data[{idx}]: expected [re, im], got {z!r}")
        out[idx] = complex(z[0], z[1])
    return out.reshape(rows, cols)


def map_to_json(m: MapDecomposition) -> dict:
    enc = lambda terms: [{"lambda": t.lam, "F": matrix_to_json(t.F)} for t in terms]
    return {"d1": m.d1, "d2": m.d2, "positive": enc(m.positive), "negative": enc(m.negative)}


def _terms_from_json(obj, key):
    items = obj.get(key, [])
    if not isinstance(items, list):
        raise SchemaError(f"map.{key}: expected a list")
    out = []
    for idx, item in enumerate(items):
        where = f"map.{key}[{idx}]"
        lam = _require(item, "lambda", where)
        if isinstance(lam, bool) or not isinstance(lam, (int, float)):
            raise SchemaError(f"{where}.lambda: expected a number, got {lam!r}")
        out.append(Term(float(lam), matrix_from_json(_require(item, "F", where), f"{where}.F")))
    return out


def map_terms_from_json(obj) -> tuple[int, int, list, list]:
    """Parse a map document without enforcing the decomposition invariants."""
    d1 = _positive_int(_require(obj, "d1", "map"), "map.d1")
    d2 = _positive_int(_require(obj, "d2", "map"), "map.d2")
    return d1, d2, _terms_from_json(obj, "positive"), _terms_from_json(obj, "negative")


def map_from_json(obj) -> MapDecomposition:
    d1, d2, pos, neg = map_terms_from_json(obj)
    return MapDecomposition(d1, d2, tuple(pos), tuple(neg))


def choi_to_json(c: ChoiOperator) -> dict:
    return {"dims": list(c.dims), "matrix": matrix_to_json(c.matrix)}


def choi_from_json(obj) -> ChoiOperator:
    dims = _require(obj, "dims", "choi")
    if not isinstance(dims, list) or not dims:
        raise SchemaError("choi.dims: expected a non-empty list of positive integers")
    dims = [_positive_int(d, f"choi.dims[{i}]") for i, d in enumerate(dims)]
    return ChoiOperator(tuple(dims), matrix_from_json(_require(obj, "matrix", "choi"), "choi.matrix"))


def certificate_to_json(c: Certificate) -> dict:
    out: dict[str, Any] = {"verdict": c.verdict.value, "k": c.k, "kind": c.kind,
                           "mu": c.mu, "nu": c.nu, "reason": c.reason, "witness": None}
    if c.bounds is not None:
        out["bounds"] = list(c.bounds)
    if c.witness is not None:
        out["witness"] = {"xi0": matrix_to_json(c.witness.xi0),
                          "p0": matrix_to_json(c.witness.p0),
                          "value": c.witness.value}
    return out


def oracle_result_to_json(r: OracleResult) -> dict:
    out = {"min_value": r.min_value, "k": r.k, "restarts": r.restarts, "seed": r.seed,
           "converged": r.converged, "argmin_vector": matrix_to_json(r.argmin_vector)}
    if r.argmin_frame is not None:
        out["argmin_frame"] = matrix_to_json(r.argmin_frame)
    return out


def sep_norm_result_to_json(r: SepNormResult) -> dict:
    return {"value": r.value, "restarts": r.restarts, "seed": r.seed, "converged": r.converged,
            "argmax": [matrix_to_json(p) for p in r.argmax.factors]}


def _encode(obj) -> str:
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(str(x))
        text = format(x, ".17g")
        # keep reals recognizable as reals: 2.0, not 2
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, 17 significant digits, non-finite as strings."""
    return _encode(obj) + "\n"


def load_json(path: str):
    """Read a JSON file, turning syntax errors into :class:`SchemaError` with a position."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
