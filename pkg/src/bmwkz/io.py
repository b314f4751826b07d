"""Deterministic JSON output: sorted keys, complex as [re, im], floats at 17 significant digits."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np


def to_jsonable(obj):
    """Convert numpy arrays, complex numbers and tuples into plain JSON structures."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(x, ".17g")


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(k) + ": " + _encode(obj[k], indent, level + 1) for k in sorted(obj)]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    return json.dumps(obj)


def dumps(obj, indent: int = 2) -> str:
    return _encode(to_jsonable(obj), indent, 0) + "\n"


def write_json(obj, path: str | Path | None) -> str:
    """Write to ``path`` (or return only, when path is None)."""
    text = dumps(obj)
    if path is not None:
        Path(path).write_text(text)
    return text


def export_structure(alg, path: str | Path | None = None) -> str:
    return write_json(alg.to_dict(), path)


def import_structure(source) -> tuple[list[tuple[str, ...]], np.ndarray]:
    """Read {"basis": [...], "tensor": [[a, b, d, re, im], ...]} into (basis words, dense tensor)."""
    data = json.loads(Path(source).read_text()) if not isinstance(source, dict) else source
    basis = [tuple(w.split()) for w in data["basis"]]
    n = len(basis)
    c = np.zeros((n, n, n), dtype=complex)
    for a, b, d, re, im in data["tensor"]:
        c[int(a), int(b), int(d)] = complex(re, im)
    return basis, c
