"""Canonical report serialization and content hashing.

Reports must be byte-identical across runs with the same inputs, so the
serializer is fixed here once: keys sorted, floats rendered with 6
significant digits, ASCII escapes, single trailing newline. The same
canonical form feeds every content hash in the package (dataset identity,
score-matrix cache keys), which keeps cache reuse honest across edits.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

FLOAT_DIGITS = 6


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value in report: {x!r}")
    if x == int(x) and abs(x) < 1e15:
        return f"{x:.1f}"
    return f"{x:.{FLOAT_DIGITS}g}"


def canonical_json(obj: Any) -> str:
    """Serialize to the canonical report form (no trailing newline)."""
    out: list[str] = []
    _emit(obj, out)
    return "".join(out)


def _emit(obj: Any, out: list[str]) -> None:
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, bool):  # pragma: no cover - caught above
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {key!r}")
            if i:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _emit(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} in report")


def content_hash(obj: Any) -> str:
    """sha256 hex digest of the canonical form of ``obj``."""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def write_report(path: str, document: dict) -> None:
    text = canonical_json(document) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
