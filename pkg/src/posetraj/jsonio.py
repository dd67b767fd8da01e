"""Canonical JSON rendering shared by every file the package writes.

One fixed rendering (sorted keys, two-space indent, trailing newline,
shortest round-trip float repr) is what makes rerun-with-same-seed produce
byte-identical files and lets scene exports round-trip exactly.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .errors import ParseError


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, doc: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))


def load_json(path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def require(doc: dict, key: str, where: str) -> Any:
    if key not in doc:
        raise ParseError(f"{where}: missing field '{key}'")
    return doc[key]


def finite_floats(values, where: str) -> list[float]:
    out = []
    for v in values:
        f = float(v)
        if not math.isfinite(f):
            raise ParseError(f"{where}: non-finite value {v!r}")
        out.append(f)
    return out
