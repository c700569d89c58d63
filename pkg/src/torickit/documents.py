"""JSON interchange documents for fans and morphisms."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .exactla import IntMatrix
from .fan import Fan, FanError
from .morphism import ToricMorphism


class DocumentError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


def fan_to_doc(f: Fan) -> dict:
    return {
        "rank": f.dim,
        "rays": [list(r) for r in f.rays],
        "max_cones": [list(c) for c in f.max_cones],
    }


def morphism_to_doc(m: ToricMorphism) -> dict:
    return {
        "source": fan_to_doc(m.source),
        "target": fan_to_doc(m.target),
        "matrix": m.matrix.tolist(),
    }


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(where, f"expected integer, got {json.dumps(x)}")
    return x


def _int_rows(x: Any, where: str) -> list[list[int]]:
    if not isinstance(x, list):
        raise DocumentError(where, "expected an array")
    out = []
    for i, row in enumerate(x):
        if not isinstance(row, list):
            raise DocumentError(f"{where}[{i}]", "expected an array")
        out.append([_int(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    return out


def fan_from_doc(doc: Any, where: str = "$") -> Fan:
    if not isinstance(doc, dict):
        raise DocumentError(where, "fan document must be an object")
    for key in ("rank", "rays", "max_cones"):
        if key not in doc:
            raise DocumentError(where, f"missing field {key!r}")
    extra = set(doc) - {"rank", "rays", "max_cones"}
    if extra:
        raise DocumentError(where, f"unknown fields {sorted(extra)}")
    n = _int(doc["rank"], f"{where}.rank")
    rays = _int_rows(doc["rays"], f"{where}.rays")
    cones = _int_rows(doc["max_cones"], f"{where}.max_cones")
    for i, r in enumerate(rays):
        if len(r) != n:
            raise DocumentError(f"{where}.rays[{i}]", f"expected {n} coordinates")
    for i, c in enumerate(cones):
        for j, idx in enumerate(c):
            if not 0 <= idx < len(rays):
                raise DocumentError(f"{where}.max_cones[{i}][{j}]", f"no ray {idx}")
    try:
        return Fan(n, rays, cones)
    except FanError as exc:
        raise DocumentError(where, str(exc)) from None


def morphism_from_doc(doc: Any, where: str = "$") -> ToricMorphism:
    if not isinstance(doc, dict):
        raise DocumentError(where, "morphism document must be an object")
    for key in ("source", "target", "matrix"):
        if key not in doc:
            raise DocumentError(where, f"missing field {key!r}")
    src = fan_from_doc(doc["source"], f"{where}.source")
    tgt = fan_from_doc(doc["target"], f"{where}.target")
    rows = _int_rows(doc["matrix"], f"{where}.matrix")
    if len(rows) != tgt.dim or any(len(r) != src.dim for r in rows):
        raise DocumentError(
            f"{where}.matrix", f"expected {tgt.dim} rows of {src.dim} entries"
        )
    return ToricMorphism(src, tgt, IntMatrix(rows, ncols=src.dim))


def parse_json(text: str, where: str = "$") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{where}:{exc.lineno}:{exc.colno}", exc.msg) from None


def to_jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(to_jsonable(v) for v in x)
    return x


def dumps(doc: Any) -> str:
    """Deterministic rendering: sorted keys, fixed separators."""
    return json.dumps(to_jsonable(doc), sort_keys=True)


def loads_fan(text: str) -> Fan:
    return fan_from_doc(parse_json(text))


def loads_morphism(text: str) -> ToricMorphism:
    return morphism_from_doc(parse_json(text))
