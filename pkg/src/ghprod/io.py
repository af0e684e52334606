"""JSON files for spaces, product specs, factor pairings and reports."""
from __future__ import annotations

import hashlib
import json
import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputNotFound, ParseError, SchemaError
from .metric_core import (
    DEFAULT_TOL,
    FiniteMetricSpace,
    GeneratorSpec,
    ProductSpec,
    generate,
    parse_exponent,
    validate_space,
)

_GENERATOR = re.compile(r"^(simplex|cycle|path|point)(:\d+)?$")


def is_generator(text: str) -> bool:
    return bool(_GENERATOR.match(str(text).strip()))


def _read_json(path: Path):
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise InputNotFound(f"{path}: no such file") from None
    except IsADirectoryError:
        raise InputNotFound(f"{path}: is a directory") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), exc.lineno, exc.msg) from None


def space_from_json(data, where="$", tol=DEFAULT_TOL) -> FiniteMetricSpace:
    if not isinstance(data, dict):
        raise SchemaError(where, "expected an object with name, labels and dist")
    dist = data.get("dist")
    if not isinstance(dist, list) or not dist:
        raise SchemaError(f"{where}.dist", "expected a nonempty list of rows")
    n = len(dist)
    for i, row in enumerate(dist):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"{where}.dist[{i}]", f"expected a row of {n} numbers")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SchemaError(f"{where}.dist[{i}][{j}]", f"expected a number, got {v!r}")
    labels = data.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise SchemaError(f"{where}.labels", "expected a list of strings")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise SchemaError(f"{where}.name", "expected a string")
    return validate_space(dist, labels, name, tol=tol)


def load_space(ref, tol=DEFAULT_TOL, base: Path | None = None) -> FiniteMetricSpace:
    """Read a space file, or build one from a generator string such as ``cycle:8``.

    An existing file always wins over the generator reading of the same text.
    """
    ref = str(ref)
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    if not path.exists() and is_generator(ref):
        return generate(GeneratorSpec.parse(ref))
    return space_from_json(_read_json(path), tol=tol)


def save_space(X: FiniteMetricSpace, path):
    Path(path).write_text(json.dumps(X.to_json(), indent=2) + "\n")


def load_product_spec(path, tol=DEFAULT_TOL) -> ProductSpec:
    """``{"p": number | "inf", "factors": [{"space": ref, "weight": number}]}``"""
    path = Path(path)
    data = _read_json(path)
    if not isinstance(data, dict):
        raise SchemaError("$", "expected an object with p and factors")
    if "p" not in data:
        raise SchemaError("$.p", "missing exponent")
    p = parse_exponent(data["p"])
    factors = data.get("factors")
    if not isinstance(factors, list) or not factors:
        raise SchemaError("$.factors", "expected a nonempty list")
    out = []
    for k, item in enumerate(factors):
        if not isinstance(item, dict) or "space" not in item:
            raise SchemaError(f"$.factors[{k}]", "expected an object with a space field")
        w = item.get("weight", 1.0)
        if isinstance(w, bool) or not isinstance(w, (int, float)) or w < 0:
            raise SchemaError(f"$.factors[{k}].weight", "expected a nonnegative number")
        space = item["space"]
        if isinstance(space, dict):
            X = space_from_json(space, f"$.factors[{k}].space", tol)
        else:
            X = load_space(space, tol, base=path.parent)
        out.append((X, float(w)))
    return ProductSpec(p, out)


def load_pairs(path, tol=DEFAULT_TOL):
    """``{"p"?: .., "pairs": [{"x": ref, "y": ref}], "per_factor_dgh"?: [..]}``

    Returns ``(p or None, [(X, Y)], per_factor_dgh or None)``.
    """
    path = Path(path)
    data = _read_json(path)
    if not isinstance(data, dict):
        raise SchemaError("$", "expected an object with a pairs list")
    pairs = data.get("pairs")
    if not isinstance(pairs, list) or not pairs:
        raise SchemaError("$.pairs", "expected a nonempty list")
    out = []
    for k, item in enumerate(pairs):
        if not isinstance(item, dict) or "x" not in item or "y" not in item:
            raise SchemaError(f"$.pairs[{k}]", "expected an object with x and y")
        side = []
        for key in ("x", "y"):
            ref = item[key]
            if isinstance(ref, dict):
                side.append(space_from_json(ref, f"$.pairs[{k}].{key}", tol))
            else:
                side.append(load_space(ref, tol, base=path.parent))
        out.append(tuple(side))
    p = data.get("p")
    per = data.get("per_factor_dgh")
    if per is not None and (not isinstance(per, list) or len(per) != len(out)):
        raise SchemaError("$.per_factor_dgh", f"expected a list of {len(out)} numbers")
    return (None if p is None else parse_exponent(p)), out, per


def _check_relations(node, where="$"):
    """Every object carrying lower/upper(/exact) must be ordered."""
    if isinstance(node, dict):
        lo, hi, ex = node.get("lower"), node.get("upper"), node.get("exact")
        if isinstance(lo, float) and isinstance(hi, float):
            if lo > hi + 1e-12:
                raise ValueError(f"{where}: lower {lo!r} > upper {hi!r}")
            if isinstance(ex, float) and not (lo - 1e-12 <= ex <= hi + 1e-12):
                raise ValueError(f"{where}: exact {ex!r} outside [{lo!r}, {hi!r}]")
        for k, v in node.items():
            _check_relations(v, f"{where}.{k}")
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _check_relations(v, f"{where}[{i}]")


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class Report:
    command: list
    inputs_digest: str
    status: str = "ok"
    result: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)
    error: dict | None = None
    timing: float | None = None

    def to_dict(self):
        out = {"command": self.command, "inputs_digest": self.inputs_digest,
               "status": self.status, "result": self.result, "caps": self.caps}
        if self.error is not None:
            out["error"] = self.error
        if self.timing is not None:
            out["timing_seconds"] = self.timing
        return _jsonable(out)

    def to_json(self) -> str:
        data = self.to_dict()
        _check_relations(data["result"])
        return json.dumps(data, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        d = json.loads(text)
        return cls(d["command"], d["inputs_digest"], d.get("status", "ok"), d.get("result", {}),
                   d.get("caps", {}), d.get("error"), d.get("timing_seconds"))


def digest(*parts) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(json.dumps(_jsonable(part), sort_keys=True).encode())
        h.update(b"\0")
    return h.hexdigest()


def save_report(report: Report, path=None, stream=None):
    text = report.to_json()
    if path is not None and str(path) != "-":
        Path(path).write_text(text)
    if stream is not None:
        stream.write(text)
    return text


def threads_from_env(default=1) -> int:
    raw = os.environ.get("GH_THREADS")
    if raw is None:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise SchemaError("GH_THREADS", f"expected a positive integer, got {raw!r}") from None
    if n < 1:
        raise SchemaError("GH_THREADS", f"expected a positive integer, got {raw!r}")
    return n
