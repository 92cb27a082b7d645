"""JSON input/output. Rationals travel as strings such as ``"-5/2"``."""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .chain import Chain
from .poly import Poly, as_fraction, format_fraction, poly_from_roots


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def load_json(path: str) -> Any:
    return json.loads(read_text(path))


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, Poly):
        return {"coeffs": [format_fraction(c) for c in obj.coeffs], "text": str(obj)}
    if isinstance(obj, Chain):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2)


def poly_from_json(obj: Any) -> Poly:
    """``{"coeffs": [...]}`` (lowest degree first) or ``{"roots": [...]}``."""
    if isinstance(obj, dict) and "coeffs" in obj:
        return Poly(obj["coeffs"])
    if isinstance(obj, dict) and "roots" in obj:
        return poly_from_roots(obj["roots"])
    if isinstance(obj, list):
        return Poly(obj)
    raise ValueError('polynomial JSON needs "coeffs" or "roots"')


def load_poly(path: str) -> Poly:
    return poly_from_json(load_json(path))


def load_chain(path: str) -> Chain:
    obj = load_json(path)
    if "chain" in obj and "a" not in obj:
        obj = obj["chain"]
    return Chain.from_json(obj)


def parse_rationals(text: str) -> list[Fraction]:
    return [as_fraction(t) for t in text.replace(" ", "").split(",") if t]


def parse_ints(text: str) -> list[int]:
    out = []
    for q in parse_rationals(text):
        if q.denominator != 1:
            raise ValueError(f"expected integers, got {format_fraction(q)}")
        out.append(int(q))
    return out


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def sha256_file(path: str) -> str:
    if path == "-":
        return "stdin"
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    """Everything needed to rerun a command; no timestamps, so reruns compare equal."""

    command: list[str]
    version: str
    inputs: dict[str, str] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    outputs: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return to_jsonable(asdict(self))
