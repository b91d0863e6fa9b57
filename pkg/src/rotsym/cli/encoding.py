"""Exact-value strings and JSON state documents."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from ..angular import HalfInt, SqrtRational
from ..bipartite import SpinPair
from ..multipartite import BinaryMask, MultiFidelity

__all__ = [
    "InputError",
    "decimal",
    "format_rational",
    "load_document",
    "parse_rational",
    "parse_sqrt",
    "parse_state",
    "state_document",
]


class InputError(ValueError):
    """Malformed command-line input (exit code 2)."""


def format_rational(x: Fraction | int) -> str:
    """``"p/q"``, or ``"p"`` for integers."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str):
        raise InputError(f"exact values must be strings like \"p/q\", got {text!r}")
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None
    if "." in text or "e" in text.lower():
        raise InputError(f"write rationals as \"p/q\", not decimals: {text!r}")
    return value


def parse_sqrt(text: str) -> SqrtRational:
    return SqrtRational.parse(text)


def decimal(x: float) -> float:
    """Round to 15 significant digits."""
    return float(f"{float(x):.15g}")


def load_document(source: str) -> Any:
    """Inline JSON (starting with ``{``) or a path to a JSON file."""
    text = source.strip()
    try:
        if text.startswith("{"):
            return json.loads(text)
        path = Path(source)
        if not path.is_file():
            raise InputError(f"no such state file: {source}")
        return json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise InputError(f"invalid JSON: {err}") from None


def _spin(value: Any, what: str) -> HalfInt:
    if not isinstance(value, str):
        raise InputError(f"{what} must be a string such as \"3/2\", got {value!r}")
    try:
        return HalfInt.parse(value)
    except ValueError as err:
        raise InputError(f"{what}: {err}") from None


def parse_pairs(doc: dict) -> tuple[SpinPair, ...]:
    raw = doc.get("pairs")
    if not isinstance(raw, list) or not raw:
        raise InputError("\"pairs\" must be a non-empty list of {\"ja\", \"jb\"} objects")
    pairs = []
    for k, item in enumerate(raw, 1):
        if not isinstance(item, dict) or "ja" not in item or "jb" not in item:
            raise InputError(f"pair {k} must be an object with \"ja\" and \"jb\"")
        try:
            pairs.append(SpinPair(_spin(item["ja"], f"pair {k} ja"), _spin(item["jb"], f"pair {k} jb")))
        except ValueError as err:
            raise InputError(f"pair {k}: {err}") from None
    return tuple(pairs)


def parse_family(doc: dict, k: int) -> BinaryMask:
    raw = doc.get("family", "0" * k)
    names = {"werner": "0", "isotropic": "1"}
    if isinstance(raw, str) and raw.lower() in names:
        raw = names[raw.lower()] * k
    try:
        mask = BinaryMask.parse(raw) if isinstance(raw, str) else BinaryMask(tuple(raw))
    except (ValueError, TypeError) as err:
        raise InputError(f"family: {err}") from None
    if len(mask) != k:
        raise InputError(f"family mask {mask} has {len(mask)} bits for {k} pairs")
    return mask


def parse_state(doc: Any) -> MultiFidelity:
    """A state document: ``{"pairs": [...], "family": "01", "fidelities": ["p/q", ...]}``."""
    if not isinstance(doc, dict):
        raise InputError("state document must be a JSON object")
    pairs = parse_pairs(doc)
    family = parse_family(doc, len(pairs))
    raw = doc.get("fidelities")
    if not isinstance(raw, list):
        raise InputError("\"fidelities\" must be a list of \"p/q\" strings")
    values = tuple(parse_rational(v) for v in raw)
    try:
        return MultiFidelity(pairs, family, values)
    except (ValueError, TypeError) as err:
        raise InputError(str(err)) from None


def state_document(s: MultiFidelity) -> dict:
    return {
        "pairs": [{"ja": str(p.ja), "jb": str(p.jb)} for p in s.pairs],
        "family": str(s.family),
        "fidelities": [format_rational(v) for v in s.values],
    }
