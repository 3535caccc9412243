"""Locale-independent number formatting shared by every CSV writer."""

from __future__ import annotations

import math


def fmt(x: float) -> str:
    """12 significant digits, ``inf``/``nan`` spelled out, no negative zero."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return f"{x:.12g}"


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def parse_bool(s: str) -> bool:
    s = s.strip()
    if s == "true":
        return True
    if s == "false":
        return False
    raise ValueError(f"expected true/false, got {s!r}")
