"""Canonical serialization helpers: exact rationals and stable JSON."""

from __future__ import annotations

import json
from fractions import Fraction


def frac_str(q) -> str:
    """Render an exact rational as 'num/den' in lowest terms."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s: str) -> Fraction:
    num, den = s.split("/")
    return Fraction(int(num), int(den))


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, LF newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
