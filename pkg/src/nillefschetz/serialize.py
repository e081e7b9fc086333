"""JSON encodings of exact scalars shared by reports and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .algebraic import FieldElement, RealAlgebraicField
from .exact import parse_rational, rational_str


def scalar_to_json(v):
    """Rationals become ``"p/q"``; field elements ``{"field": ..., "coords": ...}``."""
    if isinstance(v, FieldElement):
        if v.is_rational():
            return rational_str(v.coords[0])
        return {"field": v.field.to_json(), "coords": [rational_str(c) for c in v.coords]}
    if isinstance(v, tuple) and len(v) == 2:
        return {"interval": [rational_str(v[0]), rational_str(v[1])]}
    return rational_str(Fraction(v))


def scalar_from_json(data):
    if isinstance(data, str):
        return parse_rational(data)
    if "interval" in data:
        lo, hi = data["interval"]
        return (parse_rational(lo), parse_rational(hi))
    fld = RealAlgebraicField.from_json(data["field"])
    return fld.element(parse_rational(c) for c in data["coords"])
