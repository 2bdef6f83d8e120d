"""Built-in catalog of named Monge equations and symmetry fields.

Stable string keys let reproduction scripts avoid inline expressions:

    equations:  "eq2", "flat", "eq1(I)", "dz13(r1,r2)", "strazzullo"
    fields:     "S1" ... "S6" (the six symmetries of eq2 on J20),
                "equiaffine1" ... "equiaffine5" (plane generators
                x d/dy, x d/dx - y d/dy, y d/dx, d/dx, d/dy)

Parameterized keys take rational arguments, e.g. "eq1(3/4)" or "dz13(10,9)".
"""

from __future__ import annotations

import re
from fractions import Fraction

from .charts import J20, PLANE
from .expr import Expr
from .fields import MongeEquation, VectorField
from .parser import parse


class CatalogKeyError(KeyError):
    pass


def _vf(coeffs: dict) -> VectorField:
    return VectorField.from_strings(J20, coeffs)


def symmetry_fields() -> dict:
    """The six symmetry generators of the cubic-root equation z' = y + y2^(1/3)."""
    return {
        "S1": _vf({"y": "x", "y1": "1", "z": "1/2*x^2"}),
        "S2": _vf({"x": "x", "y": "-1*y", "y1": "-2*y1", "y2": "-3*y2"}),
        "S3": _vf({"x": "y", "y1": "-1*y1^2", "y2": "-3*y1*y2", "z": "1/2*y^2"}),
        "S4": _vf({"x": "1"}),
        "S5": _vf({"y": "1", "z": "x"}),
        "S6": _vf({"z": "1"}),
    }


def equiaffine_generators() -> dict:
    """Plane generators of the area-preserving affine action, as (xi, eta) pairs."""
    x = Expr.coordinate(PLANE, "x")
    y = Expr.coordinate(PLANE, "y")
    zero = Expr.zero(PLANE)
    one = Expr.constant(PLANE, 1)
    return {
        "equiaffine1": (zero, x),      # x d/dy
        "equiaffine2": (x, -y),        # x d/dx - y d/dy
        "equiaffine3": (y, zero),      # y d/dx
        "equiaffine4": (one, zero),    # d/dx
        "equiaffine5": (zero, one),    # d/dy
    }


def eq2() -> MongeEquation:
    return MongeEquation(parse("y + y2^(1/3)", J20))

def flat() -> MongeEquation:
    return MongeEquation(parse("y2^2", J20))

def eq1(invariant) -> MongeEquation:
    i = Fraction(invariant)
    f = parse("y2^2 + 10/3*y1^2", J20) + parse("y^2", J20).scale(1 + i * i)
    return MongeEquation(f.scale(Fraction(-1, 2)))

def dz13(r1, r2) -> MongeEquation:
    f = parse("y2^2", J20) \
        + parse("y1^2", J20).scale(Fraction(r1)) \
        + parse("y^2", J20).scale(Fraction(r2))
    return MongeEquation(f)

def strazzullo() -> MongeEquation:
    return MongeEquation(parse("1 + exp(-4/3*y)*(y2 - 1/2*y1^2)^(2/3)", J20))


_PARAM = re.compile(r"^([a-z0-9]+)\(([^()]*)\)$")

def equation_keys() -> list:
    return ["eq2", "flat", "eq1(I)", "dz13(r1,r2)", "strazzullo"]

def field_keys() -> list:
    return [f"S{i}" for i in range(1, 7)] + [f"equiaffine{i}" for i in range(1, 6)]


def get_equation(key: str) -> MongeEquation:
    key = key.strip()
    if key == "eq2":
        return eq2()
    if key == "flat":
        return flat()
    if key == "strazzullo":
        return strazzullo()
    m = _PARAM.match(key)
    if m:
        name, raw = m.group(1), m.group(2)
        args = [a.strip() for a in raw.split(",")] if raw.strip() else []
        try:
            values = [Fraction(a) for a in args]
        except (ValueError, ZeroDivisionError):
            raise CatalogKeyError(f"non-rational parameter in {key!r}") from None
        if name == "eq1" and len(values) == 1:
            return eq1(values[0])
        if name == "dz13" and len(values) == 2:
            return dz13(values[0], values[1])
    raise CatalogKeyError(f"unknown equation key {key!r}")


def get_field(key: str) -> VectorField:
    key = key.strip()
    fields = symmetry_fields()
    if key in fields:
        return fields[key]
    gens = equiaffine_generators()
    if key in gens:
        from .fields import prolong_plane_field
        xi, eta = gens[key]
        return prolong_plane_field(xi, eta)
    raise CatalogKeyError(f"unknown field key {key!r}")
