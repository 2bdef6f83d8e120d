"""Exact rational power helpers on top of fractions.Fraction.

Every number in this package is a Fraction; no float ever enters an exact
computation.  The helpers here decide when a rational power of a rational
number is again rational (8^(1/3) = 2) and compute it exactly when it is.
"""

from __future__ import annotations

from fractions import Fraction


def integer_nth_root(n: int, p: int) -> int:
    """Floor of the p-th root of n >= 0, exact integer arithmetic."""
    if n < 0 or p <= 0:
        raise ValueError("integer_nth_root requires n >= 0 and p >= 1")
    if n in (0, 1) or p == 1:
        return n
    # Newton iteration on integers; seed from bit length.
    x = 1 << ((n.bit_length() + p - 1) // p)
    while True:
        y = ((p - 1) * x + n // x ** (p - 1)) // p
        if y >= x:
            break
        x = y
    while x ** p > n:
        x -= 1
    return x

def exact_root(n: int, p: int):
    """Exact p-th root of n >= 0, or None when n is not a perfect p-th power."""
    r = integer_nth_root(n, p)
    return r if r ** p == n else None

def exact_pow(base: Fraction, exponent: Fraction):
    """base**exponent as a Fraction, or None when the value is irrational.

    Negative bases are supported only for odd root orders ((-8)^(1/3) = -2).
    0**q is 0 for q > 0 and None otherwise.
    """
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base == 0:
        return Fraction(0) if exponent > 0 else None
    if exponent.denominator == 1:
        return base ** int(exponent)
    s, p = exponent.numerator, exponent.denominator
    sign = 1
    if base < 0:
        if p % 2 == 0:
            return None
        base = -base
        sign = -1 if s % 2 else 1
    rn = exact_root(base.numerator, p)
    rd = exact_root(base.denominator, p)
    if rn is None or rd is None:
        return None
    return sign * Fraction(rn, rd) ** s
