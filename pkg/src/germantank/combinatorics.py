"""Exact binomial coefficients and the identities the derivations rest on.

Python ints are arbitrary precision, so ``int`` plays the role of an exact
integer and :class:`fractions.Fraction` (always in lowest terms with a
positive denominator) the role of an exact rational.
"""
from fractions import Fraction
from typing import List, Optional

from .errors import InvalidParameter

ExactInteger = int
ExactRational = Fraction


def _check_n(n: int) -> None:
    if n < 0:
        raise InvalidParameter(f"n must be nonnegative, got {n}")


def binom(n: int, r: int) -> int:
    """C(n, r) by the multiplicative formula; 0 when r is outside [0, n].

    Each partial product ``C(n - r + i, i)`` is an integer, so the floor
    division below is always exact and intermediates stay small.
    """
    _check_n(n)
    if r < 0 or r > n:
        return 0
    r = min(r, n - r)
    acc = 1
    for i in range(1, r + 1):
        acc = acc * (n - r + i) // i
    return acc


def pascal_row(n: int, width: Optional[int] = None) -> List[int]:
    """Row n of Pascal's triangle built by C(i+1, j) = C(i, j) + C(i, j-1) alone.

    With ``width`` set only columns ``0..width-1`` are kept.
    """
    _check_n(n)
    row = [1]
    for _ in range(n):
        row = [x + y for x, y in zip(row + [0], [0] + row)][:width]
    return row


def binom_via_pascal(n: int, r: int) -> int:
    """C(n, r) from Pascal's recurrence; independent of :func:`binom`."""
    _check_n(n)
    if r < 0 or r > n:
        return 0
    return pascal_row(n, r + 1)[r]


def hockey_stick(a: int, b: int) -> int:
    """Sum C(l, a) for l = a..b, evaluated term by term.

    Equals C(b+1, a+1); the closed form is deliberately not used here so the
    two sides can be compared.  Successive terms follow from
    C(l+1, a) = C(l, a) (l+1) / (l+1-a), starting at C(a, a) = 1.
    """
    if a < 0 or b < a:
        raise InvalidParameter(f"need 0 <= a <= b, got a={a}, b={b}")
    term = total = 1
    for ell in range(a, b):
        term = term * (ell + 1) // (ell + 1 - a)
        total += term
    return total
