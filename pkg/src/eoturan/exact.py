"""Exact integer roots and outward-rounded interval evaluation.

Threshold comparisons are done in integers or ``Fraction``; anything irrational
(roots of non-powers, logarithms) is enclosed in an mpmath interval whose
endpoints are converted back to exact rationals.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator

from mpmath import iv
from mpmath.libmp import to_rational

IV_PREC = 256


@contextmanager
def precision(bits: int = IV_PREC) -> Iterator[None]:
    """Temporarily raise the interval context's working precision."""
    old = iv.prec
    iv.prec = max(old, bits)
    try:
        yield
    finally:
        iv.prec = old


def iroot(x: int, r: int) -> int:
    """``floor(x ** (1/r))`` for integers ``x >= 0``, ``r >= 1``."""
    if x < 0 or r < 1:
        raise ValueError("iroot needs x >= 0 and r >= 1")
    if r == 1 or x < 2:
        return x
    if r == 2:
        return math.isqrt(x)
    y = 1 << -(-x.bit_length() // r)
    while True:
        z = ((r - 1) * y + x // y ** (r - 1)) // r
        if z >= y:
            break
        y = z
    while y**r > x:
        y -= 1
    while (y + 1) ** r <= x:
        y += 1
    return y


def floor_root_times(q: Fraction, r: int, m: int) -> int:
    """``floor(q ** (1/r) * m)`` exactly, for ``q > 0`` and ``m >= 0``.

    ``F <= q^(1/r) m`` iff ``F^r <= q m^r``, so the answer is the integer
    ``r``-th root of ``floor(q m^r)``.
    """
    if q <= 0 or m < 0:
        raise ValueError("need q > 0 and m >= 0")
    scaled = q * m**r
    return iroot(scaled.numerator // scaled.denominator, r)


def is_perfect_power(x: int, r: int) -> bool:
    return x >= 0 and iroot(x, r) ** r == x


def ivx(x) -> iv.mpf:
    """Exact conversion of an int/Fraction to a (possibly non-degenerate) interval."""
    with precision():
        if isinstance(x, Fraction):
            return iv.mpf(x.numerator) / iv.mpf(x.denominator)
        return iv.mpf(x)


def bounds(x: iv.mpf) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an interval."""
    lo, hi = x._mpi_
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


def ceil_upper(x: iv.mpf) -> int:
    return math.ceil(bounds(x)[1])


def log2_iv(x) -> iv.mpf:
    with precision():
        return iv.log(ivx(x)) / iv.log(iv.mpf(2))


def exact_log2(x: Fraction | int) -> int | None:
    """``log2 x`` when it is an integer, else None."""
    x = Fraction(x)
    if x <= 0:
        return None
    p, q = x.numerator, x.denominator
    if q == 1 and p & (p - 1) == 0:
        return p.bit_length() - 1
    if p == 1 and q & (q - 1) == 0:
        return -(q.bit_length() - 1)
    return None
