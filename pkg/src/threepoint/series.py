"""Truncated formal power series with exact rational coefficients.

A series is a list ``[a_0, a_1, ..., a_n]`` of Fractions; every operation
takes the truncation order ``n`` explicitly and returns ``n + 1`` terms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Series = list


def _pad(a: Sequence[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(x) for x in a[: n + 1]]
    out.extend(Fraction(0) for _ in range(n + 1 - len(out)))
    return out


def mul(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> Series:
    a, b = _pad(a, n), _pad(b, n)
    return [sum((a[i] * b[d - i] for i in range(d + 1)), Fraction(0)) for d in range(n + 1)]


def divide(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> Series:
    """Quotient ``a / b``; ``b`` must have a nonzero constant term."""
    a, b = _pad(a, n), _pad(b, n)
    if b[0] == 0:
        raise ZeroDivisionError("series divisor has zero constant term")
    out: list[Fraction] = []
    for d in range(n + 1):
        acc = a[d] - sum((out[i] * b[d - i] for i in range(d)), Fraction(0))
        out.append(acc / b[0])
    return out


def log1p(a: Sequence[Fraction], n: int) -> Series:
    """``log(a)`` for a series with constant term 1, via ``(log a)' = a'/a``."""
    a = _pad(a, n)
    if a[0] != 1:
        raise ValueError("log needs constant term 1")
    deriv = [(i + 1) * a[i + 1] for i in range(n)] + [Fraction(0)]
    quotient = divide(deriv, a, n)
    return [Fraction(0)] + [quotient[i - 1] / i for i in range(1, n + 1)]


def exp_coefficients(n: int, sign: int = 1) -> Series:
    """Coefficients of ``exp(sign * x)`` up to ``x^n``."""
    return [Fraction(sign**i, math.factorial(i)) for i in range(n + 1)]


def even_part(a: Sequence[Fraction], n: int) -> Series:
    """Coefficients of ``x^0, x^2, ..., x^(2n)`` read as a series in ``z = x^2``."""
    a = _pad(a, 2 * n)
    return [a[2 * j] for j in range(n + 1)]
