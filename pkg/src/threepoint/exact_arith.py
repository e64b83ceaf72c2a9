"""Exact rational helpers: Bernoulli numbers, 2-adic valuation, bit counts.

Rationals are plain :class:`fractions.Fraction` objects, which are always
kept in lowest terms with a positive denominator.  Nothing in this package
touches floating point.

Bernoulli numbers follow the generating function ``s/(e^s - 1)``, so
``B_1 = -1/2``.  Some references (and ``sympy`` >= 1.12) use ``B_1 = +1/2``;
only the index-1 value differs between the two conventions.
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "BigRational",
    "Valuation",
    "INFINITY",
    "bernoulli",
    "nu2",
    "hamming_weight",
    "vandermonde_det",
    "vandermonde_product",
    "det",
    "format_rational",
    "parse_rational",
]

BigRational = Fraction
RationalLike = Union[int, Fraction]


@functools.total_ordering
@dataclass(frozen=True)
class Valuation:
    """An integer or the distinguished value infinity (``value is None``)."""

    value: int | None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: Valuation | int) -> Valuation:
        other = _as_valuation(other)
        if self.is_infinite or other.is_infinite:
            return INFINITY
        return Valuation(self.value + other.value)

    __radd__ = __add__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other
        if isinstance(other, Valuation):
            return self.value == other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Valuation", self.value))

    def __lt__(self, other: Valuation | int) -> bool:
        other = _as_valuation(other)
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.value < other.value

    def __int__(self) -> int:
        if self.value is None:
            raise OverflowError("infinite valuation has no integer value")
        return self.value

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)

    def to_json(self) -> int | str:
        return "inf" if self.value is None else self.value


INFINITY = Valuation(None)


def _as_valuation(x: Valuation | int) -> Valuation:
    if isinstance(x, Valuation):
        return x
    if isinstance(x, int):
        return Valuation(x)
    raise TypeError(f"cannot compare Valuation with {type(x).__name__}")


_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(i: int) -> Fraction:
    """Return the Bernoulli number ``B_i`` (with ``B_1 = -1/2``)."""
    if i < 0:
        raise ValueError("bernoulli index must be non-negative")
    with _bernoulli_lock:
        table = _bernoulli_cache
        # s = (e^s - 1) * sum B_j s^j / j!  gives  sum_{j<=m} C(m+1, j) B_j = 0, m >= 1
        for m in range(len(table), i + 1):
            acc = sum((math.comb(m + 1, j) * table[j] for j in range(m)), Fraction(0))
            table.append(-acc / (m + 1))
        return table[i]


def _nu2_int(n: int) -> int:
    n = abs(n)
    return (n & -n).bit_length() - 1


def nu2(q: RationalLike) -> Valuation:
    """Extended 2-adic valuation of a rational; ``nu2(0)`` is infinity."""
    q = Fraction(q)
    if q == 0:
        return INFINITY
    return Valuation(_nu2_int(q.numerator) - _nu2_int(q.denominator))


def hamming_weight(x: int) -> int:
    """Number of ones in the binary expansion of ``|x|``."""
    return bin(abs(x)).count("1")


def det(matrix: Sequence[Sequence[RationalLike]]) -> Fraction:
    """Determinant of a square matrix by fraction-exact Gaussian elimination."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            result = -result
        p = rows[col][col]
        result *= p
        for r in range(col + 1, n):
            factor = rows[r][col] / p
            if factor:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return result


def vandermonde_det(values: Sequence[RationalLike]) -> Fraction:
    """Determinant of the matrix ``(values[n] ** j)`` for ``0 <= j < len(values)``.

    Nonzero exactly when the values are pairwise distinct.
    """
    if not values:
        raise ValueError("vandermonde_det needs at least one value")
    vals = [Fraction(v) for v in values]
    m = len(vals)
    return det([[vals[n] ** j for n in range(m)] for j in range(m)])


def vandermonde_product(values: Sequence[RationalLike]) -> Fraction:
    """Closed form ``prod_{n2 < n1} (values[n1] - values[n2])``."""
    vals = [Fraction(v) for v in values]
    out = Fraction(1)
    for n1 in range(len(vals)):
        for n2 in range(n1):
            out *= vals[n1] - vals[n2]
    return out


def format_rational(q: RationalLike) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    num, sep, den = text.strip().partition("/")
    if sep:
        return Fraction(int(num), int(den))
    return Fraction(int(num))


def product(values: Iterable[RationalLike]) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out
