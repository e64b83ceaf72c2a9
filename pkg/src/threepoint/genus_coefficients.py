"""Multiplicative sequences for the L-genus and the Todd genus.

A genus is determined by its characteristic power series
``Q(z) = 1 + q_1 z + q_2 z^2 + ...``.  Its degree-``k`` polynomial ``K_k``
is the degree-``k`` part of ``Q(z_1) Q(z_2) ... Q(z_k)`` rewritten in the
elementary symmetric polynomials of the ``z_i``.  For the Todd genus the
``z_i`` are Chern roots and ``e_j`` is ``c_j``; for the L-genus the ``z_i``
are squared Pontrjagin roots and ``e_j`` is ``p_j``.

Two independent routes produce the coefficients:

* :func:`genus_polynomial` builds the full polynomial by expanding in the
  monomial symmetric basis and solving for the elementary basis.  This is
  cheap up to ``k`` around 12.
* :func:`multiplicative_coefficient` extracts a single coefficient from
  ``exp(sum_j a_j P_j)``, where ``log Q = sum a_j z^j`` and the power sums
  ``P_j`` are written in the elementary classes named by the partition.
  The cost depends on the multiplicities in the partition, not on ``k``,
  so it reaches weight 100+ easily.

:func:`s_coeff` and :func:`t_coeff` use the second route; the test suite
checks it against the first and against the closed Bernoulli formulas.
"""

from __future__ import annotations

import functools
import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from . import series
from .exact_arith import bernoulli, format_rational

__all__ = [
    "Partition",
    "GenusSpec",
    "GradedPolynomial",
    "CharNumberVector",
    "FlavorMismatch",
    "PONTRJAGIN",
    "CHERN",
    "L_GENUS",
    "TODD",
    "GENERA",
    "partitions",
    "genus_polynomial",
    "multiplicative_coefficient",
    "s_coeff",
    "t_coeff",
    "s_closed_form",
    "t_closed_form",
    "evaluate_genus",
    "genus_linear_form",
    "chern_to_pontrjagin_forms",
    "coefficient_table",
]

PONTRJAGIN = "pontrjagin"
CHERN = "chern"


class FlavorMismatch(ValueError):
    """A genus was paired with characteristic numbers of the other flavor."""


class Partition(tuple):
    """Nondecreasing tuple of positive integers; ordering is lexicographic."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a > b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be nondecreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def of(cls, parts: Iterable[int]) -> Partition:
        """Build from parts in any order."""
        return cls(sorted(parts))

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def __repr__(self) -> str:
        return f"Partition{tuple(self)!r}"


def _partitions_from(k: int, smallest: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for first in range(smallest, k + 1):
        rest = k - first
        if rest and rest < first:
            continue
        for tail in _partitions_from(rest, first):
            yield (first,) + tail


@functools.lru_cache(maxsize=64)
def _partitions_cached(k: int) -> tuple[Partition, ...]:
    return tuple(Partition(p) for p in _partitions_from(k, 1))


def partitions(k: int) -> list[Partition]:
    """All partitions of ``k``, lexicographic on the nondecreasing parts.

    >>> partitions(4)
    [Partition(1, 1, 1, 1), Partition(1, 1, 2), Partition(1, 3), Partition(2, 2), Partition(4,)]
    """
    if k < 1:
        raise ValueError("partitions() needs k >= 1")
    return list(_partitions_cached(k))


@dataclass(frozen=True, eq=False)
class GenusSpec:
    """A multiplicative genus given by its characteristic series.

    ``build(n)`` returns the coefficients ``q_0..q_n`` of ``Q``.  Coefficients
    are cached and extended on demand; a truncated expansion is a prefix of
    any longer one, so cached results never depend on call order.
    """

    name: str
    flavor: str
    build: Callable[[int], list[Fraction]]
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def _ensure(self, n: int) -> tuple[list[Fraction], list[Fraction]]:
        with self._lock:
            have = self._cache.get("q")
            if have is None or len(have) <= n:
                size = max(n, 2 * len(have) if have else 16)
                q = self.build(size)
                if q[0] != 1:
                    raise ValueError(f"{self.name}: characteristic series must start with 1")
                self._cache["q"] = q
                self._cache["log"] = series.log1p(q, size)
            return self._cache["q"], self._cache["log"]

    def series_coefficient(self, j: int) -> Fraction:
        return self._ensure(j)[0][j]

    def log_coefficient(self, j: int) -> Fraction:
        """Coefficient of ``z^j`` in ``log Q(z)``."""
        return self._ensure(j)[1][j]

    def __hash__(self) -> int:
        return hash((self.name, self.flavor))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GenusSpec):
            return NotImplemented
        return (self.name, self.flavor) == (other.name, other.flavor)


def _l_series(n: int) -> list[Fraction]:
    # x / tanh(x) = cosh(x) / (sinh(x) / x), read in z = x^2
    pos = series.exp_coefficients(2 * n + 1)
    neg = series.exp_coefficients(2 * n + 1, sign=-1)
    cosh = [(a + b) / 2 for a, b in zip(pos, neg)]
    sinh = [(a - b) / 2 for a, b in zip(pos, neg)]
    return series.divide(series.even_part(cosh, n), series.even_part(sinh[1:], n), n)


def _todd_series(n: int) -> list[Fraction]:
    # x / (1 - e^{-x}) = 1 / ((1 - e^{-x}) / x)
    neg = series.exp_coefficients(n + 1, sign=-1)
    denominator = [-c for c in neg[1:]]
    return series.divide([Fraction(1)], denominator, n)


L_GENUS = GenusSpec("L", PONTRJAGIN, _l_series)
TODD = GenusSpec("todd", CHERN, _todd_series)
GENERA: dict[str, GenusSpec] = {"L": L_GENUS, "todd": TODD}


@dataclass(frozen=True)
class GradedPolynomial:
    """``sum coeff(I) x_I`` over partitions ``I`` of a common weight ``grade``."""

    grade: int
    terms: Mapping[Partition, Fraction]

    def __post_init__(self) -> None:
        for part in self.terms:
            if part.weight != self.grade:
                raise ValueError(f"{part} has weight {part.weight}, expected {self.grade}")

    def __getitem__(self, part: Iterable[int]) -> Fraction:
        return self.terms.get(Partition.of(part), Fraction(0))

    def items(self):
        return sorted(self.terms.items())


def _multiset_key(counts: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((v, c) for v, c in counts.items() if v > 0 and c > 0))


@functools.lru_cache(maxsize=None)
def _monomial_count(
    exponents: tuple[tuple[int, int], ...], factors: tuple[int, ...]
) -> int:
    """Coefficient of one fixed monomial in ``prod_r e_r``.

    ``exponents`` is the monomial as a multiset ``((exponent, count), ...)``
    of its nonzero exponents; ``factors`` lists the ``r``.  Each ``e_r``
    picks ``r`` distinct variables that still have positive exponent.
    """
    if not factors:
        return 0 if exponents else 1
    r, rest = factors[0], factors[1:]
    groups = list(exponents)
    total = 0

    def choose(idx: int, left: int, ways: int, taken: list[int]) -> None:
        nonlocal total
        if left == 0:
            counts: Counter = Counter()
            for (value, count), t in zip(groups, taken + [0] * (len(groups) - len(taken))):
                counts[value] += count - t
                counts[value - 1] += t
            total += ways * _monomial_count(_multiset_key(counts), rest)
            return
        if idx == len(groups):
            return
        _, count = groups[idx]
        for t in range(min(count, left) + 1):
            choose(idx + 1, left - t, ways * math.comb(count, t), taken + [t])

    choose(0, r, 1, [])
    return total


def _solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rhs)
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


def _genus_polynomial(genus: GenusSpec, k: int) -> GradedPolynomial:
    basis = partitions(k)
    # prod_i Q(z_i) in degree k equals sum_lambda q_lambda m_lambda
    target = [
        math.prod((genus.series_coefficient(p) for p in lam), start=Fraction(1))
        for lam in basis
    ]
    # transition[mu][lam] = coefficient of m_lam in e_mu
    transition = [
        [Fraction(_monomial_count(_multiset_key(Counter(lam)), mu)) for lam in basis]
        for mu in basis
    ]
    # sum_mu c_mu transition[mu][lam] = target[lam]
    columns = [[transition[mu][lam] for mu in range(len(basis))] for lam in range(len(basis))]
    coeffs = _solve(columns, target)
    return GradedPolynomial(k, {mu: c for mu, c in zip(basis, coeffs) if c != 0})


_poly_cache: dict[tuple[str, str, int], GradedPolynomial] = {}
_poly_lock = threading.Lock()


def genus_polynomial(genus: GenusSpec, k: int) -> GradedPolynomial:
    """The degree-``k`` polynomial of the multiplicative sequence of ``genus``."""
    if k < 1:
        raise ValueError("genus_polynomial needs k >= 1")
    key = (genus.name, genus.flavor, k)
    with _poly_lock:
        cached = _poly_cache.get(key)
    if cached is not None:
        return cached
    poly = _genus_polynomial(genus, k)
    with _poly_lock:
        return _poly_cache.setdefault(key, poly)


def _sparse_mul(
    a: Mapping[tuple[int, ...], Fraction],
    b: Mapping[tuple[int, ...], Fraction],
    cap: tuple[int, ...],
) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if all(x <= c for x, c in zip(e, cap)):
                out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def _sparse_series(
    base: Mapping[tuple[int, ...], Fraction], coeffs: Callable[[int], Fraction], cap: tuple[int, ...]
) -> dict[tuple[int, ...], Fraction]:
    """``sum_{m>=1} coeffs(m) base^m`` for ``base`` without constant term."""
    total: dict[tuple[int, ...], Fraction] = {}
    power = dict(base)
    m = 1
    while power:
        c = coeffs(m)
        for e, v in power.items():
            total[e] = total.get(e, Fraction(0)) + c * v
        power = _sparse_mul(power, base, cap)
        m += 1
    return {e: c for e, c in total.items() if c != 0}


def multiplicative_coefficient(genus: GenusSpec, part: Iterable[int]) -> Fraction:
    """Coefficient of ``e_I`` in ``K_{|I|}`` for the given genus.

    Only the classes ``e_d`` with ``d`` a part of ``I`` matter, so the others
    are set to zero: then ``E(t) = 1 + sum_d e_d t^d``, the power sums are
    ``P_j = (-1)^(j-1) j [t^j] log E(t)`` and ``K = exp(sum_j a_j P_j)``.
    Monomials exceeding the target exponent in any variable are dropped.
    """
    part = Partition.of(part)
    if not part:
        return Fraction(1)
    multiplicity = Counter(part)
    degrees = tuple(sorted(multiplicity))
    cap = tuple(multiplicity[d] for d in degrees)
    units = {
        tuple(int(i == j) for j in range(len(degrees))): Fraction(1) for i in range(len(degrees))
    }
    log_e = _sparse_series(units, lambda m: Fraction((-1) ** (m - 1), m), cap)
    exponent: dict[tuple[int, ...], Fraction] = {}
    for e, c in log_e.items():
        j = sum(x * d for x, d in zip(e, degrees))
        exponent[e] = c * (-1) ** (j - 1) * j * genus.log_coefficient(j)
    exponent = {e: c for e, c in exponent.items() if c != 0}
    k_series = _sparse_series(exponent, lambda m: Fraction(1, math.factorial(m)), cap)
    return k_series.get(cap, Fraction(0))


def s_coeff(part: Iterable[int]) -> Fraction:
    """Coefficient of ``p_I`` in the L-polynomial (signature theorem)."""
    return multiplicative_coefficient(L_GENUS, part)


def t_coeff(part: Iterable[int]) -> Fraction:
    """Coefficient of ``c_I`` in the Todd polynomial."""
    return multiplicative_coefficient(TODD, part)


def s_closed_form(k: int) -> Fraction:
    """``2^(2k) (2^(2k-1) - 1) |B_2k| / (2k)!``."""
    return Fraction(2 ** (2 * k) * (2 ** (2 * k - 1) - 1)) * abs(bernoulli(2 * k)) / math.factorial(2 * k)


def t_closed_form(k: int) -> Fraction:
    """``(-1)^k B_k / k!``."""
    return (-1) ** k * bernoulli(k) / math.factorial(k)


@dataclass(frozen=True)
class CharNumberVector:
    """Sparse integer characteristic numbers indexed by partitions of ``half_dim``."""

    flavor: str
    half_dim: int
    entries: Mapping[Partition, int]

    def __post_init__(self) -> None:
        if self.flavor not in (PONTRJAGIN, CHERN):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.half_dim < 1:
            raise ValueError("half_dim must be positive")
        clean = {}
        for part, value in self.entries.items():
            part = Partition.of(part)
            if part.weight != self.half_dim:
                raise ValueError(f"{part} does not have weight {self.half_dim}")
            if Fraction(value).denominator != 1:
                raise ValueError(f"characteristic number {part} = {value} is not an integer")
            clean[part] = int(value)
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, part: Iterable[int]) -> int:
        return self.entries.get(Partition.of(part), 0)


def evaluate_genus(genus: GenusSpec, numbers: CharNumberVector) -> Fraction:
    """``sum_I coeff(I) * numbers[I]``; missing numbers count as zero."""
    if genus.flavor != numbers.flavor:
        raise FlavorMismatch(
            f"genus {genus.name} takes {genus.flavor} numbers, got {numbers.flavor}"
        )
    return sum(
        (multiplicative_coefficient(genus, part) * value for part, value in numbers.entries.items()),
        Fraction(0),
    )


def _fits(counts: Counter, bounds: list[Counter]) -> bool:
    return any(all(bound[p] >= c for p, c in counts.items()) for bound in bounds)


def chern_to_pontrjagin_forms(
    k: int, surviving_chern: Iterable[Iterable[int]]
) -> dict[Partition, dict[Partition, Fraction]]:
    """Pontrjagin numbers of a unitary ``4k``-manifold as linear forms in Chern numbers.

    Uses ``p_j = sum_{i=0}^{2j} (-1)^(i+j) c_i c_(2j-i)`` and multiplies out
    ``p_J`` for every partition ``J`` of ``k``, keeping only Chern monomials in
    ``surviving_chern`` (partitions of ``2k``); all other Chern numbers are
    taken to vanish.  Every ``J`` appears in the result, possibly with an
    empty form.
    """
    surviving = {Partition.of(p) for p in surviving_chern}
    for part in surviving:
        if part.weight != 2 * k:
            raise ValueError(f"surviving Chern partition {part} must have weight {2 * k}")
    bounds = [Counter(p) for p in surviving]

    @functools.lru_cache(maxsize=None)
    def single(j: int) -> tuple[tuple[tuple[int, ...], int], ...]:
        terms: Counter = Counter()
        for i in range(2 * j + 1):
            mono = tuple(sorted(x for x in (i, 2 * j - i) if x))
            if _fits(Counter(mono), bounds):
                terms[mono] += (-1) ** (i + j)
        return tuple((m, c) for m, c in terms.items() if c)

    forms: dict[Partition, dict[Partition, Fraction]] = {}
    for big_j in partitions(k):
        poly: dict[tuple[int, ...], int] = {(): 1}
        for j in big_j:
            nxt: Counter = Counter()
            for mono, c in poly.items():
                for term, d in single(j):
                    merged = tuple(sorted(mono + term))
                    if _fits(Counter(merged), bounds):
                        nxt[merged] += c * d
            poly = {m: c for m, c in nxt.items() if c}
            if not poly:
                break
        forms[big_j] = {
            Partition(m): Fraction(c) for m, c in sorted(poly.items()) if Partition(m) in surviving
        }
    return forms


def genus_linear_form(
    genus: GenusSpec, k: int, surviving: Iterable[Iterable[int]]
) -> dict[Partition, Fraction]:
    """The genus of a unitary ``4k``-manifold as a linear form in surviving Chern numbers.

    Chern numbers outside ``surviving`` (partitions of ``2k``) are zero.  For
    the L-genus the Pontrjagin numbers are first expressed through
    :func:`chern_to_pontrjagin_forms`.
    """
    surviving = sorted({Partition.of(p) for p in surviving})
    if genus.flavor == CHERN:
        for part in surviving:
            if part.weight != 2 * k:
                raise ValueError(f"surviving Chern partition {part} must have weight {2 * k}")
        return {part: multiplicative_coefficient(genus, part) for part in surviving}
    result = {part: Fraction(0) for part in surviving}
    for big_j, form in chern_to_pontrjagin_forms(k, surviving).items():
        if not form:
            continue
        coeff = multiplicative_coefficient(genus, big_j)
        for part, value in form.items():
            result[part] += coeff * value
    return result


def coefficient_table(genus: GenusSpec, k: int) -> dict:
    """JSON-ready table of every coefficient of ``K_k``, zero entries included."""
    poly = genus_polynomial(genus, k)
    return {
        "genus": genus.name,
        "k": k,
        "coefficients": [
            {"partition": list(part), "value": format_rational(poly[part])}
            for part in partitions(k)
        ],
    }
