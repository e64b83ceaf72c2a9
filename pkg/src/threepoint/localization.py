"""Fixed-point localization for circle actions with isolated fixed points.

A model lists the fixed points of an ``S^1``-action on a closed ``2n``-manifold,
each with the ``n`` weights of the isotropy representation and a sign.  An
equivariant class of top degree ``2n`` restricts to ``a_q t^n`` at each fixed
point ``q``, and

    <class, [M]> = sum_q a_q * eps(q) / prod_i |mu_i(q)|.

Oriented models carry positive weights and the orientation sign ``eps(q)``.
Signed weights are accepted on input and normalized: each negative weight
flips ``eps``.  Unitary models keep signed weights, and ``epsilon`` then holds
the sign ``eps'(q)`` entering the chi_y formula.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .exact_arith import format_rational
from .genus_coefficients import Partition

__all__ = [
    "ORIENTED",
    "UNITARY",
    "FixedPoint",
    "FixedPointModel",
    "EquivariantClassAssignment",
    "ResidueReport",
    "DegreeMismatch",
    "ModelError",
    "euler_product",
    "integrate",
    "pontrjagin_restriction",
    "pontrjagin_number",
    "signature_of",
    "chi_y",
    "mirror",
    "evaluate_polynomial",
    "residue_consistency",
    "class_from_spec",
    "load_model",
    "model_from_dict",
    "model_to_dict",
]

ORIENTED = "oriented"
UNITARY = "unitary"


class ModelError(ValueError):
    """Invalid fixed-point data."""


class DegreeMismatch(ValueError):
    """A class of the wrong degree was integrated."""


@dataclass(frozen=True)
class FixedPoint:
    weights: tuple[int, ...]
    epsilon: int = 1
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w == 0 for w in self.weights):
            raise ModelError(f"fixed point {self.label!r} has a zero weight; it is not isolated")
        if self.epsilon not in (1, -1):
            raise ModelError(f"fixed point {self.label!r}: epsilon must be +1 or -1")

    @property
    def negative_count(self) -> int:
        return sum(1 for w in self.weights if w < 0)

    def normalized(self) -> FixedPoint:
        """Positive weight magnitudes, with ``epsilon`` flipped once per negative weight."""
        sign = -1 if self.negative_count % 2 else 1
        return FixedPoint(tuple(abs(w) for w in self.weights), self.epsilon * sign, self.label)


@dataclass(frozen=True)
class FixedPointModel:
    half_dim: int
    points: tuple[FixedPoint, ...]
    mode: str = ORIENTED

    def __post_init__(self) -> None:
        if self.mode not in (ORIENTED, UNITARY):
            raise ModelError(f"unknown mode {self.mode!r}")
        if self.half_dim < 1:
            raise ModelError("half_dim must be positive")
        points = tuple(self.points)
        for q in points:
            if len(q.weights) != self.half_dim:
                raise ModelError(
                    f"fixed point {q.label!r} has {len(q.weights)} weights, expected {self.half_dim}"
                )
        if self.mode == ORIENTED:
            points = tuple(q.normalized() for q in points)
        object.__setattr__(self, "points", points)

    @property
    def dim(self) -> int:
        return 2 * self.half_dim

    def oriented(self) -> FixedPointModel:
        """The induced oriented model (identity on oriented models)."""
        if self.mode == ORIENTED:
            return self
        return FixedPointModel(self.half_dim, self.points, ORIENTED)

    def reversed(self) -> FixedPointModel:
        """Same manifold with the circle acting through ``g -> g^-1``."""
        return FixedPointModel(
            self.half_dim,
            tuple(FixedPoint(tuple(-w for w in q.weights), q.epsilon, q.label) for q in self.points),
            self.mode,
        )


@dataclass(frozen=True)
class EquivariantClassAssignment:
    """Per-point restrictions ``a_q t^(degree/2)``, in model point order."""

    degree: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.degree % 2:
            raise DegreeMismatch("equivariant classes restricted to a point have even degree")
        object.__setattr__(self, "coefficients", tuple(Fraction(a) for a in self.coefficients))


@dataclass(frozen=True)
class ResidueReport:
    consistent: bool
    total: Fraction
    residues: tuple[tuple[str, Fraction], ...]

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "total": format_rational(self.total),
            "residues": [{"label": lab, "value": format_rational(v)} for lab, v in self.residues],
        }


def euler_product(q: FixedPoint) -> int:
    """``prod |mu_i|``; the factor ``t^n`` is implicit."""
    return math.prod(abs(w) for w in q.weights)


def integrate(model: FixedPointModel, cls: EquivariantClassAssignment) -> Fraction:
    """Evaluate a top-degree equivariant class on the fundamental class."""
    if cls.degree != model.dim:
        raise DegreeMismatch(f"class has degree {cls.degree}, manifold has dimension {model.dim}")
    oriented = model.oriented()
    if len(cls.coefficients) != len(oriented.points):
        raise ModelError(
            f"class has {len(cls.coefficients)} restrictions for {len(oriented.points)} fixed points"
        )
    return sum(
        (a * q.epsilon / euler_product(q) for a, q in zip(cls.coefficients, oriented.points)),
        Fraction(0),
    )


def _elementary(values: Sequence[int], j: int) -> int:
    return sum(math.prod(c) for c in combinations(values, j))


def pontrjagin_restriction(q: FixedPoint, j: int) -> Fraction:
    """Coefficient of ``t^(2j)`` in ``p_j`` restricted to ``q``: ``e_j(mu_1^2, ..., mu_n^2)``."""
    if not 0 <= j <= len(q.weights):
        raise ValueError(f"p_{j} is out of range at a point with {len(q.weights)} weights")
    return Fraction(_elementary([w * w for w in q.weights], j))


def pontrjagin_number(model: FixedPointModel, part: Iterable[int]) -> Fraction:
    """``p_I[M]`` computed from the equivariant Pontrjagin classes."""
    part = Partition.of(part)
    oriented = model.oriented()
    coefficients = tuple(
        math.prod((pontrjagin_restriction(q, j) for j in part), start=Fraction(1))
        for q in oriented.points
    )
    return integrate(oriented, EquivariantClassAssignment(4 * part.weight, coefficients))


def signature_of(model: FixedPointModel) -> int:
    """``sum_q eps(q)``."""
    return sum(q.epsilon for q in model.oriented().points)


def chi_y(model: FixedPointModel, count: str = "positive") -> tuple[int, ...]:
    """Kosniowski's formula ``sum_q eps'(q) (-y)^(d_q)``, coefficients by power of ``y``.

    ``d_q`` is the number of positive weights at ``q``; ``count="negative"``
    uses the number of negative weights instead.
    """
    if model.mode != UNITARY:
        raise ModelError("chi_y needs a unitary model with signed weights")
    if count not in ("positive", "negative"):
        raise ValueError("count must be 'positive' or 'negative'")
    want_positive = count == "positive"
    coeffs = [0] * (model.half_dim + 1)
    for q in model.points:
        d = sum(1 for w in q.weights if (w > 0) == want_positive)
        coeffs[d] += q.epsilon * (-1) ** d
    return tuple(coeffs)


def mirror(poly: Sequence[int]) -> tuple[int, ...]:
    """Apply ``d -> n - d`` to ``sum eps (-y)^d``, where ``n = len(poly) - 1``."""
    n = len(poly) - 1
    return tuple(poly[n - d] * (-1) ** n for d in range(n + 1))


def evaluate_polynomial(poly: Sequence[int], y: int | Fraction) -> Fraction:
    return sum((Fraction(c) * Fraction(y) ** i for i, c in enumerate(poly)), Fraction(0))


def residue_consistency(model: FixedPointModel) -> ResidueReport:
    """Check ``sum_q eps(q) / e(q) = 0``, i.e. ``<t^n, [M]> = 0``."""
    oriented = model.oriented()
    residues = tuple(
        (q.label or str(i), Fraction(q.epsilon, euler_product(q)))
        for i, q in enumerate(oriented.points)
    )
    total = sum((r for _, r in residues), Fraction(0))
    return ResidueReport(total == 0, total, residues)


def class_from_spec(model: FixedPointModel, spec: str) -> EquivariantClassAssignment:
    """Build a class from ``"t^k"``, ``"euler"`` or ``"p<parts>"`` (e.g. ``p1``, ``p1,1``, ``p2``).

    ``t^k`` restricts to ``t^k`` everywhere, ``euler`` to the equivariant Euler
    class ``eps(q) prod mu_i t^n``, and ``p1,1`` to ``p_1^2``.
    """
    spec = spec.strip()
    oriented = model.oriented()
    if spec.startswith("t^"):
        power = int(spec[2:])
        return EquivariantClassAssignment(2 * power, tuple(Fraction(1) for _ in oriented.points))
    if spec == "t":
        return EquivariantClassAssignment(2, tuple(Fraction(1) for _ in oriented.points))
    if spec == "euler":
        return EquivariantClassAssignment(
            model.dim, tuple(Fraction(q.epsilon * euler_product(q)) for q in oriented.points)
        )
    if spec.startswith("p") and len(spec) > 1:
        try:
            part = Partition.of(int(x) for x in spec[1:].split(","))
        except ValueError as exc:
            raise ValueError(f"bad Pontrjagin class spec {spec!r}") from exc
        coefficients = tuple(
            math.prod((pontrjagin_restriction(q, j) for j in part), start=Fraction(1))
            for q in oriented.points
        )
        return EquivariantClassAssignment(4 * part.weight, coefficients)
    raise ValueError(f"unknown class spec {spec!r}; expected t^k, euler or p<parts>")


def model_from_dict(data: dict) -> FixedPointModel:
    try:
        points = tuple(
            FixedPoint(tuple(p["weights"]), int(p.get("epsilon", 1)), str(p.get("label", i)))
            for i, p in enumerate(data["points"])
        )
        return FixedPointModel(int(data["half_dim"]), points, data.get("mode", ORIENTED))
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed model: {exc!r}") from exc


def model_to_dict(model: FixedPointModel) -> dict:
    return {
        "half_dim": model.half_dim,
        "mode": model.mode,
        "points": [
            {"label": q.label, "weights": list(q.weights), "epsilon": q.epsilon}
            for q in model.points
        ],
    }


def load_model(path: str | Path) -> FixedPointModel:
    """Read a model file.  ``json.JSONDecodeError`` carries line and column."""
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
