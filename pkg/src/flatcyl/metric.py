"""Constant-coefficient Lorentzian metrics on the cylinder S^1 x R.

The metric is ``g = -E dx^2 + 2F dx dy + G dy^2`` with ``x ~ x + 1``.
``F`` is half of the cross-term coefficient, so the coefficient matrix in
the basis (d/dx, d/dy) is ``[[-E, F], [F, G]]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "SignatureError",
    "DomainError",
    "FlatMetric",
    "TangentVector",
    "CausalCharacter",
    "TimeOrientation",
    "CylinderPoint",
    "validate_lorentzian",
    "quadratic_form",
    "metric_pairing",
    "classify_vector",
    "negate_metric",
    "null_directions",
    "canonical_time_orientation",
    "is_future_directed",
]


class SignatureError(ValueError):
    """Raised when coefficients do not define a metric of signature (-,+)."""


class DomainError(ValueError):
    """Raised when an operation is called outside its domain."""


def _discriminant(E: float, F: float, G: float) -> float:
    return E * G + F * F


@dataclass(frozen=True)
class FlatMetric:
    E: float
    F: float
    G: float

    def __post_init__(self):
        for name in ("E", "F", "G"):
            val = getattr(self, name)
            if not math.isfinite(val):
                raise SignatureError(f"coefficient {name}={val!r} is not finite")
            object.__setattr__(self, name, float(val))
        disc = _discriminant(self.E, self.F, self.G)
        if not disc > 0:
            raise SignatureError(
                f"not Lorentzian: E*G + F^2 = {disc!r} <= 0 "
                f"for (E, F, G) = ({self.E!r}, {self.F!r}, {self.G!r})"
            )

    @property
    def discriminant(self) -> float:
        """``E*G + F^2``; strictly positive for every valid metric."""
        return _discriminant(self.E, self.F, self.G)

    @property
    def scale(self) -> float:
        return abs(self.E) + 2.0 * abs(self.F) + abs(self.G)


class TangentVector(NamedTuple):
    """Components along d/dx (``a``) and d/dy (``b``)."""

    a: float
    b: float

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0


class CausalCharacter(enum.Enum):
    Timelike = "Timelike"
    Null = "Null"
    Spacelike = "Spacelike"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TimeOrientation:
    T: TangentVector


@dataclass(frozen=True)
class CylinderPoint:
    """A point of the cylinder; ``x`` is stored in ``[0, 1)``."""

    x: float
    y: float

    def __post_init__(self):
        x = float(self.x) % 1.0
        # -tiny % 1.0 rounds up to 1.0
        if x >= 1.0:
            x = 0.0
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", float(self.y))

    def translated(self, dx: float, dy: float) -> CylinderPoint:
        return CylinderPoint(self.x + dx, self.y + dy)


def validate_lorentzian(E: float, F: float, G: float) -> FlatMetric:
    """Build a :class:`FlatMetric`, raising :class:`SignatureError` if invalid."""
    return FlatMetric(E, F, G)


def quadratic_form(m: FlatMetric, v: TangentVector) -> float:
    a, b = v
    return -m.E * a * a + 2.0 * m.F * a * b + m.G * b * b


def metric_pairing(m: FlatMetric, u: TangentVector, v: TangentVector) -> float:
    return -m.E * (u[0] * v[0]) + m.F * (u[0] * v[1] + u[1] * v[0]) + m.G * (u[1] * v[1])


def classify_vector(m: FlatMetric, v: TangentVector, eps: float = 0.0) -> CausalCharacter:
    """Causal character of ``v``.

    ``v`` is Null when ``|q(v)| <= eps * (|E| + 2|F| + |G|) * (a^2 + b^2)``;
    ``eps=0`` gives the exact sign test.
    """
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps!r}")
    a, b = v
    if a == 0 and b == 0:
        raise DomainError("causal character of the zero vector is undefined")
    q = quadratic_form(m, v)
    if abs(q) <= eps * m.scale * (a * a + b * b):
        return CausalCharacter.Null
    return CausalCharacter.Timelike if q < 0 else CausalCharacter.Spacelike


def negate_metric(m: FlatMetric) -> FlatMetric:
    return FlatMetric(-m.E, -m.F, -m.G)


def null_directions(m: FlatMetric) -> tuple[TangentVector, TangentVector]:
    """The two null directions of ``m``.

    For ``E != 0`` they are ``(s, 1)`` with ``s = (F +/- sqrt(F^2 + EG)) / E``
    (the ``+`` root first); for ``E == 0`` they are ``(1, 0)`` and ``(-G, 2F)``.
    """
    E, F, G = m.E, m.F, m.G
    if E == 0:
        return TangentVector(1.0, 0.0), TangentVector(-G, 2.0 * F)
    root = math.sqrt(m.discriminant)
    # pick the non-cancelling root first, recover the other from s1*s2 = -G/E
    if F >= 0:
        big = F + root
        s_plus = big / E
        s_minus = -G / big
    else:
        big = F - root
        s_minus = big / E
        s_plus = -G / big
    return TangentVector(s_plus, 1.0), TangentVector(s_minus, 1.0)


def canonical_time_orientation(m: FlatMetric) -> TimeOrientation:
    """Deterministic timelike vector choosing the future cone.

    Future is growing ``y`` whenever a timelike vector with ``b > 0``
    exists along the branch used; otherwise it is growing ``x``.
    """
    E, F, G = m.E, m.F, m.G
    if E < 0:
        T = TangentVector(F / E, 1.0)
    elif E == 0:
        T = TangentVector((-1.0 - G) / (2.0 * F), 1.0)
    elif G > 0:
        T = TangentVector(1.0, -F / G)
    elif G < 0:
        T = TangentVector(0.0, 1.0)
    else:
        T = TangentVector(1.0, 0.0)
    assert quadratic_form(m, T) < 0, (m, T)
    return TimeOrientation(T)


def is_future_directed(
    m: FlatMetric, T: TimeOrientation, v: TangentVector, eps: float = 0.0
) -> bool:
    """True iff the causal vector ``v`` lies in the future cone picked by ``T``."""
    if classify_vector(m, v, eps) is CausalCharacter.Spacelike:
        raise DomainError(f"{v} is spacelike; future-directedness is undefined")
    return metric_pairing(m, v, T.T) < 0
