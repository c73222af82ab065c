"""Exact causal structure of (conformally) flat Lorentzian cylinders.

The causal ladder position of ``g = -E dx^2 + 2F dx dy + G dy^2`` is fixed
by the character of the closed coordinate circles ``d/dx``:

* ``E > 0``: ``d/dx`` timelike, closed timelike curves through every point
  (totally vicious);
* ``E = 0``: ``d/dx`` null, closed null curves but no closed timelike ones
  (chronological, not causal);
* ``E < 0``: ``d/dx`` spacelike, every future causal vector has ``dy > 0``
  and causal diamonds sit inside horizontal bands (globally hyperbolic).

Futures on the cylinder are computed on the universal cover R^2: ``r`` is in
the future of ``p`` iff some lift ``(dx + k, dy)``, ``k`` an integer, is a
future causal (or timelike) vector.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

from .expr import Expression, eval_expression, parse_expression, validate_periodicity
from .metric import (
    CausalCharacter,
    CylinderPoint,
    FlatMetric,
    TangentVector,
    TimeOrientation,
    classify_vector,
    metric_pairing,
    negate_metric,
    null_directions,
    quadratic_form,
)

__all__ = [
    "CausalClass",
    "Mode",
    "PeriodicityError",
    "ClosedCurveWitness",
    "classify_spacetime",
    "dual_class",
    "classify_conformal",
    "classify_vector_conformal",
    "winding_witness",
    "future_membership",
    "diamond_membership",
    "closed_causal_curve",
    "fragile_classification",
]

FRAGILITY = 1e-9


class CausalClass(enum.Enum):
    TotallyVicious = "TotallyVicious"
    ChronologicalNonCausal = "ChronologicalNonCausal"
    GloballyHyperbolic = "GloballyHyperbolic"

    def __str__(self):
        return self.value


class Mode(enum.Enum):
    Chronological = "Chronological"
    Causal = "Causal"


class PeriodicityError(ValueError):
    """A conformal factor that does not respect ``x ~ x + 1``."""


@dataclass(frozen=True)
class ClosedCurveWitness:
    """The loop ``t -> (base.x + t mod 1, base.y)``, ``t`` in ``[0, 1]``."""

    base: CylinderPoint
    character: CausalCharacter

    def point_at(self, t: float) -> CylinderPoint:
        return CylinderPoint(self.base.x + t, self.base.y)

    @property
    def tangent(self) -> TangentVector:
        return TangentVector(1.0, 0.0)


def classify_spacetime(m: FlatMetric) -> CausalClass:
    if m.E > 0:
        return CausalClass.TotallyVicious
    if m.E == 0:
        return CausalClass.ChronologicalNonCausal
    return CausalClass.GloballyHyperbolic


_DUAL = {
    CausalClass.TotallyVicious: CausalClass.GloballyHyperbolic,
    CausalClass.ChronologicalNonCausal: CausalClass.ChronologicalNonCausal,
    CausalClass.GloballyHyperbolic: CausalClass.TotallyVicious,
}


def dual_class(c: CausalClass) -> CausalClass:
    """Class of ``(Z, -g)`` given the class of ``(Z, g)``."""
    return _DUAL[c]


def fragile_classification(m: FlatMetric) -> bool:
    """True when ``E`` is nonzero but tiny, so float noise could flip the class."""
    return 0 < abs(m.E) < FRAGILITY * (abs(m.E) + abs(m.F) + abs(m.G))


def _as_expression(psi: Union[str, Expression]) -> Expression:
    return parse_expression(psi) if isinstance(psi, str) else psi


def classify_conformal(flat: FlatMetric, psi: Union[str, Expression]) -> CausalClass:
    """Class of ``exp(2 psi) * flat``.

    The conformal factor is checked for x-periodicity and then plays no
    further role: causal classes are conformally invariant.
    """
    psi = _as_expression(psi)
    if not validate_periodicity(psi, samples=16, tol=1e-9):
        raise PeriodicityError(f"conformal factor {psi.source()} is not 1-periodic in x")
    return classify_spacetime(flat)


def classify_vector_conformal(
    flat: FlatMetric,
    psi: Union[str, Expression],
    p: CylinderPoint,
    v: TangentVector,
    eps: float = 0.0,
) -> CausalCharacter:
    """Character of ``v`` at ``p`` for the metric ``exp(2 psi) * flat``.

    Evaluates the scaled form ``exp(2 psi(p)) q(v)`` directly against the
    equally scaled tolerance band.
    """
    psi = _as_expression(psi)
    if v.is_zero():
        return classify_vector(flat, v, eps)  # raises
    factor = math.exp(2.0 * eval_expression(psi, p.x, p.y))
    q = factor * quadratic_form(flat, v)
    if abs(q) <= eps * factor * flat.scale * (v.a * v.a + v.b * v.b):
        return CausalCharacter.Null
    return CausalCharacter.Timelike if q < 0 else CausalCharacter.Spacelike


def _admissible(m: FlatMetric, T: TimeOrientation, v: TangentVector, mode: Mode) -> bool:
    if v.a == 0 and v.b == 0:
        return False
    q = quadratic_form(m, v)
    if mode is Mode.Chronological:
        if not q < 0:
            return False
    elif not q <= 0:
        return False
    return metric_pairing(m, v, T.T) < 0


def _critical_offsets(m: FlatMetric, T: TimeOrientation, dy: float) -> list[float]:
    """x-displacements where the admissible set can change at height ``dy``.

    Along the line ``{(a, dy)}``, ``q`` is a polynomial of degree <= 2 in
    ``a`` and the pairing with ``T`` is affine, so the admissible set is a
    finite union of intervals with endpoints among the returned values.
    """
    crit = [0.0]
    if dy != 0:
        if m.E != 0:
            # null slopes: q(s, 1) = 0
            crit.extend(d.a * dy for d in null_directions(m))
        else:
            # q(a, dy) = 2F a dy + G dy^2
            crit.append(-m.G * dy / (2.0 * m.F))
    # pairing(v, T) = a * pairing(dx, T) + dy * pairing(dy, T)
    slope = metric_pairing(m, TangentVector(1.0, 0.0), T.T)
    offset = dy * metric_pairing(m, TangentVector(0.0, 1.0), T.T)
    if slope != 0:
        crit.append(-offset / slope)
    return crit


def winding_witness(
    m: FlatMetric,
    T: TimeOrientation,
    p: CylinderPoint,
    target: CylinderPoint,
    mode: Mode = Mode.Causal,
) -> Optional[int]:
    """A winding ``k`` with ``(dx + k, dy)`` admissible, or None.

    ``dx = (target.x - p.x) mod 1`` and ``dy = target.y - p.y``.  The search
    is closed-form: every maximal admissible interval of lifts contains an
    integer shift within two units of one of its endpoints, and unbounded
    intervals are hit by a shift beyond the outermost critical offset.
    """
    dx = CylinderPoint(target.x - p.x, 0.0).x
    dy = target.y - p.y
    crit = _critical_offsets(m, T, dy)
    candidates = set()
    for c in crit:
        if not math.isfinite(c):
            continue
        base = math.floor(c - dx)
        candidates.update(range(base - 1, base + 3))
    lo = math.floor(min(crit) - dx)
    hi = math.ceil(max(crit) - dx)
    candidates.update((lo - 2, lo - 1, hi + 1, hi + 2))
    # smallest |k| first, positive before negative, for reproducible witnesses
    for k in sorted(candidates, key=lambda k: (abs(k), -k)):
        if _admissible(m, T, TangentVector(dx + k, dy), mode):
            return k
    return None


def future_membership(
    m: FlatMetric,
    T: TimeOrientation,
    p: CylinderPoint,
    target: CylinderPoint,
    mode: Union[Mode, str] = Mode.Causal,
) -> bool:
    """Is ``target`` in ``I+(p)`` (Chronological) or ``J+(p)`` (Causal)?

    ``J+`` is reflexive: ``p`` is in ``J+(p)`` through the constant curve.
    """
    mode = Mode(mode)
    if mode is Mode.Causal and p == target:
        return True
    return winding_witness(m, T, p, target, mode) is not None


def diamond_membership(
    m: FlatMetric,
    T: TimeOrientation,
    p: CylinderPoint,
    q: CylinderPoint,
    r: CylinderPoint,
) -> bool:
    """Is ``r`` in the causal diamond ``J+(p) & J-(q)``?"""
    return future_membership(m, T, p, r, Mode.Causal) and future_membership(
        m, T, r, q, Mode.Causal
    )


def closed_causal_curve(
    m: FlatMetric, base: CylinderPoint = CylinderPoint(0.0, 0.0)
) -> Optional[ClosedCurveWitness]:
    """A closed causal curve through ``base`` if one exists.

    The coordinate circle through ``base`` is timelike for ``E > 0`` and
    null for ``E = 0``.  For ``E < 0`` there is none.
    """
    character = classify_vector(m, TangentVector(1.0, 0.0), 0.0)
    if character is CausalCharacter.Spacelike:
        return None
    return ClosedCurveWitness(base, character)


def dual_pair(m: FlatMetric) -> tuple[CausalClass, CausalClass]:
    return classify_spacetime(m), classify_spacetime(negate_metric(m))
