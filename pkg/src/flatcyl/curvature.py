"""Gaussian curvature of cylinder metrics from finite differences.

Fields live on a node grid of shape ``(ny, nx)``: ``x_i = i / nx`` wraps
periodically, ``y_j`` runs from ``y_min`` to ``y_max`` inclusive.  Index
order is ``[j, i]`` (rows are constant ``y``).

Derivatives are second-order central differences; ``x`` wraps, the two
``y`` boundary rows use one-sided second-order stencils.  Every stencil is
written in terms of differences of samples so that a constant field gives
exactly zero.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .expr import Expression, eval_expression
from .metric import CylinderPoint, FlatMetric, SignatureError

__all__ = [
    "GridMismatchError",
    "GridSpec",
    "MetricField",
    "CurvatureField",
    "brioschi_curvature",
    "brioschi_from_derivatives",
    "riemann_component",
    "killing_residual",
    "translation_isometry",
    "write_curvature_csv",
]


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError(f"grid must be at least 4x4, got {self.nx}x{self.ny}")
        if not self.y_min < self.y_max:
            raise ValueError(f"need y_min < y_max, got {self.y_min} >= {self.y_max}")

    @property
    def hx(self) -> float:
        return 1.0 / self.nx

    @property
    def node_hy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid ``(X, Y)`` of node coordinates, shape ``(ny, nx)``."""
        x = np.arange(self.nx) / self.nx
        y = np.linspace(self.y_min, self.y_max, self.ny)
        return np.meshgrid(x, y)

    @property
    def cell_hy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    def cell_center(self, i: int, j: int) -> CylinderPoint:
        return CylinderPoint((i + 0.5) / self.nx, self.y_min + (j + 0.5) * self.cell_hy)

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        x = (np.arange(self.nx) + 0.5) / self.nx
        y = self.y_min + (np.arange(self.ny) + 0.5) * self.cell_hy
        return np.meshgrid(x, y)


@dataclass(frozen=True)
class MetricField:
    """Coefficients ``gxx = -E``, ``gxy = F``, ``gyy = G`` sampled on nodes."""

    grid: GridSpec
    gxx: np.ndarray
    gxy: np.ndarray
    gyy: np.ndarray

    def __post_init__(self):
        shape = (self.grid.ny, self.grid.nx)
        for name in ("gxx", "gxy", "gyy"):
            arr = np.broadcast_to(np.asarray(getattr(self, name), dtype=float), shape).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        det = self.gxx * self.gyy - self.gxy ** 2
        bad = ~(det < 0)
        if bad.any():
            j, i = np.argwhere(bad)[0]
            X, Y = self.grid.nodes()
            raise SignatureError(
                f"metric is not Lorentzian at node (i={i}, j={j}), "
                f"(x, y) = ({X[j, i]!r}, {Y[j, i]!r}): gxx*gyy - gxy^2 = {det[j, i]!r}"
            )

    @property
    def det(self) -> np.ndarray:
        return self.gxx * self.gyy - self.gxy ** 2

    @classmethod
    def from_flat(cls, m: FlatMetric, grid: GridSpec) -> MetricField:
        return cls(grid, -m.E, m.F, m.G)

    @classmethod
    def from_functions(cls, grid: GridSpec, E: Callable, F: Callable, G: Callable) -> MetricField:
        """Sample ``E(x, y)``, ``F(x, y)``, ``G(x, y)`` (numpy-vectorized) on nodes."""
        X, Y = grid.nodes()
        return cls(grid, -np.asarray(E(X, Y)), F(X, Y), G(X, Y))

    @classmethod
    def from_expressions(
        cls,
        grid: GridSpec,
        E: Expression,
        F: Expression,
        G: Expression,
        psi: Optional[Expression] = None,
    ) -> MetricField:
        """Sample coefficient expressions, optionally times ``exp(2 psi)``."""
        X, Y = grid.nodes()

        def sample(e):
            if isinstance(e, (int, float)):
                return np.full(X.shape, float(e))
            return eval_expression(e, X, Y)

        gxx, gxy, gyy = -sample(E), sample(F), sample(G)
        if psi is not None:
            factor = np.exp(2.0 * sample(psi))
            gxx, gxy, gyy = factor * gxx, factor * gxy, factor * gyy
        return cls(grid, gxx, gxy, gyy)

    @classmethod
    def from_spec(cls, spec, grid: GridSpec) -> MetricField:
        return cls.from_expressions(grid, spec.E, spec.F, spec.G, spec.psi)


@dataclass(frozen=True)
class CurvatureField:
    grid: GridSpec
    K: np.ndarray

    def interior(self) -> np.ndarray:
        """``K`` without the two one-sided ``y`` boundary rows."""
        return self.K[1:-1, :]


# ---------------------------------------------------------------- stencils


def d_x(f: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(f, -1, axis=1) - np.roll(f, 1, axis=1)) / (2.0 * h)


def d_xx(f: np.ndarray, h: float) -> np.ndarray:
    return ((np.roll(f, -1, axis=1) - f) + (np.roll(f, 1, axis=1) - f)) / (h * h)


def d_y(f: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    out[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) / (2.0 * h)
    out[-1] = -(4.0 * (f[-2] - f[-1]) - (f[-3] - f[-1])) / (2.0 * h)
    return out


def d_yy(f: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(f)
    out[1:-1] = ((f[2:] - f[1:-1]) + (f[:-2] - f[1:-1])) / (h * h)
    # 2 f0 - 5 f1 + 4 f2 - f3, rewritten on differences to f0
    out[0] = (-5.0 * (f[1] - f[0]) + 4.0 * (f[2] - f[0]) - (f[3] - f[0])) / (h * h)
    out[-1] = (-5.0 * (f[-2] - f[-1]) + 4.0 * (f[-3] - f[-1]) - (f[-4] - f[-1])) / (h * h)
    return out


def _det3(a, b, c, d, e, f, g, h, i):
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def brioschi_from_derivatives(E, F, G, Eu, Ev, Fu, Fv, Gu, Gv, Evv, Fuv, Guu):
    """Brioschi's formula for ``E du^2 + 2F du dv + G dv^2``.

    Arguments are first-fundamental-form coefficients and their partials
    (``u`` is ``x``, ``v`` is ``y``); everything broadcasts.
    """
    det1 = _det3(
        -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
        Fv - 0.5 * Gu, E, F,
        0.5 * Gv, F, G,
    )
    det2 = _det3(
        0.0, 0.5 * Ev, 0.5 * Gu,
        0.5 * Ev, E, F,
        0.5 * Gu, F, G,
    )
    return (det1 - det2) / (E * G - F * F) ** 2


def brioschi_curvature(f: MetricField) -> CurvatureField:
    """Gaussian curvature of ``f`` from finite-difference partials."""
    hx, hy = f.grid.hx, f.grid.node_hy
    E, F, G = f.gxx, f.gxy, f.gyy
    K = brioschi_from_derivatives(
        E, F, G,
        d_x(E, hx), d_y(E, hy),
        d_x(F, hx), d_y(F, hy),
        d_x(G, hx), d_y(G, hy),
        d_yy(E, hy), d_x(d_y(F, hy), hx), d_xx(G, hx),
    )
    return CurvatureField(f.grid, K)


def riemann_component(f: MetricField, K: CurvatureField) -> np.ndarray:
    """``R_1212 = K * (gxx*gyy - gxy^2)``, the single independent component in 2D."""
    if f.grid != K.grid:
        raise GridMismatchError(f"metric grid {f.grid} differs from curvature grid {K.grid}")
    return K.K * f.det


def killing_residual(f: MetricField, direction: str) -> float:
    """Max over nodes of ``|L_X g|`` for the coordinate field ``X = d/direction``.

    For a coordinate vector field the Lie derivative reduces to the
    partial derivative of the coefficients.
    """
    if direction == "x":
        diff = lambda a: d_x(a, f.grid.hx)  # noqa: E731
    elif direction == "y":
        diff = lambda a: d_y(a, f.grid.node_hy)  # noqa: E731
    else:
        raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")
    return float(max(np.max(np.abs(diff(g))) for g in (f.gxx, f.gxy, f.gyy)))


def translation_isometry(p: CylinderPoint, q: CylinderPoint) -> tuple[float, float]:
    """Translation ``(dx, dy)`` with ``dx`` in ``[0, 1)`` carrying ``p`` to ``q``.

    For a constant-coefficient metric every such translation is an isometry.
    """
    return CylinderPoint(q.x - p.x, 0.0).x, q.y - p.y


def write_curvature_csv(K: CurvatureField, fh) -> None:
    """Write ``x,y,K`` rows (row-major, ``y`` outer) with 17 significant digits."""
    X, Y = K.grid.nodes()
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["x", "y", "K"])
    for x, y, k in zip(X.ravel(), Y.ravel(), K.K.ravel()):
        writer.writerow([f"{x + 0.0:.17g}", f"{y + 0.0:.17g}", f"{k + 0.0:.17g}"])
