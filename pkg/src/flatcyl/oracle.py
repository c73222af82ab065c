"""Brute-force causal structure from a discretized cylinder.

Cells of a :class:`~flatcyl.curvature.GridSpec` become graph nodes; an edge
joins two cells when the displacement between their centers is a future
causal vector.  Directed cycles are closed causal polygons, so strongly
connected components recover the causal ladder position independently of
the closed-form classifier in :mod:`flatcyl.causality`.

Node ``(i, j)`` (``x`` index ``i``, ``y`` index ``j``) has flat index
``j * nx + i``.  The edge set is invariant under ``i -> i + 1 mod nx``,
which the reachability tables exploit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .causality import CausalClass, Mode, classify_spacetime, future_membership
from .curvature import GridSpec
from .metric import (
    CausalCharacter,
    FlatMetric,
    TangentVector,
    TimeOrientation,
    canonical_time_orientation,
    classify_vector,
    is_future_directed,
    null_directions,
)

__all__ = [
    "OracleConfigError",
    "Step",
    "CausalGraph",
    "OracleReport",
    "build_causal_graph",
    "detect_cycles",
    "reach_table",
    "reachable_from",
    "interior_chronological",
    "oracle_classify",
    "write_reachable_pgm",
    "write_reachable_csv",
]

TV_COVERAGE = 0.99


class OracleConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    """One stencil offset: ``di`` cells in x, ``dj`` in y, ``winding`` extra turns."""

    di: int
    dj: int
    winding: int
    displacement: TangentVector
    label: CausalCharacter  # Timelike or Null


@dataclass(frozen=True)
class CausalGraph:
    grid: GridSpec
    metric: FlatMetric
    orientation: TimeOrientation
    stencil_radius: int
    eps: float
    steps: tuple
    src: np.ndarray
    dst: np.ndarray
    step_index: np.ndarray
    timelike: np.ndarray = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return self.grid.nx * self.grid.ny

    def adjacency(self, timelike_only: bool = False) -> csr_matrix:
        mask = self.timelike if timelike_only else slice(None)
        src, dst = self.src[mask], self.dst[mask]
        n = self.n_nodes
        return csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))


def _stencil_steps(m, T, grid, radius, eps):
    hx, hy = grid.hx, grid.cell_hy
    steps = []
    for dj in range(-radius, radius + 1):
        for di in range(-radius, radius + 1):
            if di == 0 and dj == 0:
                continue
            best = None
            # lifts of the same cell pair that differ by whole turns around S^1
            for k in sorted(range(-radius, radius + 1), key=lambda k: (abs(k), -k)):
                v = TangentVector(di * hx + k, dj * hy)
                if v.is_zero():
                    continue
                char = classify_vector(m, v, eps)
                if char is CausalCharacter.Spacelike or not is_future_directed(m, T, v, eps):
                    continue
                if char is CausalCharacter.Timelike:
                    best = Step(di, dj, k, v, char)
                    break
                if best is None:
                    best = Step(di, dj, k, v, CausalCharacter.Null)
            if best is not None:
                steps.append(best)
    return tuple(steps)


def build_causal_graph(
    m: FlatMetric,
    T: Optional[TimeOrientation],
    grid: GridSpec,
    stencil_radius: int = 3,
    eps: float = 1e-12,
) -> CausalGraph:
    """Causal graph with one edge per admissible stencil offset per cell.

    An offset ``(di, dj)`` is admissible when some lift
    ``(di*hx + k, dj*hy)``, ``|k| <= stencil_radius``, is future causal at
    tolerance ``eps``; the edge is Timelike if some lift is strictly timelike.
    """
    if stencil_radius < 1:
        raise OracleConfigError(f"stencil radius must be >= 1, got {stencil_radius}")
    if grid.nx < 2 * stencil_radius + 1:
        raise OracleConfigError(
            f"grid too coarse: nx={grid.nx} < 2*stencil_radius+1={2 * stencil_radius + 1}"
        )
    if eps < 0:
        raise OracleConfigError(f"eps must be >= 0, got {eps}")
    if T is None:
        T = canonical_time_orientation(m)
    steps = _stencil_steps(m, T, grid, stencil_radius, eps)

    nx, ny = grid.nx, grid.ny
    I, J = np.meshgrid(np.arange(nx), np.arange(ny))
    I, J = I.ravel(), J.ravel()
    src, dst, idx = [], [], []
    for s, step in enumerate(steps):
        tj = J + step.dj
        ok = (tj >= 0) & (tj < ny)
        src.append((J * nx + I)[ok])
        dst.append((tj * nx + (I + step.di) % nx)[ok])
        idx.append(np.full(ok.sum(), s))
    if steps:
        src, dst, idx = np.concatenate(src), np.concatenate(dst), np.concatenate(idx)
    else:
        src = dst = idx = np.zeros(0, dtype=int)
    timelike_steps = np.array([st.label is CausalCharacter.Timelike for st in steps], dtype=bool)
    timelike = timelike_steps[idx] if len(idx) else np.zeros(0, dtype=bool)
    return CausalGraph(grid, m, T, stencil_radius, eps, steps, src, dst, idx, timelike)


def _nontrivial_scc_nodes(adj: csr_matrix) -> np.ndarray:
    _, labels = connected_components(adj, directed=True, connection="strong")
    sizes = np.bincount(labels)
    return sizes[labels] > 1


def detect_cycles(graph: CausalGraph) -> tuple[bool, bool, float]:
    """``(causal_cycle, timelike_cycle, timelike_scc_coverage)``.

    The graph has no self-loops, so a directed cycle exists exactly when
    some strongly connected component has more than one node.
    """
    causal = bool(_nontrivial_scc_nodes(graph.adjacency()).any())
    in_timelike = _nontrivial_scc_nodes(graph.adjacency(timelike_only=True))
    return causal, bool(in_timelike.any()), float(in_timelike.mean())


def reachable_from(graph: CausalGraph, i: int, j: int, adj: Optional[csr_matrix] = None) -> np.ndarray:
    """Boolean ``(ny, nx)`` mask of cells reachable from cell ``(i, j)``.

    The source itself counts as reachable (empty path).
    """
    nx, ny = graph.grid.nx, graph.grid.ny
    if adj is None:
        adj = graph.adjacency()
    order = breadth_first_order(adj, j * nx + i, directed=True, return_predecessors=False)
    mask = np.zeros(nx * ny, dtype=bool)
    mask[order] = True
    return mask.reshape(ny, nx)


def reach_table(graph: CausalGraph) -> np.ndarray:
    """``table[j]`` is the reachable mask from cell ``(0, j)``.

    By x-translation invariance the mask from ``(i, j)`` is
    ``np.roll(table[j], i, axis=1)``.
    """
    adj = graph.adjacency()
    return np.stack([reachable_from(graph, 0, j, adj) for j in range(graph.grid.ny)])


def _reached(table, src, dst, nx):
    (si, sj), (ti, tj) = src, dst
    return bool(table[sj, tj, (ti - si) % nx])


def interior_chronological(
    m: FlatMetric,
    T: TimeOrientation,
    dx: float,
    dy: float,
    margin: float,
    extra_windings: int = 8,
) -> bool:
    """Does some lift ``(dx + k, dy)`` sit inside the future timelike cone
    at Euclidean distance ``>= margin`` from both null lines?"""
    d1, d2 = null_directions(m)
    n1, n2 = math.hypot(*d1), math.hypot(*d2)
    # on a line of constant dy the timelike lifts never straddle both cone
    # halves, so the null crossings alone bound the window
    crit = [0.0, d1.a * dy / d1.b if d1.b else 0.0, d2.a * dy / d2.b if d2.b else 0.0]
    lo = math.floor(min(crit) - dx) - extra_windings
    hi = math.ceil(max(crit) - dx) + extra_windings
    a = dx + np.arange(lo, hi + 1)
    q = -m.E * a * a + 2.0 * m.F * a * dy + m.G * dy * dy
    pairing = -m.E * a * T.T.a + m.F * (a * T.T.b + dy * T.T.a) + m.G * dy * T.T.b
    dist1 = np.abs(a * d1.b - dy * d1.a) / n1
    dist2 = np.abs(a * d2.b - dy * d2.a) / n2
    ok = (q < 0) & (pairing < 0) & (np.minimum(dist1, dist2) >= margin)
    return bool(ok.any())


@dataclass
class OracleReport:
    causal_cycle: bool
    timelike_cycle: bool
    timelike_scc_coverage: float
    single_source_coverage: float
    diamond_bound_violations: int
    diamonds_sampled: int
    diamond_members: int
    soundness_violations: int
    pairs_sampled: int
    interior_pairs: int
    agreement_with_exact: float
    inferred_class: Optional[CausalClass]
    exact_class: CausalClass
    diagnostic: str = ""

    @property
    def inconclusive(self) -> bool:
        return self.inferred_class is None

    @property
    def match(self) -> bool:
        return self.inferred_class is self.exact_class

    def lines(self) -> list[str]:
        def b(v):
            return "true" if v else "false"

        out = [
            f"inferred={self.inferred_class if self.inferred_class else 'Inconclusive'}",
            f"exact={self.exact_class}",
            f"match={b(self.match)}",
            f"causal_cycle={b(self.causal_cycle)}",
            f"timelike_cycle={b(self.timelike_cycle)}",
            f"timelike_scc_coverage={self.timelike_scc_coverage:.6f}",
            f"single_source_coverage={self.single_source_coverage:.6f}",
            f"diamond_violations={self.diamond_bound_violations}",
            f"diamonds_sampled={self.diamonds_sampled}",
            f"diamond_members={self.diamond_members}",
            f"soundness_violations={self.soundness_violations}",
            f"pairs_sampled={self.pairs_sampled}",
            f"interior_pairs={self.interior_pairs}",
            f"agreement={self.agreement_with_exact:.6f}",
        ]
        if self.diagnostic:
            out.append(f"diagnostic={self.diagnostic}")
        return out


def oracle_classify(
    m: FlatMetric,
    grid: GridSpec,
    stencil_radius: int = 3,
    eps: float = 1e-12,
    n_pairs: int = 1000,
    n_diamonds: int = 1000,
    seed: int = 0,
    graph: Optional[CausalGraph] = None,
) -> OracleReport:
    """Classify ``m`` from its causal graph and check it against the exact answer.

    Sampled cell pairs give two numbers: soundness violations (graph-reachable
    but not in the exact causal future, expected 0) and agreement (share of
    pairs that are chronologically related with a margin of two cell
    diagonals and are also graph-reachable).
    """
    if n_pairs < 500:
        raise OracleConfigError(f"need at least 500 sampled pairs, got {n_pairs}")
    T = canonical_time_orientation(m)
    if graph is None:
        graph = build_causal_graph(m, T, grid, stencil_radius, eps)
    causal_cycle, timelike_cycle, coverage = detect_cycles(graph)
    table = reach_table(graph)
    nx, ny = grid.nx, grid.ny
    single = float(table[ny // 2].mean())

    rng = np.random.default_rng(seed)
    margin = 2.0 * math.hypot(grid.hx, grid.cell_hy)
    cells = rng.integers(0, [nx, ny], size=(n_pairs, 2, 2))
    violations = interior = agreed = 0
    for (pi, pj), (ri, rj) in cells:
        p, r = grid.cell_center(pi, pj), grid.cell_center(ri, rj)
        reached = _reached(table, (pi, pj), (ri, rj), nx)
        if reached and not future_membership(m, T, p, r, Mode.Causal):
            violations += 1
        dx = (r.x - p.x) % 1.0
        if interior_chronological(m, T, dx, r.y - p.y, margin):
            interior += 1
            agreed += reached
    agreement = agreed / interior if interior else 1.0

    triples = rng.integers(0, [nx, ny], size=(n_diamonds, 3, 2))
    members = bad = 0
    for p, q, r in triples:
        if _reached(table, p, r, nx) and _reached(table, r, q, nx):
            members += 1
            if not p[1] <= r[1] <= q[1]:
                bad += 1

    inferred, diagnostic = None, ""
    if timelike_cycle:
        if coverage >= TV_COVERAGE:
            inferred = CausalClass.TotallyVicious
        else:
            diagnostic = (f"timelike cycles cover only {coverage:.4f} of cells "
                          f"(< {TV_COVERAGE}); refine the grid or widen the stencil")
    elif causal_cycle:
        inferred = CausalClass.ChronologicalNonCausal
    elif bad == 0:
        inferred = CausalClass.GloballyHyperbolic
    else:
        diagnostic = f"acyclic graph but {bad} sampled diamonds leave their y-band"

    return OracleReport(
        causal_cycle=causal_cycle,
        timelike_cycle=timelike_cycle,
        timelike_scc_coverage=coverage,
        single_source_coverage=single,
        diamond_bound_violations=bad,
        diamonds_sampled=n_diamonds,
        diamond_members=members,
        soundness_violations=violations,
        pairs_sampled=n_pairs,
        interior_pairs=interior,
        agreement_with_exact=agreement,
        inferred_class=inferred,
        exact_class=classify_spacetime(m),
        diagnostic=diagnostic,
    )


def write_reachable_pgm(mask: np.ndarray, fh) -> None:
    """Plain PGM (P2); 255 = reachable.  The top image row is the largest y."""
    ny, nx = mask.shape
    fh.write(f"P2\n{nx} {ny}\n255\n")
    for row in mask[::-1]:
        fh.write(" ".join("255" if v else "0" for v in row) + "\n")


def write_reachable_csv(mask: np.ndarray, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["i", "j", "reachable"])
    ny, nx = mask.shape
    for j in range(ny):
        for i in range(nx):
            writer.writerow([i, j, int(mask[j, i])])
