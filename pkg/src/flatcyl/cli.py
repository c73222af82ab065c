"""Command-line interface.

Exit codes: 0 success, 1 domain or validation error (bad spec, signature,
inconclusive oracle), 2 usage or configuration error.  Reports are
``key=value`` lines on stdout; warnings go to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

import numpy as np

from .causality import (
    PeriodicityError,
    classify_conformal,
    classify_spacetime,
    closed_causal_curve,
    diamond_membership,
    dual_class,
    fragile_classification,
)
from .curvature import GridSpec, MetricField, brioschi_curvature, write_curvature_csv
from .expr import ExpressionError, eval_expression
from .metric import (
    CylinderPoint,
    DomainError,
    FlatMetric,
    SignatureError,
    TangentVector,
    canonical_time_orientation,
    classify_vector,
    negate_metric,
    null_directions,
    quadratic_form,
)
from .oracle import (
    OracleConfigError,
    build_causal_graph,
    oracle_classify,
    reachable_from,
    write_reachable_csv,
    write_reachable_pgm,
)
from .specfile import SpecError, load_metric_spec

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

DOMAIN_ERRORS = (SpecError, SignatureError, ExpressionError, PeriodicityError, DomainError)


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    return f"{v + 0.0:.17g}"  # + 0.0 folds -0 into 0


def fmt_vec(v) -> str:
    return f"{fmt(v[0])},{fmt(v[1])}"


# ---------------------------------------------------------------- argument types


def grid_arg(text: str) -> tuple[int, int]:
    try:
        nx, ny = text.lower().split("x")
        return int(nx), int(ny)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NXxNY, got {text!r}") from None


def range_arg(text: str) -> tuple[float, float]:
    try:
        a, b = text.split(":")
        return float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None


def point_arg(text: str) -> CylinderPoint:
    try:
        x, y = text.split(",")
        return CylinderPoint(float(x), float(y))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}") from None


def _grid(args) -> GridSpec:
    try:
        grid = GridSpec(args.grid[0], args.grid[1], *args.y_range)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    aspect = grid.cell_hy / grid.hx
    if not 0.25 <= aspect <= 4.0:
        warn(f"cell aspect ratio dy/dx = {aspect:.3g} outside [1/4, 4]; "
             "the stencil may miss cone directions")
    return grid


def warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _load(path):
    try:
        return load_metric_spec(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _flat_part(spec, what):
    if spec.kind == "general":
        raise SpecError(f"{what} needs a flat or conformal metric, got a general one")
    return spec.flat


# ---------------------------------------------------------------- commands


def cmd_classify(args) -> int:
    spec = _load(args.spec)
    m = _flat_part(spec, "classify")
    if spec.kind == "conformal":
        cls = classify_conformal(m, spec.psi)
    else:
        cls = classify_spacetime(m)
    out = [f"class={cls}"]
    if args.dual:
        dual = classify_spacetime(negate_metric(m))
        out.append(f"dual_class={dual}")
        if dual is not dual_class(cls):
            print("\n".join(out))
            print(f"error: duality violated: expected {dual_class(cls)}", file=sys.stderr)
            return EXIT_DOMAIN
        out.append("duality=ok")
    d1, d2 = null_directions(m)
    T = canonical_time_orientation(m)
    witness = closed_causal_curve(m)
    out += [
        f"kind={spec.kind}",
        f"E={fmt(m.E)}",
        f"F={fmt(m.F)}",
        f"G={fmt(m.G)}",
        f"q_dx={fmt(quadratic_form(m, TangentVector(1.0, 0.0)))}",
        f"dx_character={classify_vector(m, TangentVector(1.0, 0.0), args.eps)}",
        f"null_direction_1={fmt_vec(d1)}",
        f"null_direction_2={fmt_vec(d2)}",
        f"time_orientation={fmt_vec(T.T)}",
        f"closed_causal_curve={witness.character if witness else 'none'}",
    ]
    if spec.kind == "conformal":
        out.append(f"psi={spec.psi.source()}")
    print("\n".join(out))
    if fragile_classification(m):
        warn(f"|E| = {abs(m.E):.3g} is below 1e-9*(|E|+|F|+|G|); "
             "the class is numerically fragile")
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = _load(args.spec)
    m = _flat_part(spec, "oracle")
    grid = _grid(args)
    try:
        graph = build_causal_graph(m, None, grid, args.stencil, args.eps)
        report = oracle_classify(m, grid, args.stencil, args.eps, n_pairs=args.pairs,
                                 n_diamonds=args.diamonds, seed=args.seed, graph=graph)
    except OracleConfigError as exc:
        raise UsageError(str(exc)) from None
    print("\n".join(report.lines()))
    if args.out:
        i, j = args.source if args.source else (grid.nx // 2, grid.ny // 2)
        if not (0 <= i < grid.nx and 0 <= j < grid.ny):
            raise UsageError(f"source cell ({i}, {j}) outside the grid")
        mask = reachable_from(graph, i, j)
        with _output(args.out) as fh:
            if args.out.endswith(".csv"):
                write_reachable_csv(mask, fh)
            else:
                write_reachable_pgm(mask, fh)
    return EXIT_DOMAIN if report.inconclusive else EXIT_OK


def _pointwise_metrics(spec, grid):
    """Constant-coefficient metric per node (conformal factor dropped)."""
    X, Y = grid.nodes()
    if spec.kind != "general":
        m = spec.flat
        return X, Y, [[m] * grid.nx for _ in range(grid.ny)]

    def sample(e):
        return eval_expression(e, X, Y)

    E, F, G = sample(spec.E), sample(spec.F), sample(spec.G)
    rows = [[FlatMetric(E[j, i], F[j, i], G[j, i]) for i in range(grid.nx)]
            for j in range(grid.ny)]
    return X, Y, rows


def render_cones(args, spec, grid, fh) -> None:
    X, Y, metrics = _pointwise_metrics(spec, grid)
    fh.write("x,y,d1_a,d1_b,d2_a,d2_b\n")
    for j in range(grid.ny):
        for i in range(grid.nx):
            d1, d2 = null_directions(metrics[j][i])
            fh.write(",".join(fmt(v) for v in (X[j, i], Y[j, i], *d1, *d2)) + "\n")


def render_diamond(args, spec, grid, fh) -> None:
    if args.p is None or args.q is None:
        raise UsageError("render diamond needs --p x,y and --q x,y")
    m = _flat_part(spec, "render diamond")
    T = canonical_time_orientation(m)
    mask = np.zeros((grid.ny, grid.nx), dtype=bool)
    for j in range(grid.ny):
        for i in range(grid.nx):
            mask[j, i] = diamond_membership(m, T, args.p, args.q, grid.cell_center(i, j))
    write_reachable_pgm(mask, fh)


def render_curvature(args, spec, grid, fh) -> None:
    write_curvature_csv(brioschi_curvature(MetricField.from_spec(spec, grid)), fh)


RENDERERS = {"cones": render_cones, "diamond": render_diamond, "curvature": render_curvature}


def cmd_render(args) -> int:
    spec = _load(args.spec)
    grid = _grid(args)
    with _output(args.out) as fh:
        RENDERERS[args.what](args, spec, grid, fh)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatcyl",
        description="Causal structure of flat and conformally flat Lorentzian cylinders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="place a metric on the causal ladder")
    p.add_argument("spec")
    p.add_argument("--dual", action="store_true", help="also classify -g and check duality")
    p.add_argument("--eps", type=float, default=0.0,
                   help="relative null tolerance for the d/dx character line")
    p.set_defaults(func=cmd_classify)

    def geometry(p, grid="64x64"):
        p.add_argument("--grid", type=grid_arg, default=grid_arg(grid), metavar="NXxNY")
        p.add_argument("--y-range", type=range_arg, default=(-1.0, 1.0), metavar="A:B",
                       help="write negative bounds as --y-range=-1:1")

    p = sub.add_parser("oracle", help="classify from the discretized causal graph")
    p.add_argument("spec")
    geometry(p)
    p.add_argument("--stencil", type=int, default=3)
    p.add_argument("--eps", type=float, default=1e-12)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--diamonds", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--source", type=lambda s: tuple(int(v) for v in s.split(",")),
                   metavar="I,J", help="source cell of the exported reachable set")
    p.add_argument("--out", help="reachable-set export (.csv for CSV, otherwise PGM)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("render", help="emit plot data")
    p.add_argument("what", choices=sorted(RENDERERS))
    p.add_argument("spec")
    geometry(p)
    p.add_argument("--p", type=point_arg, metavar="X,Y")
    p.add_argument("--q", type=point_arg, metavar="X,Y")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
