"""Finite-difference Brioschi curvature against symbolic derivatives.

Prints the max interior error and the refinement ratio for the sin(2 pi x)
test field (flat, so the error is 0) and a curved companion field.
Needs sympy.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from flatcyl.curvature import GridSpec, MetricField, brioschi_curvature

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from exact_brioschi import CURVED, STANDARD, exact_K, sampler  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256, 512])
    args = ap.parse_args()
    for name, family in (("standard", STANDARD), ("curved", CURVED)):
        K_exact = exact_K(*family)
        prev = None
        for n in args.sizes:
            grid = GridSpec(n, n, -1.0, 1.0)
            X, Y = grid.nodes()
            K = brioschi_curvature(MetricField(grid, *sampler(family)(X, Y)))
            err = float(np.max(np.abs(K.K - K_exact(X, Y))[1:-1]))
            ratio = f"{prev / err:.4f}" if prev and err else "-"
            print(f"{name:8s} n={n:4d}  max_err={err:.3e}  ratio={ratio}")
            prev = err


if __name__ == "__main__":
    main()
