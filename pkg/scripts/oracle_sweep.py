"""Run the oracle over random metrics of each causal class and summarize.

    python scripts/oracle_sweep.py --n 100 --grid 64 --stencil 3
"""

import argparse
import time

import numpy as np

from flatcyl.causality import CausalClass
from flatcyl.curvature import GridSpec
from flatcyl.metric import FlatMetric
from flatcyl.oracle import oracle_classify


def draw(rng, n, kind):
    out = []
    while len(out) < n:
        E, F, G = rng.uniform(-3, 3, 3)
        if kind == "cnc":
            if abs(F) >= 0.2:
                out.append(FlatMetric(0.0, F, G))
            continue
        sign = 1 if kind == "tv" else -1
        if E * G + F * F > 0 and sign * E >= 0.3 * (abs(E) + abs(F) + abs(G)):
            out.append(FlatMetric(E, F, G))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--stencil", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--worst", type=int, default=3, help="print the lowest-agreement metrics")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    grid = GridSpec(args.grid, args.grid, -1.0, 1.0)
    print("class  runs  match  inconclusive  unsound  pooled_agreement  seconds")
    for kind in ("tv", "cnc", "gh"):
        t0 = time.perf_counter()
        reports = [(m, oracle_classify(m, grid, args.stencil, seed=i)) for i, m in enumerate(draw(rng, args.n, kind))]
        dt = time.perf_counter() - t0
        interior = sum(r.interior_pairs for _, r in reports)
        agreed = sum(round(r.agreement_with_exact * r.interior_pairs) for _, r in reports)
        print(f"{kind:5s}  {len(reports):4d}  {sum(r.match for _, r in reports):5d}  "
              f"{sum(r.inconclusive for _, r in reports):12d}  {sum(r.soundness_violations for _, r in reports):7d}  "
              f"{agreed / max(interior, 1):16.4f}  {dt:7.1f}")
        for m, r in sorted(reports, key=lambda mr: mr[1].agreement_with_exact)[: args.worst]:
            print(f"       E={m.E:+.3f} F={m.F:+.3f} G={m.G:+.3f}  agreement={r.agreement_with_exact:.3f}")


if __name__ == "__main__":
    main()
