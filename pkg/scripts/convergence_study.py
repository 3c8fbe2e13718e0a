"""Theorem residuals on the helix a = b = 1 under grid refinement.

Prints h, the two phase-relation residuals and the refinement ratios, once
with the default extended-precision accumulation and once with plain
float64 accumulation (--float64) to show where the rounding floor sits.

    python3 scripts/convergence_study.py
    python3 scripts/convergence_study.py --float64 --finest 1e-3
"""

import argparse
import math

import numpy as np

from spinframe import integrate
from spinframe.curves import helix_spec, sample_curve
from spinframe.pipeline import frenet_routes
from spinframe.verify import check_theorem2, check_theorem4


def residuals(intervals, length):
    r = frenet_routes(sample_curve(helix_spec(1.0, 1.0, length, samples=intervals + 1)))
    t2 = check_theorem2(r.spinor["bishop1"], r.lifted["frenet_NBT"], r.profile.theta1).max_residual
    t4 = check_theorem4(r.spinor["bishop2"], r.lifted["frenet_TNB"], r.profile.theta2).max_residual
    return r.curve.h, t2, t4


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--coarsest", type=float, default=0.4)
    ap.add_argument("--finest", type=float, default=1e-3)
    ap.add_argument("--length", type=float, default=4 * math.pi)
    ap.add_argument("--float64", action="store_true", help="accumulate in float64 instead")
    args = ap.parse_args()
    if args.float64:
        integrate.ACCUM_DTYPE = np.float64

    n = math.ceil(args.length / args.coarsest)
    rows = []
    while args.length / n >= args.finest * (1 - 1e-9):
        rows.append(residuals(n, args.length))
        n *= 2
    print(f"accumulation: {np.dtype(integrate.ACCUM_DTYPE).name}")
    print(f"{'h':>10} {'theorem2':>11} {'ratio':>7} {'theorem4':>11} {'ratio':>7}")
    prev = None
    for h, t2, t4 in rows:
        r2 = f"{prev[1] / t2:7.2f}" if prev else " " * 7
        r4 = f"{prev[2] / t4:7.2f}" if prev else " " * 7
        print(f"{h:10.3e} {t2:11.3e} {r2} {t4:11.3e} {r4}")
        prev = (h, t2, t4)


if __name__ == "__main__":
    main()
