"""Run every frame/spinor check on a helix and print the report table.

    python3 scripts/helix_checks.py --a 1 --b 1 --step 1e-3
"""

import argparse
import math
import time

from spinframe.curves import helix_spec, sample_curve, steps_for
from spinframe.verify import ToleranceConfig, cross_check_frames


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--length", type=float, default=4 * math.pi)
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--tol", type=float, default=None)
    args = ap.parse_args()

    curve = sample_curve(helix_spec(args.a, args.b, args.length, steps_for(args.length, args.step)))
    t0 = time.perf_counter()
    report = cross_check_frames(curve, ToleranceConfig.with_tol(args.tol))
    elapsed = time.perf_counter() - t0

    print(f"helix a={args.a} b={args.b}, {len(curve.s)} samples, h={curve.h:.3e}, {elapsed:.2f} s")
    for c in report.checks:
        res = "-" if c.max_residual is None else f"{c.max_residual:.3e}"
        print(f"  {c.status:7} {c.name:38} {res:>10}  (tol {c.tolerance:.0e}) {c.note}")
    print("PASSED" if report.passed else "FAILED")
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
