"""Command line: ``spinframe frames | verify | tube``.

Exit codes: 0 ok, 1 verification failed, 2 usage, 3 bad curve input,
4 Frenet singularity.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .curves import load_curve_spec, sample_curve, with_step
from .errors import CurveError, SingularityError
from .io import FrameFieldDocument, atomic_write, make_header, report_document, tube_mesh
from .pipeline import METHODS, frame_field
from .verify import ToleranceConfig, cross_check_frames

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT, EXIT_SINGULAR = 0, 1, 2, 3, 4


def _load(path, step=None):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CurveError(f"cannot read curve file: {exc}") from exc
    spec = load_curve_spec(text)
    if step is not None:
        spec = with_step(spec, step)
    return spec, sample_curve(spec)


def cmd_frames(args) -> int:
    spec, curve = _load(args.curve, args.step)
    path, cols = frame_field(curve, args.frame, args.method, args.theta0)
    header = make_header(not args.no_timestamp, curve=spec.to_dict(), method=args.method,
                         step=curve.h, theta0=args.theta0)
    FrameFieldDocument.from_path(path, curve.position, cols, header).write(args.out, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = ToleranceConfig.with_tol(args.tol)
    spec, curve = _load(args.curve, args.step)
    report = cross_check_frames(curve, tol, skip_frenet=args.skip_frenet)
    header = make_header(not args.no_timestamp, curve=spec.to_dict(), step=curve.h,
                         tolerances=tol.__dict__)
    text = report_document(report, header)
    if args.report:
        atomic_write(args.report, text)
    failed = [c for c in report.checks if c.passed is False]
    skipped = sum(c.passed is None for c in report.checks)
    print(f"{len(report.checks)} checks, {len(failed)} failed, {skipped} skipped")
    for c in failed:
        print(f"FAIL {c.name}: residual {c.max_residual:.3e} > {c.tolerance:.1e} at sample {c.worst_index}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_tube(args) -> int:
    if not args.radius > 0 or args.segments < 3:
        print("error: need --radius > 0 and --segments >= 3", file=sys.stderr)
        return EXIT_USAGE
    _, curve = _load(args.curve, args.step)
    path, _ = frame_field(curve, args.frame, "closed-form")
    mesh = tube_mesh(curve.position, path.e2, path.e3, args.radius, args.segments)
    atomic_write(args.out, mesh.to_obj())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="spinframe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frames", help="write a frame field table")
    p.add_argument("--curve", required=True)
    p.add_argument("--frame", choices=["frenet", "bishop1", "bishop2"], required=True)
    p.add_argument("--method", choices=METHODS, default="vector")
    p.add_argument("--step", type=float, help="maximum arc-length spacing (overrides samples)")
    p.add_argument("--theta0", type=float, default=0.0, help="initial Bishop angle")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_frames)

    p = sub.add_parser("verify", help="run all frame/spinor checks")
    p.add_argument("--curve", required=True)
    p.add_argument("--tol", type=float, help="tolerance for integration and theorem checks")
    p.add_argument("--step", type=float)
    p.add_argument("--report")
    p.add_argument("--skip-frenet", action="store_true")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tube", help="sweep a circle along the curve (OBJ mesh)")
    p.add_argument("--curve", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--segments", type=int, default=16)
    p.add_argument("--frame", choices=["frenet", "bishop1"], default="bishop1")
    p.add_argument("--step", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tube)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "step", None) is not None and not args.step > 0:
        print("error: --step must be positive", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "tol", None) is not None and not args.tol >= 0:
        print("error: --tol must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except SingularityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (CurveError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
