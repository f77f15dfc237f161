"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 internal invariant violation.
"""

import argparse
import csv
import io
import json
import sys
import time

from . import pipeline
from .errors import InternalInvariantViolation, InvalidInput

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3


def _read_input(path):
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump_json(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def _cmd_solve(args, problem):
    report, _ = pipeline.solve_report(problem, pair_limit=args.pair_limit)
    code = EXIT_OK if report["verification"]["passed"] else EXIT_INTERNAL
    return report, None, code


def _cmd_verify(args, problem):
    report = pipeline.verify_report(problem, restarts=args.restarts, seed=args.seed,
                                    horizon=args.horizon)
    code = EXIT_OK if report["verification"]["passed"] else EXIT_VERIFY_FAILED
    return report, None, code


def _cmd_sweep(args, problem):
    header, rows = pipeline.sweep_rows(problem, args.resolution)
    if args.format == "json":
        best = int(rows[:, -1].argmax())
        report = {"problem": pipeline._problem_block(problem),
                  "resolution": args.resolution, "count": int(rows.shape[0]),
                  "max_xi": float(rows[best, -1]),
                  "argmax": dict(zip(header, map(float, rows[best])))}
        return report, None, EXIT_OK
    return None, _csv_text(header, rows), EXIT_OK


def _cmd_energy(args, problem):
    traj, summary = pipeline.energy_run(problem, horizon=args.horizon)
    code = EXIT_OK if summary["reached"] else EXIT_VERIFY_FAILED
    if not summary["reached"]:
        print(f"warning: terminal state norm {summary['terminal_norm']} exceeds tolerance "
              "(horizon too short)", file=sys.stderr)
    if args.format == "json":
        return summary, None, code
    basis = problem.system.basis if problem.system is not None else None
    return None, traj.to_csv(basis=basis), code


def _cmd_optimize(args, problem):
    trace, summary = pipeline.optimize_run(problem, seed=args.seed, tolerance=args.tolerance)
    code = EXIT_OK if trace.converged else EXIT_VERIFY_FAILED
    if args.format == "json":
        return summary, None, code
    n = problem.n
    header = ["iteration"] + [f"b_{i + 1}" for i in range(n)] + ["xi", "gradient_norm"]
    rows = [[i] + list(problem.to_original(b)) + [v, g]
            for i, (b, v, g) in enumerate(trace.iterates)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([row[0]] + [repr(float(v)) for v in row[1:]])
    return None, buf.getvalue(), code


COMMANDS = {
    "solve": (_cmd_solve, "json", "closed-form optimal actuator and worst-case energy"),
    "verify": (_cmd_verify, "json", "check the closed form against independent numerics"),
    "sweep": (_cmd_sweep, "csv", "brute-force grid of xi(b) over the circle/sphere (n=2,3)"),
    "energy": (_cmd_energy, "csv", "simulate minimum-energy steering to the origin"),
    "optimize": (_cmd_optimize, "json", "single sphere gradient ascent with trace"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="actuator-design",
        description="Optimal single actuator minimizing worst-case control energy.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, default_format, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", "-i", default="-", help="problem JSON file ('-' for stdin)")
        p.add_argument("--output", "-o", default="-", help="output file ('-' for stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=default_format)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=50)
        p.add_argument("--tolerance", type=float, default=None,
                       help="gradient-norm tolerance for the sphere ascent")
        p.add_argument("--horizon", type=float, default=None,
                       help="steering horizon (default 40/lambda_1)")
        p.add_argument("--mode", choices=("float", "rational"), default=None)
        p.add_argument("--resolution", type=int, default=10_000,
                       help="sweep grid resolution (angles for n=2, per axis for n=3)")
        p.add_argument("--pair-limit", type=int, default=pipeline.REPORT_PAIR_LIMIT,
                       help="maximum optimal pairs listed in reports")
        p.add_argument("--timing", action="store_true",
                       help="add wall-clock timing to JSON reports (breaks byte-identity)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    start = time.perf_counter()
    try:
        problem = pipeline.load_problem(_read_input(args.input), mode=args.mode)
        if args.tolerance is not None:
            if not args.tolerance > 0:
                raise InvalidInput("--tolerance must be positive")
            problem.tolerances["gradient"] = args.tolerance
        if args.restarts < 1:
            raise InvalidInput("--restarts must be positive")
        if args.horizon is not None and not args.horizon > 0:
            raise InvalidInput("--horizon must be positive")
        report, text, code = handler(args, problem)
    except InvalidInput as exc:
        _emit(_dump_json({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              args.output)
        return EXIT_INVALID
    except InternalInvariantViolation as exc:
        _emit(_dump_json({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              args.output)
        return EXIT_INTERNAL

    if report is not None:
        if args.timing:
            report["timing"] = {"seconds": time.perf_counter() - start}
        text = _dump_json(report)
    _emit(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
