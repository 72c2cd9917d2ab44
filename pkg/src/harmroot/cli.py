"""``harmroot`` command-line interface.

Subcommands ``verify``, ``solve``, ``order`` and ``basins`` each print a JSON
report ``{command, inputs, results, diagnostics[, error]}`` on stdout.

Exit codes: 0 success, 1 verification failed, 2 usage or parse error,
3 numerical error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import NumericalError, ParseError
from .harmonic import HarmonicMap
from .iteration import (IterationOptions, StepKind, Window, convergence_ratios,
                        estimate_order, find_zeros, iterate)
from .numdiff import (DEFAULT_DEGREE, DEFAULT_RADIUS, verify_halley_identities,
                      verify_newton_identities)
from .parser import parse_complex, parse_expression
from .render import render_basins, write_ppm, write_stats_csv
from .report import dumps, identity_report_json, trace_json
from .schwarzian import harmonic_operators

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

METHODS = {k.value: k for k in StepKind}


class UsageError(Exception):
    pass


def _window(text: str) -> Window:
    try:
        x0, y0, x1, y1 = (float(p) for p in text.split(","))
        return Window(x0, y0, x1, y1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad window {text!r}: expected X0,Y0,X1,Y1 with X0<X1, Y0<Y1") from exc


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(p) for p in text.lower().split("x"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size {text!r}: expected WxH") from exc
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("image size must be positive")
    return w, h


def _complex(text: str) -> complex:
    try:
        return parse_complex(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="harmroot",
        description="Newton/Halley iterations and Schwarzian derivatives for harmonic maps f = h + conj(g).",
        epilog="Values may start with '-': --g -z and --window -2,-2,2,2 both work.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--h", required=True, metavar="EXPR", help="analytic part h(z)")
        sp.add_argument("--g", default="0", metavar="EXPR", help="co-analytic part g(z) (default 0)")

    def iteration_opts(sp):
        sp.add_argument("--max-iter", type=int, default=64)
        sp.add_argument("--residual-tol", type=float, default=1e-12)

    v = sub.add_parser("verify", help="check the fixed-point identities at a zero")
    common(v)
    v.add_argument("--zero", type=_complex, required=True, metavar="COMPLEX")
    v.add_argument("--radius", type=float, default=DEFAULT_RADIUS)
    v.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    v.add_argument("--which", choices=("newton", "halley", "both"), default="both")

    s = sub.add_parser("solve", help="find zeros in a window by multi-start iteration")
    common(s)
    s.add_argument("--window", type=_window, required=True, metavar="X0,Y0,X1,Y1")
    s.add_argument("--grid", type=int, default=40)
    s.add_argument("--method", choices=tuple(METHODS), default="hnewton")
    iteration_opts(s)

    o = sub.add_parser("order", help="iterate from a start and estimate the convergence order")
    common(o)
    o.add_argument("--start", type=_complex, required=True, metavar="COMPLEX")
    o.add_argument("--root", type=_complex, required=True, metavar="COMPLEX")
    o.add_argument("--method", choices=tuple(METHODS), required=True)
    iteration_opts(o)

    b = sub.add_parser("basins", help="render a basin-of-attraction PPM image")
    common(b)
    b.add_argument("--window", type=_window, required=True, metavar="X0,Y0,X1,Y1")
    b.add_argument("--size", type=_size, required=True, metavar="WxH")
    b.add_argument("--method", choices=tuple(METHODS), required=True)
    b.add_argument("--grid", type=int, default=40, help="multi-start grid for the canonical roots")
    b.add_argument("--out", required=True, metavar="FILE.ppm")
    b.add_argument("--stats", metavar="FILE.csv")
    iteration_opts(b)
    return p


def _map(args) -> HarmonicMap:
    return HarmonicMap(parse_expression(args.h), parse_expression(args.g))


def _opts(args) -> IterationOptions:
    try:
        return IterationOptions(residual_tol=args.residual_tol, max_iter=args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _window_json(w: Window) -> list:
    return [w.x0, w.y0, w.x1, w.y1]


def cmd_verify(args, report) -> int:
    f = _map(args)
    report["inputs"].update(zero=args.zero, radius=args.radius, degree=args.degree,
                            which=args.which)
    results = report["results"]
    ok = True
    if args.which in ("newton", "both"):
        rep = verify_newton_identities(f, args.zero, args.radius, args.degree)
        results["newton"] = identity_report_json(rep)
        ok &= rep.passed
    if args.which in ("halley", "both"):
        rep = verify_halley_identities(f, args.zero, args.radius, args.degree)
        results["halley"] = identity_report_json(rep)
        ok &= rep.passed
    ph, sh = harmonic_operators(f, args.zero)
    results["operators"] = {"P_H": ph.value, "S_H": sh.value, "conjugated": ph.conjugated}
    results["passed"] = bool(ok)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_solve(args, report) -> int:
    f = _map(args)
    kind = METHODS[args.method]
    opts = _opts(args)
    report["inputs"].update(window=_window_json(args.window), grid=args.grid,
                            method=args.method, max_iter=opts.max_iter,
                            residual_tol=opts.residual_tol)
    zeros = find_zeros(f, kind, args.window, args.grid, opts)
    report["results"].update(count=len(zeros), zeros=zeros)
    report["diagnostics"]["residuals"] = [abs(f(z)) for z in zeros]
    return EXIT_OK


def cmd_order(args, report) -> int:
    f = _map(args)
    kind = METHODS[args.method]
    opts = _opts(args)
    report["inputs"].update(start=args.start, root=args.root, method=args.method,
                            max_iter=opts.max_iter, residual_tol=opts.residual_tol)
    trace = iterate(f, kind, args.start, opts)
    report["results"].update(order=estimate_order(trace, args.root),
                             ratios=convergence_ratios(trace, args.root),
                             errors=[abs(z - args.root) for z in trace.iterates],
                             trace=trace_json(trace))
    return EXIT_OK


def cmd_basins(args, report) -> int:
    f = _map(args)
    kind = METHODS[args.method]
    opts = _opts(args)
    width, height = args.size
    report["inputs"].update(window=_window_json(args.window), size=[width, height],
                            method=args.method, max_iter=opts.max_iter, grid=args.grid,
                            out=args.out, stats=args.stats)
    image = render_basins(f, kind, args.window, width, height, opts, grid_n=args.grid)
    write_ppm(image, args.out)
    if args.stats:
        write_stats_csv(image, args.stats)
    report["results"].update(
        roots=image.roots[:image.n_canonical],
        extra_roots=image.roots[image.n_canonical:],
        root_stats=image.root_stats(),
    )
    report["diagnostics"].update(image.status_counts)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "solve": cmd_solve, "order": cmd_order,
            "basins": cmd_basins}


# options whose values may legitimately start with '-' ("-z", "-1-2i", "-2,-2,2,2")
VALUE_FLAGS = ("--h", "--g", "--zero", "--start", "--root", "--window")


def _attach_values(argv: list[str]) -> list[str]:
    """Rewrite ``--g -z`` as ``--g=-z`` so argparse does not read ``-z`` as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and argv[i + 1] not in ("-h", "--help") and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_values(list(argv)))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    report = {
        "command": args.command,
        "inputs": {"h": args.h, "g": args.g},
        "results": {},
        "diagnostics": {},
    }
    try:
        code = COMMANDS[args.command](args, report)
    except (ParseError, UsageError, ValueError) as exc:
        code = EXIT_USAGE
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        print(f"harmroot: error: {exc}", file=sys.stderr)
    except (NumericalError, ZeroDivisionError) as exc:
        code = EXIT_NUMERICAL
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        print(f"harmroot: numerical error: {exc}", file=sys.stderr)
    print(dumps(report))
    return code


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
