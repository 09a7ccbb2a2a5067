"""Command-line front end: solve, bench, basins, list.

Exit codes: 0 success, 1 bad flags or names, 2 step failure at x0,
3 I/O failure.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import basins
from .bench import run_bench
from .methods import NEEDS_SECOND_DERIVATIVE, MethodKind, MethodSpec, method_kind
from .numerics import PrecisionConfig, scalar_from_decimal
from .problems import BASIN_NAMES, BUILTIN_NAMES, builtin
from .solver import STEP_FAILURE, SolverConfig, solve, trace_to_csv

EXIT_OK, EXIT_USAGE, EXIT_STEP_FAILURE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _method_spec(args) -> MethodSpec:
    try:
        return MethodSpec(method_kind(args.method), gamma=args.gamma, dong_sign=args.dong_sign)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_method_flags(sp, required=True):
    sp.add_argument("--method", required=required, help="mns, ns, schroder, osada, dong, chun")
    sp.add_argument("--gamma", default="-1", help="Chun's parameter (default -1)")
    sp.add_argument("--dong-sign", choices=("minus", "plus"), default="minus")


def cmd_solve(args) -> int:
    cfg = PrecisionConfig(args.digits)
    spec = _method_spec(args)
    try:
        p = builtin(args.problem, cfg)
        x0 = scalar_from_decimal(args.x0, cfg)
    except (KeyError, ValueError) as exc:
        raise UsageError(exc.args[0] if exc.args else str(exc)) from None
    if p.known_roots_complex and p.known_root is None:
        raise UsageError(f"{p.name} is a complex basin problem; use the basins command")
    try:
        t = solve(p, spec, x0, SolverConfig(max_iterations=args.max_iter, precision=cfg),
                  fixed_steps=args.fixed_steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(trace_to_csv(t))
    _log(f"termination={t.termination}" + (f" ({t.failure})" if t.failure else "")
         + f" iterations={len(t) - 1}")
    if t.termination == STEP_FAILURE and len(t) == 1:
        return EXIT_STEP_FAILURE
    return EXIT_OK


def cmd_bench(args) -> int:
    report = run_bench(args.digits)
    text = report.to_markdown() if args.format == "md" else report.to_csv()
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            _log(f"cannot write {args.out}: {exc}")
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_basins(args) -> int:
    spec = _method_spec(args)
    p = builtin(args.problem)
    try:
        cfg = basins.BasinConfig(
            re_min=args.bounds[0], re_max=args.bounds[1],
            im_min=args.bounds[2], im_max=args.bounds[3],
            width=args.size[0], height=args.size[1],
            max_iterations=args.max_iter, attract_tolerance=args.tol,
            roots=p.known_roots_complex,
        )
        grid = basins.render(p, spec, cfg, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        basins.write_image(grid, basins.DEFAULT_PALETTE, args.out, shade=args.shade)
    except OSError as exc:
        _log(f"cannot write {args.out}: {exc}")
        return EXIT_IO
    if args.stats:
        sys.stdout.write(basins.stats(grid).to_text())
    return EXIT_OK


def cmd_list(args) -> int:
    cfg = PrecisionConfig(30)
    print("problems:")
    for name in BUILTIN_NAMES:
        p = builtin(name, cfg)
        if p.known_root is not None:
            root = cfg.ctx.nstr(p.known_root, 20)
        else:
            root = ", ".join(f"{z:.6g}".strip("()") for z in p.known_roots_complex)
        print(f"  {name}  {p.formula}  m={p.multiplicity}  root {root}")
    print("methods:")
    for kind in MethodKind:
        need = "f''" if kind in NEEDS_SECOND_DERIVATIVE else "f'"
        print(f"  {kind.value} requires {need}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multiroot", description="Multiple-root iterations, benchmarks and basins.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("solve", help="iterate one method and print the trace as CSV")
    sp.add_argument("--problem", required=True, choices=BUILTIN_NAMES)
    _add_method_flags(sp)
    sp.add_argument("--x0", required=True)
    sp.add_argument("--digits", type=int, default=100)
    sp.add_argument("--max-iter", type=int, default=50)
    sp.add_argument("--fixed-steps", type=int)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bench", help="reproduce the error/COC/ACOC table")
    sp.add_argument("--digits", type=int, default=100)
    sp.add_argument("--format", choices=("md", "csv"), default="md")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("basins", help="render basins of attraction to a PPM file")
    sp.add_argument("--problem", required=True, choices=BASIN_NAMES)
    _add_method_flags(sp)
    sp.add_argument("--size", type=int, nargs=2, metavar=("W", "H"), default=[512, 512])
    sp.add_argument("--bounds", type=float, nargs=4, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"),
                    default=[-3.0, 3.0, -3.0, 3.0])
    sp.add_argument("--max-iter", type=int, default=100)
    sp.add_argument("--tol", type=float, default=1e-3)
    sp.add_argument("--out", required=True)
    sp.add_argument("--stats", action="store_true")
    sp.add_argument("--shade", action="store_true", help="darken pixels by iteration count")
    sp.add_argument("--workers", type=int)
    sp.set_defaults(func=cmd_basins)

    sp = sub.add_parser("list", help="show registered problems and methods")
    sp.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "digits", 100) < 16:
            raise UsageError("--digits must be at least 16")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _log(f"multiroot: error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
