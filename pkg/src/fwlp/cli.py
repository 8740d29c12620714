"""Command-line driver.

    fwlp solve --algo {fwlp|fwlp-p}
               (--input FILE.mps | --generate seed,m,n,density)
               [--xi R] [--eta R] [--max-iters N] [--screening on|off]
               [--trace OUT.csv] [--trace-every N] [--tol T]
               [--refresh-period N]

Exit codes: 0 when the stopping tolerance was reached, 2 when the
iteration budget ran out first, 1 on any input or usage error.
"""
from __future__ import annotations

import argparse
import sys

from fwlp.generate import generate_instance
from fwlp.model import LpError, SolverParams, validate
from fwlp.mps import parse_mps, to_standard_form
from fwlp.solver_fwlp import run_fwlp
from fwlp.solver_fwlpp import run_fwlpp
from fwlp.trace import TraceRow, write_trace_csv


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fwlp", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="run a solver on one problem")
    solve.add_argument("--algo", required=True, choices=("fwlp", "fwlp-p"))
    src = solve.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="MPS file (subset; see docs)")
    src.add_argument("--generate", metavar="SEED,M,N,DENSITY",
                     help="random instance with known optimum")
    solve.add_argument("--xi", type=float,
                       help="primal radius; required with --input")
    solve.add_argument("--eta", type=float,
                       help="dual radius; required with --input")
    solve.add_argument("--max-iters", type=int, default=100_000)
    solve.add_argument("--screening", choices=("on", "off"), default="off")
    solve.add_argument("--trace", help="write trace CSV here")
    solve.add_argument("--trace-every", type=int, default=100)
    solve.add_argument("--tol", type=float, default=1e-4)
    solve.add_argument("--refresh-period", type=int, default=1000)
    return parser


def _parse_generate(spec: str):
    parts = spec.split(",")
    if len(parts) != 4:
        raise _UsageError(f"--generate needs SEED,M,N,DENSITY, got {spec!r}")
    try:
        return int(parts[0]), int(parts[1]), int(parts[2]), float(parts[3])
    except ValueError:
        raise _UsageError(f"cannot parse --generate {spec!r}") from None


def _solve(args) -> int:
    if args.input is not None:
        if args.xi is None or args.eta is None:
            raise _UsageError("--input requires explicit --xi and --eta "
                              "(no known optimum to derive radii from)")
        with open(args.input) as fh:
            text = fh.read()
        problem, _mapping = to_standard_form(parse_mps(text))
        xi, eta = args.xi, args.eta
    else:
        seed, m, n, density = _parse_generate(args.generate)
        inst = generate_instance(seed, m, n, density)
        problem = inst.problem
        xi = args.xi if args.xi is not None else inst.xi_min
        eta = args.eta if args.eta is not None else inst.eta_min
        print(f"generated instance: m={m} n={n} density={density} "
              f"xi={xi:.6g} eta={eta:.6g}")

    validate(problem)
    params = SolverParams(xi=xi, eta=eta, max_iters=args.max_iters,
                          refresh_period=args.refresh_period,
                          screening_enabled=args.screening == "on",
                          trace_every=args.trace_every, tol=args.tol)
    run = run_fwlpp if args.algo == "fwlp-p" else run_fwlp
    result = run(problem, params)

    if args.trace:
        rows = [TraceRow.from_record(rec, t)
                for (_, rec), t in zip(result.trace, result.wall_times_ns)]
        write_trace_csv(args.trace, rows)

    final = result.trace[-1][1]
    status = "tolerance reached" if result.converged \
        else "iteration budget exhausted"
    print(f"algo={args.algo} iterations={result.iterations} status={status}")
    print(f"primal_infeas={final.primal_infeas:.6e} "
          f"dual_infeas={final.dual_infeas:.6e} gap={final.gap:.6e}")
    print(f"U={final.U:.6e} M={final.M:.6e} "
          f"column_touches={final.touch_count}")
    return 0 if result.converged else 2


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _solve(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (LpError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
