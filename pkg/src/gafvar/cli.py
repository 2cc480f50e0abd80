"""Command-line interface: ``gafvar {exact, mc, asymp, sweep, selftest}``.

Exit codes: 0 success, 1 self-test failure, 2 invalid arguments,
3 quadrature budget exhausted, 4 too many degenerate Monte Carlo samples.
"""

import argparse
import math
import sys

from . import __version__
from .asymptotics import (
    boundary_constant,
    classify_regime,
    var_I_large_L,
    var_I_near_boundary,
)
from .errors import DegenerateSampleError, DomainError, QuadratureBudgetError
from .gaf_mc import truncation_degree, variance_mc
from .geometry import Params
from .report import Table, write_output
from .selftest import CHECKS, run_selftest
from .variance_exact import choose_route, var_E

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_USAGE = 2
EXIT_QUADRATURE = 3
EXIT_DEGENERATE = 4

MIN_SAMPLES = 100
MAX_ABORT_FRACTION = 0.01


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def build_parser():
    common = _Parser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    g.add_argument("--seed", type=int, default=0, help="base seed for random streams")
    g.add_argument("--out", default="-", help="output file, '-' for standard output")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--svg", default=None, help="also write a figure to this SVG file")

    parser = _Parser(prog="gafvar", description="Variance of zero-set volumes of hyperbolic GAFs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", parents=[common], help="variance by quadrature")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--route", choices=("auto", "disk", "polar", "both"), default="auto")

    p = sub.add_parser("mc", parents=[common], help="variance by Monte Carlo simulation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--nodes", type=int, default=2**14)
    p.add_argument("--trunc-tol", type=float, default=1e-6)
    p.add_argument("--M", type=int, default=None, help="truncation degree (overrides --trunc-tol)")
    p.add_argument("--method", choices=("fiber", "pointwise"), default="fiber")
    p.add_argument("--boot", type=int, default=1000, help="bootstrap resamples")
    p.add_argument("--compare", action="store_true", help="add the quadrature value")
    p.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance for --compare")

    p = sub.add_parser("asymp", parents=[common], help="exact value vs asymptotic law")
    p.add_argument("--limit", choices=("L", "r"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=float, default=None, help="fixed L (for --limit r)")
    p.add_argument("--r", type=float, default=None, help="fixed r (for --limit L)")
    p.add_argument("--grid", type=_float_list, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--route", choices=("auto", "disk", "polar"), default="polar")

    p = sub.add_parser("sweep", parents=[common], help="exact variance over a parameter grid")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--L", type=_float_list, required=True)
    p.add_argument("--r", type=_float_list, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--route", choices=("auto", "disk", "polar", "both"), default="auto")

    p = sub.add_parser("selftest", parents=[common], help="run the identity suites")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--perturb", action="append", default=[], choices=sorted(CHECKS), help=argparse.SUPPRESS)
    return parser


def _base_config(args):
    # --threads is left out on purpose: outputs must not depend on it
    return {"command": args.command, "format": args.format}


# exact / sweep


EXACT_COLS = (
    ["n", "L", "r", "tol", "route"],
    ["var_E", "var_I"],
    ["abs_err_est", "n_evals", "rel_gap"],
)


def _exact_rows(table, p, tol, route):
    routes = ("disk", "polar") if route == "both" else ((choose_route(p) if route == "auto" else route),)
    results = [(rt, var_E(p, tol, rt)) for rt in routes]
    gap = None
    if len(results) == 2:
        a, b = results[0][1].value, results[1][1].value
        gap = abs(a - b) / abs(b)
    scale = (1.0 - p.r * p.r) ** (-(2 * p.n - 2))
    for rt, res in results:
        table.add(
            n=p.n, L=p.L, r=p.r, tol=tol, route=rt,
            var_E=res.value, var_I=res.value * scale,
            abs_err_est=res.abs_err_est, n_evals=res.n_evals, rel_gap=gap,
        )


def cmd_exact(args):
    p = Params(args.n, args.L, args.r)
    _positive(args.tol, "--tol")
    table = Table(*EXACT_COLS)
    _exact_rows(table, p, args.tol, args.route)
    config = _base_config(args) | {"n": p.n, "L": p.L, "r": p.r, "tol": args.tol, "route": args.route}
    return table, config


def cmd_sweep(args):
    _positive(args.tol, "--tol")
    table = Table(*EXACT_COLS)
    grid = [Params(n, L, r) for n in args.n for L in args.L for r in args.r]
    for p in grid:
        _exact_rows(table, p, args.tol, args.route)
    config = _base_config(args) | {
        "n": ",".join(map(str, args.n)),
        "L": ",".join(map(repr, args.L)),
        "r": ",".join(map(repr, args.r)),
        "tol": args.tol,
        "route": args.route,
    }
    if args.svg:
        from .plotting import curves_plot

        curves = {}
        for row in table.rows:
            key = f"n={row['n']}, L={row['L']:g}" + (f", {row['route']}" if args.route == "both" else "")
            xs, ys = curves.setdefault(key, ([], []))
            xs.append(row["r"])
            ys.append(row["var_I"])
        curves_plot(curves, args.svg, "r", "Var I", "invariant-volume variance")
    return table, config


# mc


MC_COLS = (
    ["n", "L", "r", "samples", "nodes", "seed", "trunc_tol", "M", "method", "boot"],
    ["var_E", "var_I", "mean_fluct", "var_E_exact", "var_I_exact", "z_score"],
    ["stderr", "stderr_I", "mean_stderr", "imag_residual_max", "n_aborted", "n_resampled", "n_unresolved", "n_roots"],
)


def cmd_mc(args):
    p = Params(args.n, args.L, args.r)
    if args.samples < MIN_SAMPLES:
        raise DomainError(f"--samples must be at least {MIN_SAMPLES}, got {args.samples}")
    if args.nodes < 64:
        raise DomainError("--nodes must be at least 64")
    if args.threads < 1:
        raise DomainError("--threads must be positive")
    _positive(args.trunc_tol, "--trunc-tol")
    M = args.M if args.M is not None else truncation_degree(p, args.trunc_tol)
    if M < 0:
        raise DomainError("--M must be nonnegative")
    est = variance_mc(
        p, M=M, n_samples=args.samples, nodes=args.nodes, seed=args.seed,
        method=args.method, threads=args.threads, n_boot=args.boot,
    )
    if est.n_aborted > MAX_ABORT_FRACTION * args.samples:
        raise DegenerateSampleError(f"{est.n_aborted} of {args.samples} samples were degenerate")
    exact_E = exact_I = z = None
    if args.compare:
        exact_E = var_E(p, args.tol, "auto").value
        exact_I = exact_E * (1.0 - p.r * p.r) ** (-(2 * p.n - 2))
        z = (est.var - exact_E) / est.stderr if est.stderr > 0 else math.inf
    table = Table(*MC_COLS)
    table.add(
        n=p.n, L=p.L, r=p.r, samples=args.samples, nodes=args.nodes, seed=args.seed,
        trunc_tol=args.trunc_tol, M=M, method=args.method, boot=args.boot,
        var_E=est.var, var_I=est.var_I, mean_fluct=est.mean_fluct,
        var_E_exact=exact_E, var_I_exact=exact_I, z_score=z,
        stderr=est.stderr, stderr_I=est.stderr_I, mean_stderr=est.mean_stderr,
        imag_residual_max=est.imag_residual_max, n_aborted=est.n_aborted,
        n_resampled=est.n_resampled, n_unresolved=est.n_fallback, n_roots=est.n_roots,
    )
    config = _base_config(args) | {
        "n": p.n, "L": p.L, "r": p.r, "samples": args.samples, "nodes": args.nodes,
        "seed": args.seed, "trunc_tol": args.trunc_tol, "M": M, "method": args.method,
        "boot": args.boot, "compare": bool(args.compare), "tol": args.tol,
    }
    if args.svg:
        from .plotting import histogram_plot

        histogram_plot(est.fluctuations, args.svg, "E(r) - mean", f"n={p.n}, L={p.L:g}, r={p.r:g}")
    return table, config


# asymp


ASYMP_COLS = (
    ["n", "L", "r", "limit", "regime"],
    ["var_I", "var_I_asymp", "ratio", "scaled", "constant"],
    ["abs_err_est", "n_evals", "route"],
)


def cmd_asymp(args):
    _positive(args.tol, "--tol")
    table = Table(*ASYMP_COLS)
    if args.limit == "L":
        if args.r is None:
            raise DomainError("--limit L needs a fixed --r")
        points = [Params(args.n, L, args.r) for L in args.grid]
    else:
        if args.L is None:
            raise DomainError("--limit r needs a fixed --L")
        points = [Params(args.n, args.L, r) for r in args.grid]
    for p in points:
        route = choose_route(p) if args.route == "auto" else args.route
        res = var_E(p, args.tol, route)
        q = 1.0 - p.r * p.r
        vI = res.value * q ** (-(2 * p.n - 2))
        reg = classify_regime(p)
        if args.limit == "L":
            pred = var_I_large_L(p)
            scaled = vI * p.L ** (p.n - 1.5)
            const = pred * p.L ** (p.n - 1.5)
        else:
            pred = var_I_near_boundary(p)
            scaled = vI * q**reg.exponent
            if reg.has_log_factor:
                scaled /= math.log(1.0 / q)
            const = boundary_constant(p.n, p.L)
        table.add(
            n=p.n, L=p.L, r=p.r, limit=args.limit, regime=reg.tag,
            var_I=vI, var_I_asymp=pred, ratio=vI / pred, scaled=scaled, constant=const,
            abs_err_est=res.abs_err_est * q ** (-(2 * p.n - 2)), n_evals=res.n_evals, route=route,
        )
    config = _base_config(args) | {
        "limit": args.limit, "n": args.n, "L": args.L, "r": args.r,
        "grid": ",".join(map(repr, args.grid)), "tol": args.tol, "route": args.route,
    }
    if args.svg:
        from .plotting import ratio_plot

        x = table.column("L" if args.limit == "L" else "r")
        title = f"n={args.n}, " + (f"r={args.r:g}" if args.limit == "L" else f"L={args.L:g}")
        ratio_plot(x, table.column("ratio"), args.svg, args.limit, title, logx=args.limit == "L")
    return table, config


# selftest


def cmd_selftest(args, stream):
    results = run_selftest(quick=args.quick, perturb=args.perturb)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        stream.write(f"{status}  {r.name:<{width}}  worst={r.worst:.3e}  tol={r.tol:.0e}  {r.detail}\n")
    failed = [r.name for r in results if not r.passed]
    if failed:
        stream.write(f"selftest failed: violated identities: {', '.join(failed)}\n")
        return EXIT_SELFTEST
    stream.write(f"selftest passed ({len(results)} checks)\n")
    return EXIT_OK


def _positive(x, name):
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"{name} must be positive, got {x}")


def config_to_argv(config):
    """Command line that reproduces a run from its embedded ``config`` record."""
    argv = [config["command"]]
    for key, value in config.items():
        if key == "command" or value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        else:
            argv += [flag, repr(value) if isinstance(value, float) else str(value)]
    return argv


COMMANDS = {"exact": cmd_exact, "mc": cmd_mc, "asymp": cmd_asymp, "sweep": cmd_sweep}


def main(argv=None, stdout=None, stderr=None):
    """Entry point; returns the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(stderr)
        stderr.write(f"gafvar: error: {exc}\n")
        return EXIT_USAGE
    try:
        if args.command == "selftest":
            return cmd_selftest(args, stdout)
        table, config = COMMANDS[args.command](args)
        write_output(table, config, args.format, args.out, stream=stdout)
        return EXIT_OK
    except DomainError as exc:
        stderr.write(f"gafvar: invalid arguments: {exc}\n")
        return EXIT_USAGE
    except QuadratureBudgetError as exc:
        stderr.write(f"gafvar: quadrature budget exhausted: {exc}\n")
        return EXIT_QUADRATURE
    except DegenerateSampleError as exc:
        stderr.write(f"gafvar: degenerate Monte Carlo samples: {exc}\n")
        return EXIT_DEGENERATE


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
