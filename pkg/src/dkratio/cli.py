"""Command-line front end.

Subcommands: eval, sum, coeff, characters, table, error-curve, verify.
Exit codes: 0 success, 1 domain/usage error, 2 resource error,
3 verification failure.  Exact rationals print as num/den; floats print
with 17 significant digits so every emitted value round-trips.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import __version__, characters, euler, experiments, sieve, verify
from .arith import factorize
from .divisors import D_k, DivisorParams, d_k, d_star, g_k
from .errors import DkratioError, DomainError, ResourceError
from .sieve import EngineConfig

OUTPUT_DIR_ENV = "DKRATIO_OUTPUT_DIR"


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _int_arg(text: str) -> int:
    # accept both 1000000 and 1e6 spellings
    try:
        return int(text)
    except ValueError:
        return int(float(text))


def _grid_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(_int_arg(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid: {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("plain", "csv", "json"), default="plain",
        help="output format (default plain)",
    )
    common.add_argument(
        "--prime-limit", type=_int_arg, default=10**6,
        help="Euler-product truncation prime (default 1e6)",
    )
    common.add_argument(
        "--epsilon", type=float, default=0.05,
        help="exponent slack in residual normalization (default 0.05)",
    )
    common.add_argument(
        "--segment-size", type=_int_arg, default=2**22,
        help="sieve segment length (default 2^22)",
    )
    common.add_argument(
        "--workers", type=int, default=None,
        help="worker count (default: available parallelism)",
    )
    common.add_argument(
        "--output", default=None, metavar="DIR",
        help=f"directory for CSV artifacts (default ${OUTPUT_DIR_ENV})",
    )

    parser = _Parser(
        prog="dkratio",
        description=(
            "Exact and asymptotic analysis of D_k(n) = d_k(n)/k^omega(n)"
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate d_k, d_k*, D_k, g_k at one integer")
    p.add_argument("n", type=_int_arg)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("sum", parents=[common],
                       help="full / coprime / progression partial sums")
    p.add_argument("--x", type=_int_arg, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=_int_arg, default=None)
    p.add_argument("--a", type=_int_arg, default=None)

    p = sub.add_parser("coeff", parents=[common],
                       help="A_k, G_k(q) and G_k(q)/phi(q) with tail bound")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=_int_arg, default=1)

    p = sub.add_parser("characters", parents=[common],
                       help="character table mod q")
    p.add_argument("--q", type=_int_arg, required=True)

    p = sub.add_parser("table", parents=[common],
                       help="reproduction report for the a or g reference table")
    p.add_argument("which", choices=("a", "g"))

    p = sub.add_parser("error-curve", parents=[common],
                       help="residuals against the asymptotic main term")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=_int_arg, default=1)
    p.add_argument("--a", type=_int_arg, default=None)
    p.add_argument("--grid", type=_grid_arg,
                   default=experiments.DEFAULT_X_GRID)
    p.add_argument("--mode", choices=("full", "coprime", "progression"),
                   default="progression")

    p = sub.add_parser("verify", parents=[common],
                       help="run the full acceptance matrix")
    p.add_argument("--only", type=_grid_arg, default=None,
                   help="comma-separated criterion indices to run")

    return parser


def _config(args) -> EngineConfig:
    return EngineConfig(
        segment_size=args.segment_size,
        workers=args.workers,
        prime_limit=args.prime_limit,
        epsilon=args.epsilon,
    )


def _emit(args, text: str, csv_name: Optional[str] = None) -> None:
    """Print text, or write it into the output directory when one is set."""
    out_dir = args.output or os.environ.get(OUTPUT_DIR_ENV)
    if out_dir and csv_name and args.format == "csv":
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, csv_name)
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_eval(args) -> int:
    f = factorize(args.n)
    params = DivisorParams(args.k)
    dk = d_k(f, params)
    ds = d_star(f, params)
    ratio = D_k(f, params)
    kernel = g_k(f, params)
    if args.format == "plain":
        _emit(args, f"d_k={dk} d_k*={ds} D_k={ratio} g_k={kernel}")
    elif args.format == "csv":
        text = "n,k,d_k,d_k_star,D_k,g_k\n"
        text += f"{args.n},{args.k},{dk},{ds},{ratio},{kernel}\n"
        _emit(args, text, csv_name=f"eval_{args.n}_{args.k}.csv")
    else:
        _emit(args, json.dumps({
            "n": args.n, "k": args.k, "d_k": dk, "d_k_star": ds,
            "D_k": str(ratio), "g_k": str(kernel),
        }))
    return 0


def _cmd_sum(args) -> int:
    config = _config(args)
    if args.a is not None:
        if args.q is None:
            raise DomainError("--a requires --q")
        result = sieve.sum_progression(args.x, args.k, args.q, args.a, config)
    elif args.q is not None:
        result = sieve.sum_coprime(args.x, args.k, args.q, config)
    else:
        result = sieve.sum_full(args.x, args.k, config)
    req = result.request
    exact = str(result.exact) if result.exact is not None else ""
    if args.format == "plain":
        lines = [
            f"mode={req.mode} x={req.x} k={req.k}"
            + (f" q={req.q}" if req.q else "")
            + (f" a={req.a}" if req.a else ""),
            f"exact={exact if exact else '(overflow: float fallback)'}",
            f"approx={_fmt(result.approx)}",
            f"main_term={_fmt(result.main_term)}",
            f"residual={_fmt(result.residual)}",
        ]
        _emit(args, "\n".join(lines))
    elif args.format == "csv":
        text = "mode,x,k,q,a,exact,approx,main_term,residual\n"
        text += (
            f"{req.mode},{req.x},{req.k},"
            f"{req.q if req.q is not None else ''},"
            f"{req.a if req.a is not None else ''},"
            f"{exact},{_fmt(result.approx)},{_fmt(result.main_term)},"
            f"{_fmt(result.residual)}\n"
        )
        _emit(args, text, csv_name=f"sum_{req.mode}_{req.x}_{req.k}.csv")
    else:
        _emit(args, json.dumps({
            "mode": req.mode, "x": req.x, "k": req.k, "q": req.q, "a": req.a,
            "exact": exact or None, "approx": result.approx,
            "approx_error": result.approx_error,
            "main_term": result.main_term, "residual": result.residual,
        }))
    return 0


def _cmd_coeff(args) -> int:
    a_val = euler.compute_A_k(args.k, args.prime_limit)
    g_val = euler.compute_G_k(args.q, args.k, args.prime_limit)
    coef = euler.ap_leading_coefficient(args.q, args.k, args.prime_limit)
    if args.format == "plain":
        _emit(args, "\n".join([
            f"k={args.k} q={args.q} prime_limit={args.prime_limit}",
            f"A_k={_fmt(a_val.value)}",
            f"G_k(q)={_fmt(g_val.value)}",
            f"G_k(q)/phi(q)={_fmt(coef)}",
            f"tail_bound={_fmt(a_val.tail_bound)}",
        ]))
    elif args.format == "csv":
        text = "k,q,A_k,G_k,ap_coefficient,prime_limit,tail_bound\n"
        text += (
            f"{args.k},{args.q},{_fmt(a_val.value)},{_fmt(g_val.value)},"
            f"{_fmt(coef)},{args.prime_limit},{_fmt(a_val.tail_bound)}\n"
        )
        _emit(args, text, csv_name=f"coeff_{args.k}_{args.q}.csv")
    else:
        _emit(args, json.dumps({
            "k": args.k, "q": args.q, "A_k": a_val.value, "G_k": g_val.value,
            "ap_coefficient": coef, "prime_limit": args.prime_limit,
            "tail_bound": a_val.tail_bound,
        }))
    return 0


def _cmd_characters(args) -> int:
    group = characters.character_group(args.q)
    rows = []
    for chi in group.characters:
        for n in range(1, args.q + 1):
            v = chi(n)
            rows.append((chi.index, n, v.real, v.imag))
    if args.format == "json":
        _emit(args, json.dumps([
            {"char_index": c, "n": n, "value_re": re, "value_im": im}
            for c, n, re, im in rows
        ]))
    else:
        text = "char_index,n,value_re,value_im\n"
        for c, n, re, im in rows:
            text += f"{c},{n},{_fmt(re)},{_fmt(im)}\n"
        _emit(args, text, csv_name=f"characters_{args.q}.csv")
    return 0


def _cmd_table(args) -> int:
    if args.which == "a":
        report = experiments.reproduce_A_table(args.prime_limit)
    else:
        report = experiments.reproduce_G_table(args.prime_limit)
    text = experiments.report_to_string(report)
    if args.format == "json":
        _emit(args, json.dumps({
            "prime_limit": report.prime_limit,
            "tolerance": report.tolerance,
            "max_abs_diff": report.max_abs_diff,
            "all_within": report.all_within,
            "rows": report.rows,
        }))
    elif args.format == "csv":
        _emit(args, text, csv_name=report.csv_name())
    else:
        summary = (
            f"# max_abs_diff={_fmt(report.max_abs_diff)} "
            f"all_within_tolerance={report.all_within}\n"
        )
        _emit(args, text + summary)
    return 0


def _cmd_error_curve(args) -> int:
    config = _config(args)
    curve = experiments.error_curve(
        args.k, args.q, args.a, args.grid, args.mode, config
    )
    fit = experiments.fit_error_exponent(curve)
    text = experiments.report_to_string(curve)
    if args.format == "json":
        _emit(args, json.dumps({
            "k": curve.k, "q": curve.q, "a": curve.a, "mode": curve.mode,
            "epsilon": curve.epsilon, "rows": curve.rows,
            "fit": {"slope": fit.slope, "intercept": fit.intercept,
                    "r_squared": fit.r_squared,
                    "points_used": fit.points_used},
        }))
    elif args.format == "csv":
        _emit(args, text, csv_name=curve.csv_name())
    else:
        _emit(args, text + (
            f"# slope={_fmt(fit.slope)} r_squared={_fmt(fit.r_squared)} "
            f"points_used={fit.points_used}\n"
        ))
    return 0


def _cmd_verify(args) -> int:
    config = _config(args)
    results = verify.run_verification(only=args.only, config=config)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(
        f"verification: {len(results) - len(failed)}/{len(results)} criteria passed"
    )
    return 3 if failed else 0


_COMMANDS = {
    "eval": _cmd_eval,
    "sum": _cmd_sum,
    "coeff": _cmd_coeff,
    "characters": _cmd_characters,
    "table": _cmd_table,
    "error-curve": _cmd_error_curve,
    "verify": _cmd_verify,
}


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 2
    except DkratioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
