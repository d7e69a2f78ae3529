"""Command-line front end.

Subcommands:

* ``integrate``   -- one adaptive integration of an expression
* ``check``       -- convexity evidence for an expression on an interval
* ``experiment1`` -- the 1/x tolerance-sweep table
* ``experiment2`` -- the exp interval-sweep table

Exit codes: 0 success, 1 expression parse error, 2 invalid values or a
domain error during evaluation, 3 iteration budget exceeded.  The default
precision is ``double`` for integrate/check and ``dd`` for the experiment
commands; the QUINTIQ_PRECISION environment variable overrides either and
the --precision flag wins over both.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import expr as expr_mod
from .adaptive import (
    AdaptiveResult,
    BudgetExceeded,
    SearchStrategy,
    integrate_adaptive,
    integrate_adaptive_cubic,
)
from .convexity import ConvexityReport, check_n_convexity, sixth_derivative_sign
from .experiments import SKIP_MARKER, ExperimentRow, experiment1, experiment2
from .expr import DomainError, ExprSyntaxError, NotDifferentiable
from .rules import IntegrandError, Interval
from .scalars import parse_precision

_STRATEGIES = {
    "linear": SearchStrategy.LINEAR_MINIMAL,
    "doubling": SearchStrategy.DOUBLING_BISECT,
}

EXIT_OK = 0
EXIT_PARSE_ERROR = 1
EXIT_DOMAIN_ERROR = 2
EXIT_BUDGET_EXCEEDED = 3


@dataclass
class RunConfig:
    command: str
    fn_text: str | None
    a: str | None
    b: str | None
    eps: str | None
    method: str
    strategy: str
    precision: str
    output: str
    n_max: int

    def as_dict(self) -> dict:
        d = {"command": self.command}
        if self.fn_text is not None:
            d.update(fn=self.fn_text, a=self.a, b=self.b)
        if self.eps is not None:
            d["eps"] = self.eps
        if self.command == "integrate":
            d.update(method=self.method, strategy=self.strategy, n_max=self.n_max)
        d.update(precision=self.precision, output=self.output)
        return d


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quintiq",
        description="Adaptive Gauss/Lobatto quadrature for 5-convex integrands.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_fn_args(p):
        p.add_argument("--fn", required=True, help="integrand expression, e.g. '1/x'")
        p.add_argument("--a", required=True, help="left endpoint")
        p.add_argument("--b", required=True, help="right endpoint")

    def add_common(p, default_output="human"):
        p.add_argument("--precision", default=None, help="double, dd, or mp[:digits]")
        p.add_argument(
            "--output", choices=("human", "json", "csv"), default=default_output
        )

    p_int = sub.add_parser("integrate", help="adaptively integrate an expression")
    add_fn_args(p_int)
    p_int.add_argument("--eps", default="1e-8", help="target accuracy (default 1e-8)")
    p_int.add_argument("--method", choices=("quintic", "cubic"), default="quintic")
    p_int.add_argument("--strategy", choices=("linear", "doubling"), default="linear")
    p_int.add_argument("--n-max", type=int, default=10**6, dest="n_max")
    p_int.add_argument(
        "--verify-convexity",
        action="store_true",
        help="annotate the result with sampled convexity evidence",
    )
    add_common(p_int)

    p_chk = sub.add_parser("check", help="sampled convexity evidence for an expression")
    add_fn_args(p_chk)
    p_chk.add_argument("--order", type=int, default=5)
    p_chk.add_argument("--samples", type=int, default=200)
    p_chk.add_argument("--seed", type=int, default=1)
    p_chk.add_argument("--grid", type=int, default=1024)
    add_common(p_chk)

    for name, blurb in (
        ("experiment1", "subdivision counts for 1/x on [1,2], eps = 1e-1..1e-16"),
        ("experiment2", "subdivision counts for exp on [0,b], b = 1..10, eps = 1e-8"),
    ):
        p_exp = sub.add_parser(name, help=blurb)
        add_common(p_exp, default_output="human")
    return parser


def _resolve_precision(flag_value: str | None, command: str):
    spec = flag_value or os.environ.get("QUINTIQ_PRECISION")
    if spec is None:
        spec = "dd" if command.startswith("experiment") else "double"
    return parse_precision(spec), spec


def _parse_interval(ctx, a_text: str, b_text: str) -> Interval:
    try:
        a = ctx.const(a_text)
        b = ctx.const(b_text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid interval endpoint: {exc}") from exc
    return Interval(a, b)


def _decimal(ctx, x) -> str:
    return ctx.to_decimal(x)


def _result_payload(result: AdaptiveResult, ctx, precision: str, config: RunConfig) -> dict:
    return {
        "method": result.method.value,
        "value": _decimal(ctx, result.value),
        "n_final": result.n_final,
        "gap_final": _decimal(ctx, result.gap_final),
        "epsilon": config.eps,
        "evaluations": result.evaluations,
        "history": [[n, _decimal(ctx, gap)] for n, gap in result.history],
        "precision": precision,
        "config": config.as_dict(),
    }


def _report_payload(report: ConvexityReport) -> dict:
    return {
        "order": report.order,
        "samples_tested": report.samples_tested,
        "min_divided_difference": report.min_divided_difference,
        "witness": list(report.witness),
        "max_divided_difference": report.max_divided_difference,
        "max_witness": list(report.max_witness),
        "verdict": report.verdict.value,
    }


def _cmd_integrate(args) -> int:
    ctx, precision = _resolve_precision(args.precision, "integrate")
    config = RunConfig(
        "integrate", args.fn, args.a, args.b, args.eps,
        args.method, args.strategy, precision, args.output, args.n_max,
    )
    tree = expr_mod.parse(args.fn)
    iv = _parse_interval(ctx, args.a, args.b)
    f = expr_mod.as_integrand(tree, ctx)
    runner = integrate_adaptive if args.method == "quintic" else integrate_adaptive_cubic
    result = runner(f, iv, args.eps, _STRATEGIES[args.strategy], args.n_max, ctx)

    payload = _result_payload(result, ctx, precision, config)
    if args.verify_convexity:
        order = 5 if args.method == "quintic" else 3
        report = check_n_convexity(f, iv, order, samples=200, seed=1, ctx=ctx)
        payload["convexity"] = _report_payload(report)
        if report.verdict.value == "violated":
            print(
                f"warning: sampled order-{order} divided differences change sign; "
                "the error guarantee does not apply",
                file=sys.stderr,
            )

    out = sys.stdout
    if args.output == "json":
        json.dump(payload, out, indent=2)
        out.write("\n")
    elif args.output == "csv":
        out.write("value,n_final,gap_final,epsilon,evaluations,method,precision\n")
        out.write(
            f"{payload['value']},{payload['n_final']},{payload['gap_final']},"
            f"{payload['epsilon']},{payload['evaluations']},{payload['method']},{precision}\n"
        )
    else:
        out.write(f"method      {payload['method']}\n")
        out.write(f"precision   {precision}\n")
        out.write(f"value       {payload['value']}\n")
        out.write(f"n           {payload['n_final']}\n")
        out.write(f"gap         {payload['gap_final']}\n")
        out.write(f"epsilon     {payload['epsilon']}\n")
        out.write(f"evaluations {payload['evaluations']}\n")
        if "convexity" in payload:
            c = payload["convexity"]
            out.write(f"convexity   {c['verdict']} (order {c['order']}, {c['samples_tested']} samples)\n")
    return EXIT_OK


def _cmd_check(args) -> int:
    ctx, precision = _resolve_precision(args.precision, "check")
    config = RunConfig(
        "check", args.fn, args.a, args.b, None, "quintic", "linear", precision, args.output, 0
    )
    tree = expr_mod.parse(args.fn)
    iv = _parse_interval(ctx, args.a, args.b)
    f = expr_mod.as_integrand(tree, ctx)
    sampled = check_n_convexity(f, iv, args.order, args.samples, args.seed, ctx=ctx)
    derivative = None
    derivative_note = None
    if args.order == 5:
        try:
            derivative = sixth_derivative_sign(tree, iv, args.grid, ctx=ctx)
        except NotDifferentiable as exc:
            derivative_note = str(exc)

    payload = {
        "sampled": _report_payload(sampled),
        "sixth_derivative": _report_payload(derivative) if derivative else None,
        "precision": precision,
        "config": config.as_dict(),
    }
    if derivative_note:
        payload["sixth_derivative_note"] = derivative_note

    if args.output == "json":
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif args.output == "csv":
        sys.stdout.write("check,order,samples,verdict,min,max\n")
        s = payload["sampled"]
        sys.stdout.write(
            f"sampled,{s['order']},{s['samples_tested']},{s['verdict']},"
            f"{s['min_divided_difference']!r},{s['max_divided_difference']!r}\n"
        )
        if derivative:
            d = payload["sixth_derivative"]
            sys.stdout.write(
                f"sixth-derivative,{d['order']},{d['samples_tested']},{d['verdict']},"
                f"{d['min_divided_difference']!r},{d['max_divided_difference']!r}\n"
            )
    else:
        s = payload["sampled"]
        sys.stdout.write(
            f"sampled order-{s['order']} divided differences ({s['samples_tested']} tuples): "
            f"{s['verdict']}\n"
        )
        sys.stdout.write(
            f"  min {s['min_divided_difference']:.6g} at {tuple(round(p, 6) for p in s['witness'])}\n"
        )
        sys.stdout.write(
            f"  max {s['max_divided_difference']:.6g} at {tuple(round(p, 6) for p in s['max_witness'])}\n"
        )
        if derivative:
            d = payload["sixth_derivative"]
            sys.stdout.write(
                f"sixth derivative on a {d['samples_tested']}-point grid: {d['verdict']}\n"
            )
            sys.stdout.write(
                f"  min {d['min_divided_difference']:.6g} at x = {d['witness'][0]:.6g}, "
                f"max {d['max_divided_difference']:.6g} at x = {d['max_witness'][0]:.6g}\n"
            )
        elif derivative_note:
            sys.stdout.write(f"sixth derivative: unavailable ({derivative_note})\n")
    return EXIT_OK


def _render_experiment(rows: list[ExperimentRow], first_column: str, args, precision: str) -> int:
    def cell(n):
        return SKIP_MARKER if n is None else str(n)

    if args.output == "json":
        payload = {
            "precision": precision,
            "rows": [
                {first_column: r.label, "n_quintic": r.n_quintic, "n_cubic": r.n_cubic}
                for r in rows
            ],
        }
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif args.output == "csv":
        sys.stdout.write(f"{first_column},n_quintic,n_cubic\n")
        for r in rows:
            sys.stdout.write(f"{r.label},{cell(r.n_quintic)},{cell(r.n_cubic)}\n")
    else:
        width = max(len(first_column), max(len(r.label) for r in rows))
        sys.stdout.write(f"{first_column:<{width}}  n_quintic  n_cubic\n")
        for r in rows:
            sys.stdout.write(f"{r.label:<{width}}  {cell(r.n_quintic):>9}  {cell(r.n_cubic):>7}\n")
    return EXIT_OK


def _cmd_experiment(args, which: int) -> int:
    ctx, precision = _resolve_precision(args.precision, f"experiment{which}")
    if which == 1:
        return _render_experiment(experiment1(ctx), "epsilon", args, precision)
    return _render_experiment(experiment2(ctx), "b", args, precision)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "integrate":
            return _cmd_integrate(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "experiment1":
            return _cmd_experiment(args, 1)
        return _cmd_experiment(args, 2)
    except ExprSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET_EXCEEDED
    except (DomainError, IntegrandError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except (ValueError, NotDifferentiable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
