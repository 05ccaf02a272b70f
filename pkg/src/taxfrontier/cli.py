"""Command-line interface: ``taxfrontier <command> [options]``.

Results go to stdout (or ``--output``) as CSV with 6 significant digits.
Resolved parameters are echoed first as ``#`` comment lines.  Exit codes:
0 success, 1 failed verification, 2 bad arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import logging
import math
import sys
from typing import Optional, Sequence

from . import __version__
from .budget import balance_linear, balance_two_bracket
from .checks import run_checks
from .distribution import DEFAULT_RTOL, parse_distribution
from .errors import InvalidArgument, NumericFailure
from .frontier import (GridSpec, frontier_linear, frontier_two_bracket, optimal_linear_closed_form,
                       optimize_two_bracket)
from .household import respond_quadratic
from .logmodel import log_balance_closed_form, log_frontier, log_optimize
from .schedule import parse_policy
from .welfare import CSV_COLUMNS, welfare_linear, welfare_two_bracket

BOOL_FLAGS = {"normalized", "table1"}


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{float(x):.6g}"


def _range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number in range {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dist", default="uniform:0:10", help="skill distribution, uniform:<a>:<b>")
    common.add_argument("--quad-rtol", type=float, default=DEFAULT_RTOL,
                        help="relative tolerance of the adaptive quadrature")
    common.add_argument("-o", "--output", default=None, help="write CSV here instead of stdout")
    common.add_argument("--config", default=None, help="flat 'key = value' file; flags win")

    parser = argparse.ArgumentParser(prog="taxfrontier", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        subs[name] = p
        return p

    def grid_opts(p):
        p.add_argument("--beta1-range", type=_range, default="0.01:1.0:0.01")
        p.add_argument("--beta2-range", type=_range, default="0.01:1.0:0.01")
        p.add_argument("--y1-range", type=_range, default="0.01:0.1:0.01")

    p = add("respond", "household optimum for one skill level")
    p.add_argument("--policy", help="linear:<beta> or twobracket:<b1>:<b2>:<y1>")
    p.add_argument("--n", type=float, help="skill level")
    for name, text in (("balance", "budget-balancing subsidy"), ("welfare", "U, sigma_u, V")):
        p = add(name, text)
        p.add_argument("--policy", help="linear:<beta> or twobracket:<b1>:<b2>:<y1>")
        p.add_argument("--c", type=float, default=0.0)
    p = add("frontier-linear", "beta sweep of the linear-tax frontier")
    p.add_argument("--beta-steps", type=int, default=101)
    p.add_argument("--normalized", action="store_true", help="report U/E[N^2], sigma_u/sd(N^2)")
    p = add("optimize-linear", "optimal linear tax for weight c")
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--normalized", action="store_true", help="unit moments instead of --dist")
    p = add("optimize-two-bracket", "grid-search optimum of U - c sigma_u")
    p.add_argument("--c", type=float, default=0.0)
    grid_opts(p)
    p = add("frontier-two-bracket", "grid optima over a list of weights")
    p.add_argument("--c-list", type=_float_list, default="0.1,0.2,0.3,0.4,0.5")
    grid_opts(p)
    for name, step in (("log-optimize", "1e-4"), ("log-frontier", "1e-3")):
        p = add(name, "logarithmic-utility linear tax")
        p.add_argument("--A", type=float, default=1.0, help="leisure weight")
        p.add_argument("--s", type=float, default=1e12, help="skills uniform on [0, s]")
        p.add_argument("--beta-step", type=float, default=float(step))
        if name == "log-optimize":
            p.add_argument("--c", type=float, default=0.0)
    p = add("verify", "run the invariant suite")
    p.add_argument("--table1", action="store_true", help="only the published two-bracket optima")
    return parser, subs


def read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for num, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidArgument(f"{path}:{num}: expected 'key = value'")
            key, value = (x.strip() for x in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def parse_args(argv: Sequence[str]) -> tuple[argparse.Namespace, set[str]]:
    """Parse flags, fold in the config file, and report which keys defaulted."""
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    sub = subs[args.command]
    conf: dict[str, str] = {}
    if args.config:
        conf = read_config(args.config)
        known = {a.dest for a in sub._actions}
        unknown = set(conf) - known - {"help"}
        if unknown:
            raise InvalidArgument(f"unknown config keys for {args.command}: {sorted(unknown)}")
        conv = {}
        for k, v in conf.items():
            if k in BOOL_FLAGS:
                if v.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise InvalidArgument(f"config key {k} needs a boolean, got {v!r}")
                conv[k] = v.lower() in ("true", "1", "yes")
            else:
                conv[k] = v
        sub.set_defaults(**conv)
        args = parser.parse_args(argv)
    explicit = {a.dest for a in sub._actions
                if any(tok == o or tok.startswith(o + "=") for tok in argv for o in a.option_strings)}
    defaulted = set(vars(args)) - explicit - set(conf)
    return args, defaulted


def _header(args, defaulted) -> list[str]:
    lines = [f"# taxfrontier {args.command}"]
    for k in sorted(vars(args)):
        if k in ("command", "output", "config"):
            continue
        v = getattr(args, k)
        note = "  (default)" if k in defaulted else ""
        lines.append(f"# {k} = {v}{note}")
    return lines


def _row(c, b1, b2, y1, w) -> list[str]:
    return [fmt(c), fmt(b1), fmt(b2), fmt(y1), fmt(w.alpha), fmt(w.U), fmt(w.sigma_u), fmt(w.V)]


def _curve_rows(curve) -> list[list[str]]:
    return [[fmt(s.sweep_param), fmt(s.c), fmt(s.beta1), fmt(s.beta2), fmt(s.y1), fmt(s.alpha),
             fmt(s.U), fmt(s.sigma_u), fmt(s.V)] for s in curve.samples]


def run(args: argparse.Namespace, defaulted: Optional[set] = None) -> tuple[int, str]:
    """Execute a parsed command; returns (exit status, text to emit)."""
    d = parse_distribution(args.dist, rtol=args.quad_rtol)
    for flag in ("policy", "n"):
        if hasattr(args, flag) and getattr(args, flag) is None:
            raise InvalidArgument(f"--{flag} is required for {args.command}")
    lines = _header(args, defaulted or set())
    status = 0
    cmd = args.command
    header = list(CSV_COLUMNS)
    rows: list[list[str]] = []

    if cmd == "respond":
        spec = parse_policy(args.policy)
        bal = (balance_linear(spec.beta1, d) if spec.is_linear
               else balance_two_bracket(spec.beta1, spec.beta2, spec.y1, d))
        out = respond_quadratic(bal.policy, args.n)
        lines.append(f"# alpha = {bal.policy.alpha!r}")
        header = ["n", "l_star", "y_star", "u_star", "t_star"]
        rows.append([fmt(args.n), fmt(out.l_star), fmt(out.y_star), fmt(out.u_star), fmt(out.t_star)])
    elif cmd in ("balance", "welfare"):
        spec = parse_policy(args.policy)
        if spec.is_linear:
            w = welfare_linear(spec.beta1, d, args.c)
            y1 = None
        else:
            w = welfare_two_bracket(spec.beta1, spec.beta2, spec.y1, d, args.c)
            y1 = spec.y1
        if cmd == "balance":
            bal = (balance_linear(spec.beta1, d) if spec.is_linear
                   else balance_two_bracket(spec.beta1, spec.beta2, spec.y1, d))
            lines.append(f"# budget residual = {fmt(bal.residual)}")
        rows.append(_row(args.c, spec.beta1, spec.beta2, y1, w))
    elif cmd == "frontier-linear":
        curve = frontier_linear(d, args.beta_steps, normalized=args.normalized)
        header = ["sweep_param"] + header
        rows = _curve_rows(curve)
    elif cmd == "optimize-linear":
        beta, w = optimal_linear_closed_form(args.c, None if args.normalized else d)
        rows.append(_row(args.c, beta, beta, None, w))
    elif cmd == "optimize-two-bracket":
        grid = GridSpec(args.beta1_range, args.beta2_range, args.y1_range)
        opt = optimize_two_bracket(args.c, d, grid)
        rows.append(_row(args.c, opt.beta1, opt.beta2, opt.y1, opt.welfare))
    elif cmd == "frontier-two-bracket":
        grid = GridSpec(args.beta1_range, args.beta2_range, args.y1_range)
        curve = frontier_two_bracket(args.c_list, d, grid)
        header = ["sweep_param"] + header
        rows = _curve_rows(curve)
    elif cmd == "log-optimize":
        beta, w = log_optimize(args.A, args.s, args.c, args.beta_step)
        lines.append(f"# alpha closed form = {log_balance_closed_form(args.A, beta, args.s)!r}")
        rows.append(_row(args.c, beta, beta, None, w))
    elif cmd == "log-frontier":
        curve = log_frontier(args.A, args.s, args.beta_step)
        header = ["sweep_param"] + header
        rows = _curve_rows(curve)
    elif cmd == "verify":
        results = run_checks(d, reference_only=args.table1)
        body = [r.line() for r in results]
        failed = [r.name for r in results if not r.passed]
        if failed:
            status = 1
            body.append("FAILED: " + ", ".join(failed))
        return status, "\n".join(lines + body) + "\n"
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidArgument(f"unknown command {cmd!r}")

    buf = io.StringIO()
    buf.write("\n".join(lines) + "\n")
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(r) + "\n")
    return status, buf.getvalue()


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, defaulted = parse_args(argv)
        status, text = run(args, defaulted)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except InvalidArgument as exc:
        print(f"taxfrontier: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"taxfrontier: error: {exc}", file=sys.stderr)
        return 2
    except NumericFailure as exc:
        print(f"taxfrontier: numeric failure: {exc}", file=sys.stderr)
        return 3
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
