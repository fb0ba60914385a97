"""Command-line front end: ``python -m circle_partitions <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import arcs, asymptotics, genfun, progressions
from .constants import build_constants
from .ntheory import dirichlet_power, write_weight_table
from .partitions import euler_transform
from .render import render_domain_plot

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    def __init__(self, flag: str, reason: str):
        super().__init__(f"{flag}: {reason}")


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _alpha(text: str):
    """Parse '1/2' exactly as a Fraction, anything else as a float."""
    try:
        return Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _require(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise UsageError(f"--{name}", "is required for this subcommand")


def _weights(args, n_max: int):
    return dirichlet_power(args.kind, args.r, max(int(n_max), 2))


def _format(args, default: str, allowed: tuple) -> str:
    fmt = args.format or default
    if fmt not in allowed:
        raise UsageError("--format", f"{fmt!r} not supported here (choose from {', '.join(allowed)})")
    return fmt


# --- subcommands ----------------------------------------------------------------

def cmd_sieve(args):
    _require(args, "n")
    w = _weights(args, args.n)
    fmt = _format(args, "csv", ("csv", "json", "wtbl"))
    if fmt == "wtbl":
        if not args.out:
            raise UsageError("--out", "binary weight tables need an output path")
        write_weight_table(w, args.out)
        return
    values = [int(v) if w.is_integer else float(v) for v in w.values[1 : args.n + 1]]
    if fmt == "json":
        _emit(_json({"kind": w.kind.name, "r": w.r, "n_max": args.n, "values": values}), args.out)
    else:
        _emit(_csv(["n", "weight"], [(i, v) for i, v in enumerate(values, 1)]), args.out)


def cmd_count(args):
    _require(args, "n")
    w = _weights(args, args.n)
    series = euler_transform(w, args.n)
    rows = []
    for n in range(args.n + 1):
        exact = series.coeffs_exact[n] if series.coeffs_exact is not None else None
        rows.append((n, exact, float(series.coeffs_log[n])))
    _format(args, "csv", ("csv",))
    _emit(_csv(["n", "exact", "log_value"], rows), args.out)


def cmd_predict(args):
    _require(args, "n")
    p = asymptotics.predict_log(args.kind, args.r, args.n)
    if _format(args, "csv", ("csv", "json")) == "json":
        _emit(_json({"n": p.n, "log_value": p.log_value, "formula": p.formula.value}), args.out)
    else:
        _emit(_csv(["n", "formula", "log_value"], [(p.n, p.formula.value, p.log_value)]), args.out)


def cmd_compare(args):
    grid = args.n_list or ([args.n] if args.n is not None else None)
    if not grid:
        raise UsageError("--n", "is required for this subcommand")
    top = max(grid)
    w = _weights(args, asymptotics.saddle_table_size(top))
    series = euler_transform(w, top)
    rows = []
    for n in grid:
        exact = float(series.coeffs_log[n])
        est = asymptotics.saddle_estimate(w, n).log_value
        thm = asymptotics.predict_log(args.kind, args.r, n).log_value
        rows.append((n, exact, est, thm, est / exact, thm / exact))
    _format(args, "csv", ("csv",))
    _emit(_csv(["n", "exact_log", "saddle_est", "thm_main_term", "ratio_saddle", "ratio_thm"], rows), args.out)


def cmd_saddle(args):
    _require(args, "n")
    w = _weights(args, asymptotics.saddle_table_size(args.n))
    s = asymptotics.solve_saddle(w, args.n)
    _format(args, "json", ("json",))
    _emit(_json({"n": s.n, "X": s.X, "rho": s.rho, "residual": s.residual}), args.out)


def cmd_estimate(args):
    _require(args, "n")
    w = _weights(args, asymptotics.saddle_table_size(args.n))
    p = asymptotics.saddle_estimate(w, args.n)
    _format(args, "csv", ("csv",))
    _emit(_csv(["n", "formula", "log_value"], [(p.n, p.formula.value, p.log_value)]), args.out)


def cmd_quadrature(args):
    _require(args, "n")
    if args.n > asymptotics.QUADRATURE_LIMIT:
        raise UsageError("--n", f"must be at most {asymptotics.QUADRATURE_LIMIT}")
    w = _weights(args, asymptotics.saddle_table_size(args.n))
    p = asymptotics.circle_quadrature(w, args.n)
    exact = euler_transform(w, args.n).coeffs_log[args.n]
    _format(args, "csv", ("csv",))
    _emit(_csv(["n", "quadrature_log", "exact_log"], [(p.n, p.log_value, float(exact))]), args.out)


def cmd_arcs(args):
    _require(args, "X", "A")
    part = arcs.build_arcs(args.X, args.A)
    report = {
        "X": args.X,
        "A": args.A,
        "Q": part.Q,
        "arcs": len(part),
        "measure": part.measure(),
    }
    if args.alpha is not None:
        hit = part.classify(float(args.alpha))
        report["alpha"] = float(args.alpha)
        report["class"] = "minor" if hit is arcs.MINOR else {"q": hit.q, "a": hit.a}
    _format(args, "json", ("json",))
    _emit(_json(report), args.out)


def cmd_expsum(args):
    _require(args, "X", "alpha")
    X = int(args.X)
    w = _weights(args, X)
    s = arcs.exp_sum(w, args.alpha, X)
    report = {"kind": w.kind.name, "r": args.r, "X": X, "alpha": str(args.alpha), "re": s.real, "im": s.imag, "abs": abs(s)}
    if args.q is not None:
        approx = arcs.dirichlet_approx(args.alpha, args.q)
        report["approx"] = {"a": approx.a, "q": approx.q, "Upsilon": approx.Upsilon}
        report["bound"] = arcs.bound_rhs(X, approx.q, approx.Upsilon, args.r, args.kind)
    _format(args, "json", ("json",))
    _emit(_json(report), args.out)


def cmd_scan_bounds(args):
    X_list = args.X_list or ([int(args.X)] if args.X is not None else [1000, 10000])
    q_max = args.q or 50
    w = _weights(args, max(X_list))
    report = arcs.bound_ratio_scan(w, args.r, X_list, range(1, q_max + 1), args.kind)
    _format(args, "json", ("json",))
    _emit(_json(report), args.out)


def cmd_progression(args):
    _require(args, "t", "q")
    w = _weights(args, args.t)
    if args.ell is not None:
        ells = [args.ell]
    else:
        ells = [l for l in range(args.q) if math.gcd(l, args.q) == 1]
    rows = []
    for ell in ells:
        p = progressions.count_progression(w, args.t, args.q, ell)
        rows.append((args.r, args.t, args.q, ell, p.count, p.leading, p.ratio))
    _format(args, "csv", ("csv",))
    _emit(_csv(["r", "t", "q", "ell", "count", "leading", "ratio"], rows), args.out)


def cmd_usum(args):
    _require(args, "gamma")
    q = args.q or 1
    ell = args.ell if args.ell is not None else (1 if q > 1 else 0)
    n_max = args.n or int(math.ceil(40 / args.gamma.real))
    w = _weights(args, n_max)
    u = progressions.u_sum(w, args.gamma, q, ell)
    report = {
        "gamma": [args.gamma.real, args.gamma.imag],
        "q": q,
        "ell": ell,
        "value": [u.value.real, u.value.imag],
        "tail_bound": u.tail_bound,
        "leading": [u.leading.real, u.leading.imag],
    }
    _format(args, "json", ("json",))
    _emit(_json(report), args.out)


def cmd_constants(args):
    _format(args, "json", ("json",))
    _emit(build_constants().to_json() + "\n", args.out)


def cmd_domainplot(args):
    if not args.out:
        raise UsageError("--out", "a PPM path is required")
    _format(args, "ppm", ("ppm",))
    grid = genfun.domain_grid(args.r, args.prime_bound or 50, args.res or 512)
    render_domain_plot(grid, args.out)
    print(f"wrote {args.out}; convert with e.g. `magick {args.out} plot.png`", file=sys.stderr)


COMMANDS = {
    "sieve": cmd_sieve,
    "count": cmd_count,
    "predict": cmd_predict,
    "compare": cmd_compare,
    "saddle": cmd_saddle,
    "estimate": cmd_estimate,
    "quadrature": cmd_quadrature,
    "arcs": cmd_arcs,
    "expsum": cmd_expsum,
    "scan-bounds": cmd_scan_bounds,
    "progression": cmd_progression,
    "usum": cmd_usum,
    "constants": cmd_constants,
    "domainplot": cmd_domainplot,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", choices=["pr", "lambda"], default="pr")
    common.add_argument("--r", type=int, default=1)
    common.add_argument("--n", type=_positive_int)
    common.add_argument("--n-list", type=_positive_int, nargs="+", help="several n (compare)")
    common.add_argument("--t", type=_positive_int)
    common.add_argument("--X", type=float)
    common.add_argument("--X-list", type=_positive_int, nargs="+", help="several X (scan-bounds)")
    common.add_argument("--A", type=float)
    common.add_argument("--q", type=int)
    common.add_argument("--a", type=int)
    common.add_argument("--ell", type=int)
    common.add_argument("--alpha", type=_alpha)
    common.add_argument("--gamma", type=complex, help="complex, e.g. 1e-3+0.01j (usum)")
    common.add_argument("--res", type=int)
    common.add_argument("--prime-bound", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=["json", "csv", "ppm", "wtbl"])
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="circle-partitions", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _validate(args) -> None:
    if args.r < 1:
        raise UsageError("--r", "must be at least 1")
    if args.n is not None and args.n_list:
        raise UsageError("--n-list", "cannot be combined with --n")
    if args.X is not None and args.X_list:
        raise UsageError("--X-list", "cannot be combined with --X")
    if args.q is not None and args.q < 1:
        raise UsageError("--q", "must be positive")
    if args.res is not None and not 1 <= args.res <= 4096:
        raise UsageError("--res", "must lie in 1..4096")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        _validate(args)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, ValueError, MemoryError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main() -> None:
    sys.exit(run())
