"""Command-line interface: ``shufflecopula <command> ...``.

Descriptors are given inline (anything starting with ``{``), as a path to a
JSON file, or by a built-in name such as ``Pi``, ``fgm05`` or ``selfsimilar5``.
Exit status is 0 on success, 1 on validation or operation errors and 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import DescriptorError, as_exchange, transpose, validate
from .corpus import builtin
from .dependence import omega, omega_star_lower
from .empirical import checkerboard, read_samples
from .io import (
    dumps_descriptor,
    loads_descriptor,
    read_descriptor,
    write_descriptor,
    write_polyline_csv,
    write_report,
    write_trace_csv,
)
from .maps import IntervalUnion
from .norms import shuffle_dist_sq, sobolev_dist_sq, sobolev_norm_sq
from .shuffles import approx_by_shuffles, diagonalize, right_diagonalize, selfsimilar, sorting_shuffle
from .star import shuffle_of, star


class OperationError(Exception):
    """Raised for failures that should exit with status 1."""


def load(arg: str, check: bool = True):
    """Parse a descriptor argument and validate it."""
    text = arg.lstrip()
    try:
        if text.startswith("{"):
            d = loads_descriptor(text)
        elif Path(arg).is_file():
            d = read_descriptor(arg)
        else:
            d = builtin(arg)
            if d is None:
                raise DescriptorError(f"{arg!r} is neither inline JSON, an existing file nor a built-in name")
    except (DescriptorError, ValueError) as exc:
        raise OperationError(f"invalid descriptor: {exc}") from None
    if check:
        report = validate(d)
        if not report.ok:
            raise OperationError("validation failed:\n" + json.dumps(report.to_dict(), indent=2))
    return d


def _fmt(v) -> str:
    return f"{float(v):.6f}"


def _emit_descriptor(d, out: str | None) -> None:
    if out:
        write_descriptor(d, out)
    else:
        sys.stdout.write(dumps_descriptor(d))


# --- commands ----------------------------------------------------------------

def cmd_validate(args):
    d = load(args.desc, check=False)
    report = validate(d)
    if args.output:
        write_report(report.to_dict(), args.output)
    if not report.ok:
        print(json.dumps(report.to_dict(), indent=2))
        return 1
    print(f"valid ({len(report.checks)} checks)")
    return 0


def cmd_norm(args):
    d = load(args.desc)
    rep = sobolev_norm_sq(d, args.grid)
    line = f"norm_sq {_fmt(rep.norm_sq)} scheme {rep.scheme}"
    if rep.exact is not None:
        line += f" exact {rep.exact}"
    print(line)
    if args.output:
        write_report(rep.to_dict(), args.output)
    return 0


def cmd_dist(args):
    a, b = load(args.a), load(args.b)
    fa, fb = as_exchange(a), as_exchange(b)
    out = {}
    if fa is not None and fb is not None:
        exact = shuffle_dist_sq(fa, fb)
        out = {"dist_sq": float(exact), "exact": str(exact), "scheme": "exact-shuffle"}
        print(f"dist_sq {float(exact)!r} exact {exact}")
    else:
        v = sobolev_dist_sq(a, b, args.grid)
        out = {"dist_sq": v, "scheme": f"grid({args.grid})"}
        print(f"dist_sq {v!r} scheme grid({args.grid})")
    if args.output:
        write_report(out, args.output)
    return 0


def cmd_star(args):
    res = star(load(args.a), load(args.b), args.grid)
    _emit_descriptor(res.copula, args.output)
    print(f"star {res.exactness} ({' * '.join(res.provenance)})", file=sys.stderr)
    return 0


def cmd_transpose(args):
    _emit_descriptor(transpose(load(args.desc)), args.output)
    return 0


def cmd_shuffle_of(args):
    t = as_exchange(load(args.by))
    if t is None:
        raise OperationError("--by must be a shuffle of Min")
    res = shuffle_of(load(args.desc), t, args.side, args.grid)
    _emit_descriptor(res.copula, args.output)
    print(f"shuffle-of {args.side} {res.exactness}", file=sys.stderr)
    return 0


def cmd_sorting_shuffle(args):
    try:
        s = sorting_shuffle(IntervalUnion.parse(args.set))
    except ValueError as exc:
        raise OperationError(f"bad --set: {exc}") from None
    _emit_descriptor(s, args.output)
    return 0


def cmd_diagonalize(args):
    d = load(args.desc)
    run = right_diagonalize if args.right else diagonalize
    try:
        trace = run(d, args.depth, args.grid)
    except ValueError as exc:
        raise OperationError(str(exc)) from None
    if args.output:
        write_trace_csv(trace.rows(), args.output)
    if args.shuffle_out:
        write_descriptor(trace.composed, args.shuffle_out)
    print(f"diagonalize {trace.mode} depth {args.depth}: " + " ".join(_fmt(v) for v in trace.norms))
    return 0


def cmd_approx(args):
    d = load(args.desc)
    try:
        res = approx_by_shuffles(d, args.bins, args.grid, args.eps)
    except ValueError as exc:
        raise OperationError(str(exc)) from None
    _emit_descriptor(res.shuffle, args.output)
    if args.report:
        write_report(res.to_dict(), args.report)
    print(f"bins {res.bins} dist_sq {res.dist_sq!r} bound {res.bound!r}", file=sys.stderr)
    return 0


def cmd_selfsimilar(args):
    try:
        s = selfsimilar(args.level, args.shift)
    except ValueError as exc:
        raise OperationError(str(exc)) from None
    _emit_descriptor(s, args.output)
    return 0


def cmd_omega(args):
    v = omega(load(args.desc), args.grid)
    print(f"omega {v!r}")
    if args.output:
        write_report({"omega": v}, args.output)
    return 0


def cmd_omega_star(args):
    d = load(args.desc)
    rep = omega_star_lower(d, args.budget, args.seed, args.grid, args.depth, args.mirror)
    print(f"omega {rep.omega!r} omega_star_lb {rep.omega_star_lb!r} source {rep.source}")
    if args.output:
        write_report(rep.to_dict(), args.output)
    if args.trace:
        write_trace_csv(rep.trace, args.trace, header=("iteration", "norm_sq"))
    return 0


def cmd_empirical(args):
    try:
        fit = checkerboard(read_samples(args.samples), args.bins)
    except (OSError, ValueError) as exc:
        raise OperationError(str(exc)) from None
    _emit_descriptor(fit.copula, args.output)
    rep = sobolev_norm_sq(fit.copula)
    summary = {
        "bins": args.bins,
        "sweeps": fit.sweeps,
        "ties": fit.ties,
        "norm_sq": rep.norm_sq,
        "omega": omega(fit.copula),
        "label": "exploratory",
    }
    if args.report:
        write_report(summary, args.report)
    print(
        f"empirical bins {args.bins} sweeps {fit.sweeps} ties {fit.ties} "
        f"norm_sq {_fmt(rep.norm_sq)} omega {_fmt(summary['omega'])}",
        file=sys.stderr,
    )
    return 0


def cmd_support(args):
    f = as_exchange(load(args.desc))
    if f is None:
        raise OperationError("support needs a shuffle of Min")
    segments = f.segments()
    if args.output:
        write_polyline_csv(segments, args.output)
    else:
        for (x0, y0), (x1, y1) in segments:
            print(f"{float(x0)!r},{float(y0)!r},{float(x1)!r},{float(y1)!r}")
    return 0


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=256, help="grid resolution for non-exact operations")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")

    p = argparse.ArgumentParser(prog="shufflecopula", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, output_help="output file"):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("-o", "--output", help=output_help)
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check copula axioms", "write the validation report here")
    sp.add_argument("desc")
    sp = add("norm", cmd_norm, "Sobolev norm squared", "JSON report")
    sp.add_argument("desc")
    sp = add("dist", cmd_dist, "squared Sobolev distance", "JSON report")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("star", cmd_star, "*-product a * b", "descriptor JSON")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("transpose", cmd_transpose, "swap coordinates", "descriptor JSON")
    sp.add_argument("desc")
    sp = add("shuffle-of", cmd_shuffle_of, "shuffle a copula by a shuffle of Min", "descriptor JSON")
    sp.add_argument("desc")
    sp.add_argument("--by", required=True, help="the shuffle of Min")
    sp.add_argument("--side", choices=("left", "right"), default="left")
    sp = add("sorting-shuffle", cmd_sorting_shuffle, "sorting shuffle of an interval union", "descriptor JSON")
    sp.add_argument("--set", required=True, help='interval union "a1,b1;a2,b2"')
    sp = add("diagonalize", cmd_diagonalize, "greedy diagonalization trace", "trace CSV (step, norm_sq)")
    sp.add_argument("desc")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--right", action="store_true", help="multiply shuffles on the right")
    sp.add_argument("--shuffle-out", help="write the composed shuffle here")
    sp = add("approx-shuffles", cmd_approx, "straight shuffle approximation", "descriptor JSON")
    sp.add_argument("desc")
    sp.add_argument("--bins", type=int, required=True)
    sp.add_argument("--eps", type=float, default=None, help="unit-norm tolerance for grid inputs")
    sp.add_argument("--report", help="JSON report with dist_sq and bound")
    sp = add("selfsimilar", cmd_selfsimilar, "stripe-flipping shuffle", "descriptor JSON")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--shift", type=int, default=0, choices=(0, 1))
    sp = add("omega", cmd_omega, "dependence measure omega", "JSON report")
    sp.add_argument("desc")
    sp = add("omega-star", cmd_omega_star, "certified lower bound for omega*", "JSON report")
    sp.add_argument("desc")
    sp.add_argument("--budget", type=int, default=200)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--mirror", action="store_true", help="flip the side of every proposal")
    sp.add_argument("--trace", help="trace CSV (iteration, norm_sq)")
    sp = add("empirical", cmd_empirical, "checkerboard copula from samples", "descriptor JSON")
    sp.add_argument("samples")
    sp.add_argument("--bins", type=int, required=True)
    sp.add_argument("--report", help="JSON summary")
    sp = add("support", cmd_support, "support polyline of a shuffle", "polyline CSV")
    sp.add_argument("desc")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid", 2) < 2:
        parser.error("--grid must be at least 2")
    if getattr(args, "budget", 0) < 0:
        parser.error("--budget must be non-negative")
    try:
        return args.func(args)
    except OperationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
