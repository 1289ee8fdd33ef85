"""Command-line interface: ``qreals {eval,table,verify,entropy,qs}``.

Exit status is 0 on success, 1 when a verification suite fails and 2 for
usage or domain errors.  Numbers are printed with 17 significant digits so
they round-trip through text.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import compat, core, entropy, metric, qint, suites
from .core import QParam, QReal
from .errors import QError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_q(text: str) -> Fraction:
    try:
        q = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid q {text!r}") from None
    if not 0 <= q <= 1:
        raise argparse.ArgumentTypeError(f"q must lie in [0, 1], got {text}")
    return q


def _parse_numbers(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse numbers from {text!r}") from None


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise UsageError(f"malformed range {text!r}; expected a..b") from None
    if a > b:
        raise UsageError(f"empty range {text!r}")
    if max(abs(a), abs(b)) > 64:
        raise UsageError("table range is limited to |n| <= 64")
    return range(a, b + 1)


def _parse_domain(text: str) -> metric.Interval:
    vals = _parse_numbers(text)
    if len(vals) != 2:
        raise UsageError(f"--domain needs lo,hi; got {text!r}")
    return metric.Interval(*vals)


def _need_q(args) -> Fraction:
    if args.q is None:
        raise UsageError("--q is required for this command")
    return args.q


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=_parse_q, default=None,
                        help="deformation parameter in [0, 1]; decimal or a/b")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised suites")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--tol", type=float, default=None,
                        help="override the pinned tolerance of floating checks")
    common.add_argument("--format", choices=("json", "csv"), default=None, dest="fmt")
    common.add_argument("--out", default=None, help="write output to PATH instead of stdout")

    parser = argparse.ArgumentParser(prog="qreals", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate one operation")
    p.add_argument("--op", required=True, choices=sorted([*EVAL_OPS, "borges"]))
    p.add_argument("--args", required=True, dest="operands",
                   help="comma-separated operands (use --args=-1,2 for a leading minus)")
    p.add_argument("--variant", choices=("corrected", "printed"), default="corrected",
                   help="Borges product form")

    p = sub.add_parser("table", parents=[common], help="tabulate q-integers")
    p.add_argument("--n", required=True, dest="n_range", help="range a..b with |n| <= 64")
    p.add_argument("--exact", action="store_true", help="render exact rationals")
    p.add_argument("--columns", default=",".join(TABLE_COLUMNS),
                   help=f"subset of {','.join(TABLE_COLUMNS)}")

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--suite", required=True, choices=suites.SUITES + ("all",))

    p = sub.add_parser("entropy", parents=[common], help="Tsallis entropy of a distribution")
    p.add_argument("--dist", required=True, help="probabilities, comma list or JSON array")
    p.add_argument("--compose", default=None, help="second, independent distribution")

    p = sub.add_parser("qs", parents=[common], help="metric and measure experiments")
    p.add_argument("experiment", choices=("scan", "eta", "doubling", "snowflake"))
    p.add_argument("--domain", default="-10,10")
    p.add_argument("--target", choices=("euclidean", "qdist", "q-distance"), default="qdist")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--r", type=float, default=1.0, help="doubling radius")
    p.add_argument("--x", type=float, default=0.0, help="doubling centre")
    p.add_argument("--grid", type=int, default=41, help="grid points for eta")
    return parser


def _binary(fn):
    return 2, lambda p, a, b: fn(QReal(p, a), QReal(p, b)).value


def _unary(fn):
    return 1, lambda p, a: fn(QReal(p, a)).value


EVAL_OPS = {
    "oplus": _binary(core.oplus),
    "ominus": _binary(core.ominus),
    "otimes": _binary(core.otimes),
    "oslash": _binary(core.oslash),
    "qdist": _binary(core.q_dist),
    "neg": _unary(core.neg),
    "qabs": _unary(core.q_abs),
    "expq": _unary(core.exp_cap),
    "logq": _unary(core.log_cap),
    "tau": (1, lambda p, x: core.tau(p, x).value),
    "tauinv": (1, core.tau_inv),
    "lnq": (1, compat.ln_q),
    "diamond": (2, compat.lobao_diamond),
}

TABLE_COLUMNS = ("n", "n_q", "neg_n_q", "inv_n_q")


def cmd_eval(args) -> tuple[str, int]:
    p = QParam(float(_need_q(args)))
    operands = _parse_numbers(args.operands)
    if args.op == "borges":
        arity, fn = 2, (lambda pp, a, b: compat.borges_otimes(pp, a, b, args.variant))
    else:
        arity, fn = EVAL_OPS[args.op]
    if len(operands) != arity:
        raise UsageError(f"{args.op} takes {arity} operand(s), got {len(operands)}")
    return fmt(fn(p, *operands)) + "\n", EXIT_OK



def table_rows(q: Fraction, ns: range, exact: bool) -> list[dict]:
    p = QParam(float(q))
    rows = []
    for n in ns:
        if exact:
            nq = qint.q_integer_closed(n, q)
            neg_nq = qint.q_integer_closed(-n, q)
            row = {"n": n, "n_q": str(nq), "neg_n_q": str(neg_nq)}
        else:
            row = {"n": n, "n_q": fmt(core.tau(p, n).value),
                   "neg_n_q": fmt(core.tau(p, -n).value)}
        row["inv_n_q"] = "" if n == 0 else fmt(qint.q_inverse(n, p))
        rows.append(row)
    return rows


def cmd_table(args) -> tuple[str, int]:
    q = _need_q(args)
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    unknown = set(columns) - set(TABLE_COLUMNS)
    if unknown or not columns:
        raise UsageError(f"unknown column(s) {sorted(unknown)}; choose from {TABLE_COLUMNS}")
    rows = [{c: r[c] for c in columns}
            for r in table_rows(q, _parse_range(args.n_range), args.exact)]
    if (args.fmt or "csv") == "json":
        return json.dumps({"q": str(q), "exact": args.exact, "rows": rows}, indent=2) + "\n", 0
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue(), EXIT_OK


def _config(args, q_default: Fraction | None = None) -> suites.RunConfig:
    q = args.q if args.q is not None else q_default
    if q is None:
        raise UsageError("--q is required for this command")
    try:
        return suites.RunConfig(q=q, seed=args.seed, samples=args.samples,
                                tolerance=args.tol, output_format=args.fmt or "json",
                                out=args.out)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args) -> tuple[str, int]:
    cfg = _config(args)
    results = suites.run(args.suite, cfg)
    passed = all(r.passed for r in results)
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "check", "passed", "max_deviation", "tolerance"])
        for r in results:
            for c in r.checks:
                writer.writerow([r.suite, c.name, c.passed, "" if c.max_deviation is None
                                 else fmt(c.max_deviation),
                                 "" if c.tolerance is None else fmt(c.tolerance)])
        text = buf.getvalue()
    else:
        report = {
            "q": str(cfg.q),
            "seed": cfg.seed,
            "samples": cfg.samples,
            "tolerance": cfg.tolerance,
            "passed": passed,
            "suites": [r.to_dict() for r in results],
        }
        text = json.dumps(report, indent=2) + "\n"
    return text, EXIT_OK if passed else EXIT_FAIL


def _kv_output(fields: dict, fmt_name: str) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for k, v in fields.items():
            writer.writerow([k, fmt(v) if isinstance(v, float) else v])
        return buf.getvalue()
    return json.dumps(fields, indent=2) + "\n"


def cmd_entropy(args) -> tuple[str, int]:
    p = QParam(float(_need_q(args)))
    a = entropy.DiscreteDist.parse(args.dist)
    if args.compose is None:
        s = entropy.tsallis_entropy(p, a)
        if args.fmt is None:
            return fmt(s) + "\n", EXIT_OK
        return _kv_output({"q": p.q, "entropy": s}, args.fmt), EXIT_OK
    b = entropy.DiscreteDist.parse(args.compose)
    fields = {"q": p.q, **entropy.compose(p, a, b).to_dict()}
    return _kv_output(fields, args.fmt or "json"), EXIT_OK


def cmd_qs(args) -> tuple[str, int]:
    exp = args.experiment
    if exp == "snowflake":
        rep = metric.snowflake_dimension(metric.cantor_points(args.depth), args.epsilon)
        out = rep.to_dict()
    elif exp == "scan":
        p = QParam(float(_need_q(args)))
        out = metric.weak_qs_scan(p, _parse_domain(args.domain), args.samples, args.seed,
                                  args.target).to_dict()
    elif exp == "eta":
        p = QParam(float(_need_q(args)))
        table = metric.eta_estimate(p, _parse_domain(args.domain), args.grid)
        out = {"t": [t for t, _ in table], "eta": [e for _, e in table]}
    else:
        p = QParam(float(_need_q(args)))
        out = {
            "q": p.q,
            "x": args.x,
            "r": args.r,
            "ratio": metric.doubling_ratio(p, args.x, args.r),
            "closed_form": metric.doubling_ratio_closed(p, args.r),
        }
    if args.fmt == "csv":
        return _kv_output({k: json.dumps(v) if isinstance(v, list) else v
                           for k, v in out.items()}, "csv"), EXIT_OK
    return json.dumps(out, indent=2) + "\n", EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "table": cmd_table,
    "verify": cmd_verify,
    "entropy": cmd_entropy,
    "qs": cmd_qs,
}


_LIST_OPTIONS = ("--args", "--n", "--domain", "--dist", "--compose")
_NEGATIVE_LIST = re.compile(r"^-(\d|\.\d)")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--domain -10,10`` as ``--domain=-10,10`` so argparse keeps the value."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _LIST_OPTIONS:
            nxt = next(it, None)
            if nxt is not None and _NEGATIVE_LIST.match(nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    try:
        text, code = COMMANDS[args.command](args)
    except (UsageError, QError, ValueError, OverflowError, ZeroDivisionError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"qreals {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
