"""Command-line front end: one subcommand per table or figure pipeline.

Every subcommand writes a CSV (or JSON) table with a header row to stdout or
``--out``.  ``--exact`` switches to rational arithmetic and prints fractions
as ``num/den``; otherwise floats are printed with 12 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import krawtchouk, maxsat, mutation, onemax, oracle, runtime, walsh
from ._scalars import format_scalar, parse_scalar
from .bitspace import BitString, popcount
from .errors import BudgetExceededError, ConditioningError, ConvergenceError, NotAbsorbingError

FIT_BASES = {
    "nlogn": ["x", "xlogx"],
    "inv-lambda": ["constant", "inv"],
    "loglog": None,
}


def _int_range(text: str) -> list[int]:
    """``"a:b"`` or ``"a:b:step"``, both ends inclusive; or a comma list."""
    try:
        if ":" in text:
            parts = [int(t) for t in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            a, b, step = parts
            if step <= 0:
                raise ValueError
            return list(range(a, b + 1, step))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None


def _digits(text: str) -> tuple[int, int] | None:
    if text == "full":
        return None
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'P,E' decimals or 'full', got {text!r}") from None
    return a, b


class Output:
    def __init__(self, args):
        self.fmt = args.format
        self.path = args.out

    def _cell(self, v):
        if isinstance(v, str):
            return v
        if isinstance(v, bool):
            return str(v).lower()
        return format_scalar(v)

    def emit(self, columns, rows, meta: dict | None = None) -> None:
        rows = [list(r) for r in rows]
        if self.fmt == "json":
            payload = {"columns": list(columns), "rows": [[self._json(v) for v in r] for r in rows]}
            if meta:
                payload["meta"] = meta
            text = json.dumps(payload, indent=2) + "\n"
        else:
            buf = io.StringIO()
            if meta:
                for k, v in meta.items():
                    buf.write(f"# {k}: {v}\n")
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(columns)
            for r in rows:
                w.writerow([self._cell(v) for v in r])
            text = buf.getvalue()
        self.write(text)

    def _json(self, v):
        if isinstance(v, Fraction):
            return format_scalar(v)
        if isinstance(v, (bool, str)):
            return v
        if isinstance(v, int):
            return v
        return float(v)

    def write(self, text: str) -> None:
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _p(args, text: str | None = None):
    return parse_scalar(text if text is not None else args.p, args.exact)


def cmd_krawtchouk(args, out: Output) -> None:
    K = krawtchouk.build(args.n)
    out.emit([f"j{j}" for j in range(args.n + 1)], K.entries)


def cmd_walsh(args, out: Output) -> None:
    f = walsh.read_value_table(_read(args.table), exact=args.exact)
    e = walsh.transform(f)
    out.emit(["w", "coefficient"], [(str(BitString(w, e.n)), a) for w, a in enumerate(e.coeffs)])


def _point(args, n: int) -> BitString:
    if args.x is not None:
        x = BitString.parse(args.x)
        if x.n != n:
            raise ValueError(f"--x has length {x.n}, expected {n}")
        return x
    if args.ones is not None:
        if not 0 <= args.ones <= n:
            raise ValueError(f"--ones outside 0..{n}")
        return BitString((1 << args.ones) - 1, n)
    raise ValueError("give --x or --ones")


def cmd_distribution(args, out: Output) -> None:
    p = _p(args)
    if args.table:
        f = walsh.read_value_table(_read(args.table), exact=True)
        x = _point(args, f.n)
        levels = mutation.FitnessLevels.from_table(f)
        mmax = levels.q - 1 if args.mmax is None else args.mmax
        F = mutation.build_F_enumerative(f, mmax, x)
    elif args.onemax:
        n = args.onemax
        x = _point(args, n)
        levels = mutation.FitnessLevels(tuple(onemax.fitness_of_level(n, i) for i in range(n + 1)))
        mmax = n if args.mmax is None else args.mmax
        F = onemax.onemax_F(n, popcount(x), mmax)
    else:
        cs = maxsat.parse_dimacs(_read(args.cnf))
        x = _point(args, cs.n)
        levels = maxsat.default_levels(cs)
        mmax = levels.q - 1 if args.mmax is None else args.mmax
        F = maxsat.maxsat_F(cs, x, mmax, budget=args.budget)
    if not args.exact:
        F = F.as_float()
    pi = mutation.distribution(F, levels, p)
    out.emit(["fitness", "probability"], zip(levels.values, pi.entries))


def cmd_onemax_varpi(args, out: Output) -> None:
    vp = onemax.varpi(args.n, _p(args))
    header = ["from\\to"] + [str(onemax.fitness_of_level(args.n, j)) for j in range(args.n + 1)]
    rows = [[str(onemax.fitness_of_level(args.n, i))] + list(vp.entries[i]) for i in range(args.n + 1)]
    out.emit(header, rows)


def cmd_onemax_runtime(args, out: Output) -> None:
    ps = [_p(args, t) for t in args.p]
    rows = []
    for p in sorted(ps):
        res = runtime.onemax_runtime(args.n, p, args.lam, "exact" if args.exact else "float")
        row = [args.n, args.lam, p, res.expected_runtime]
        if args.evaluations:
            row.append(res.expected_runtime * args.lam)
        rows.append(row)
    cols = ["n", "lambda", "p", "expected_runtime"] + (["expected_evaluations"] if args.evaluations else [])
    out.emit(cols, rows)


def _rounded(v: float, d: int | None):
    return v if d is None else f"{v:.{d}f}"


def cmd_optimal_p(args, out: Output) -> None:
    ns = args.n_range if args.n_range else [args.n]
    # rounding is a CSV presentation choice; JSON keeps full floats
    dp, de = args.digits if args.digits and args.format == "csv" else (None, None)
    rows = []
    for n in sorted(ns):
        r = runtime.optimal_p(n, args.lam)
        rows.append([n, _rounded(r.p_star, dp), _rounded(r.runtime, de), _rounded(r.c, dp)])
    out.emit(["n", "p_star", "expected_runtime", "c_n"], rows)


def cmd_lambda_sweep(args, out: Output) -> None:
    if args.optimal_p == (args.p is not None):
        raise ValueError("give exactly one of --p and --optimal-p")
    p = None if args.optimal_p else _p(args)
    rows = runtime.lambda_sweep(args.n, p, args.lambda_range, optimal=args.optimal_p)
    out.emit(["lambda", "p", "expected_runtime"], rows)


def _read_points(path: str) -> list[tuple[float, float]]:
    pts = []
    for row in csv.reader(io.StringIO(_read(path))):
        if not row or row[0].startswith("#"):
            continue
        try:
            pts.append((float(row[0]), float(row[-1])))
        except ValueError:
            if pts:
                raise ValueError(f"bad data row {row!r}") from None
    return pts


def cmd_fit(args, out: Output) -> None:
    pts = _read_points(args.input)
    if args.basis == "loglog":
        a, b = runtime.loglog_slope(pts)
        out.emit(["term", "coefficient"], [("constant", a), ("log_x", b)])
        return
    basis = FIT_BASES[args.basis]
    coef = runtime.fit_least_squares(pts, basis)
    out.emit(["term", "coefficient"], zip(basis, coef))


def cmd_maxsat_fmatrix(args, out: Output) -> None:
    cs = maxsat.parse_dimacs(_read(args.cnf))
    x = BitString.parse(args.x)
    if x.n != cs.n:
        raise ValueError(f"--x has length {x.n}, expected {cs.n}")
    F = maxsat.maxsat_F(cs, x, args.mmax, budget=args.budget, exact=args.exact)
    out.emit(["m"] + [f"j{j}" for j in range(cs.n + 1)], ([m] + list(r) for m, r in enumerate(F.entries)))


def cmd_maxsat_clause_walsh(args, out: Output) -> None:
    cs = maxsat.parse_dimacs(_read(args.cnf))
    if not 1 <= args.clause <= len(cs):
        raise ValueError(f"--clause outside 1..{len(cs)}")
    c = cs.clauses[args.clause - 1]
    rows = []
    for w in range(1 << cs.n):
        a = maxsat.clause_walsh_coeff(c, BitString(w, cs.n), args.which)
        rows.append((str(BitString(w, cs.n)), a if args.exact else float(a)))
    out.emit(["w", "coefficient"], rows)


def cmd_simulate(args, out: Output) -> None:
    r = oracle.simulate_ea(args.n, args.lam, float(parse_scalar(args.p, False)), args.runs, args.seed)
    lo, hi = r.interval
    meta = {"generator": r.generator, "backend": r.backend, "seed": r.seed}
    out.emit(
        ["n", "lambda", "p", "runs", "mean", "ci99_halfwidth", "ci99_low", "ci99_high", "mean_evaluations"],
        [[args.n, args.lam, float(parse_scalar(args.p, False)), r.runs, r.mean, r.ci99_halfwidth, lo, hi,
          r.mean * args.lam]],
        meta,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--exact", action="store_true", help="rational arithmetic, fractions printed as num/den")

    parser = argparse.ArgumentParser(prog="bitflip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("krawtchouk", cmd_krawtchouk, "Krawtchouk matrix of order n")
    sp.add_argument("--n", type=int, required=True)

    sp = add("walsh", cmd_walsh, "Walsh coefficients of a bitstring,value table")
    sp.add_argument("--table", required=True)

    sp = add("distribution", cmd_distribution, "fitness distribution after one mutation")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--table", help="bitstring,value table")
    src.add_argument("--onemax", type=int, metavar="N", help="Onemax of length N")
    src.add_argument("--cnf", help="DIMACS file; distribution of the unsatisfied-clause count")
    sp.add_argument("--p", required=True)
    pt = sp.add_mutually_exclusive_group()
    pt.add_argument("--x", help="bit string")
    pt.add_argument("--ones", type=int, help="x with this many ones (rightmost bits)")
    sp.add_argument("--mmax", type=int)
    sp.add_argument("--budget", type=int, default=maxsat.DEFAULT_BUDGET)

    sp = add("onemax-varpi", cmd_onemax_varpi, "Onemax level transition matrix")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", required=True)

    sp = add("onemax-runtime", cmd_onemax_runtime, "expected generations of the (1+lambda) EA")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=int, default=1)
    sp.add_argument("--p", nargs="+", required=True, help="one or more flip probabilities")
    sp.add_argument("--evaluations", action="store_true", help="also report lambda * generations")

    sp = add("optimal-p", cmd_optimal_p, "runtime-minimising flip probability")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int)
    grp.add_argument("--n-range", type=_int_range)
    sp.add_argument("--lambda", dest="lam", type=int, default=1)
    sp.add_argument("--digits", type=_digits, default=(5, 3),
                    help="decimals for p and E as 'P,E' (default 5,3) or 'full'")

    sp = add("lambda-sweep", cmd_lambda_sweep, "expected generations over a range of lambda")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p")
    sp.add_argument("--lambda-range", type=_int_range, required=True)
    sp.add_argument("--optimal-p", action="store_true", help="use the optimal p for each lambda")

    sp = add("fit", cmd_fit, "least-squares fit of a two-column CSV")
    sp.add_argument("--basis", choices=sorted(FIT_BASES), required=True)
    sp.add_argument("--input", required=True, help="CSV with x in the first and y in the last column")

    sp = add("maxsat-fmatrix", cmd_maxsat_fmatrix, "F matrix of a MAX-SAT instance at x")
    sp.add_argument("--cnf", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--mmax", type=int, default=maxsat.DEFAULT_MMAX)
    sp.add_argument("--budget", type=int, default=maxsat.DEFAULT_BUDGET)

    sp = add("maxsat-clause-walsh", cmd_maxsat_clause_walsh, "Walsh coefficients of one clause")
    sp.add_argument("--cnf", required=True)
    sp.add_argument("--clause", type=int, required=True, help="1-based clause index")
    sp.add_argument("--which", choices=["f", "g"], default="g")

    sp = add("simulate", cmd_simulate, "Monte-Carlo runs of the (1+lambda) EA on Onemax")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=int, default=1)
    sp.add_argument("--p", required=True)
    sp.add_argument("--runs", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, Output(args))
    except (ValueError, IndexError, OSError, BudgetExceededError, ConditioningError,
            ConvergenceError, NotAbsorbingError, ArithmeticError) as exc:
        print(f"bitflip {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
