"""Batch command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 divergence or guard.

Functions are given as ``poly:c0,c1,...`` or
``named:qsin|qcos|qexp|sin|cos|exp|const:<v>``.  Tables are written as CSV
(header row, LF endings) or as one JSON object ``{params, rows, flags}``.
Floats are printed with ``repr``, the shortest string that round-trips.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from qcalc import __version__
from qcalc.core import (
    DeformationParameter,
    DivergenceError,
    QCalcError,
    QDomainError,
    QRangeError,
    SummationControl,
    q_bracket,
    q_bracket_classical_gap,
    q_brackets,
    q_factorials,
)
from qcalc.deriv import Evaluator, PolynomialRep, jackson_derivative, q_commutator_xp
from qcalc.fock import algebra_residuals, build_truncated, eigen_gap_table
from qcalc.integrate import (
    bump,
    jackson_integral,
    jackson_integral_improper,
    jackson_integral_interval,
    jackson_integral_real_line,
    lattice_table,
    monotonicity_counterexample,
    plateau,
)
from qcalc.solve import recover_integrand, uniqueness_check
from qcalc.special import QSeries, SeriesKind, ode_residual, q_exp

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_DIVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Output:
    """Collects a scalar or a table, plus params and flags, and renders it."""

    def __init__(self, params):
        self.params = params
        self.rows = []
        self.flags = []
        self.scalar = None

    def render(self, fmt):
        if fmt == "json":
            rows = self.rows if self.scalar is None else [{"value": self.scalar}]
            doc = {"params": self.params, "rows": rows, "flags": sorted(set(self.flags))}
            return json.dumps(_json_safe(doc), indent=2, allow_nan=False) + "\n"
        if self.scalar is not None:
            return _fmt(self.scalar) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.rows:
            header = list(self.rows[0])
            writer.writerow(header)
            for row in self.rows:
                writer.writerow([_fmt(row[k]) for k in header])
        return buf.getvalue()


def _json_safe(v):
    # strict JSON has no inf/nan; spell them as strings
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_function(spec: str, dp=None, ctrl=None):
    """Turn a function spec string into an evaluator."""
    kind, _, rest = spec.partition(":")
    if kind == "poly":
        try:
            return PolynomialRep([float(c) for c in rest.split(",")])
        except ValueError:
            raise UsageError(f"bad polynomial coefficients in {spec!r}")
    if kind == "named":
        if rest.startswith("const:"):
            try:
                c = float(rest[len("const:"):])
            except ValueError:
                raise UsageError(f"bad constant in {spec!r}")
            return Evaluator(lambda x: c, note=f"constant {c!r}")
        classical = {"sin": math.sin, "cos": math.cos, "exp": math.exp}
        if rest in classical:
            return Evaluator(classical[rest], note=rest)
        if rest in ("qsin", "qcos", "qexp"):
            if dp is None:
                raise UsageError(f"{spec!r} needs --q")
            return QSeries(SeriesKind(rest), dp, ctrl or SummationControl(tol=1e-16))
    raise UsageError(f"unrecognised function spec {spec!r}")


def _common(args):
    ctrl = SummationControl(
        tol=args.tol,
        max_terms=args.max_terms,
        magnitude_bound=args.magnitude_bound,
        on_divergence="error" if args.on_divergence == "error" else "return_partial_with_flag",
    )
    params = {"q": args.q, "tol": args.tol, "max_terms": args.max_terms, "magnitude_bound": args.magnitude_bound}
    return ctrl, params


def cmd_qnum(args, dp, ctrl, out):
    if args.n is not None:
        if args.what == "bracket":
            out.scalar = q_bracket(args.n, dp)
        elif args.what == "factorial":
            out.scalar = float(q_factorials(args.n, dp)[-1])
        else:
            out.scalar = q_bracket_classical_gap(args.n, dp)
        out.params.update(n=args.n, what=args.what)
        return
    nmax = args.n_max
    br = q_brackets(nmax, dp)
    try:
        fact = q_factorials(nmax, dp).tolist()
    except QRangeError:
        fact = None
        out.flags.append("factorial_overflow")
    out.params.update(n_max=nmax)
    for n in range(nmax + 1):
        row = {"n": n, "bracket": float(br[n]), "gap": abs(float(br[n]) - n)}
        if fact is not None:
            row["factorial"] = fact[n]
        out.rows.append(row)


def cmd_deriv(args, dp, ctrl, out):
    f = parse_function(args.fn, dp)
    out.params.update(fn=args.fn)
    for x in args.x:
        out.rows.append({"x": x, "derivative": float(jackson_derivative(f, dp, x))})


def cmd_integrate(args, dp, ctrl, out):
    f = parse_function(args.fn, dp)
    out.params.update(fn=args.fn, kind=args.kind)
    if args.kind == "finite":
        _need(args, "b")
        res = jackson_integral(f, dp, args.b, ctrl)
        out.params.update(b=args.b)
    elif args.kind == "interval":
        _need(args, "a", "b")
        res = jackson_integral_interval(f, dp, args.a, args.b, ctrl)
        out.params.update(a=args.a, b=args.b)
    elif args.kind == "improper":
        res = jackson_integral_improper(f, dp, ctrl)
    else:
        res = jackson_integral_real_line(f, dp, ctrl)
    out.flags.extend(res.flags)
    if args.format == "json":
        out.rows.append(
            {
                "value": res.value,
                "terms_used": res.terms_used,
                "tail_estimate": res.tail_estimate,
                "converged": res.converged,
            }
        )
    else:
        out.scalar = res.value


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for --kind {args.kind}")


def cmd_lattice(args, dp, ctrl, out):
    f = parse_function(args.fn, dp) if args.fn else None
    out.params.update(scale=args.scale, n_lo=args.n_lo, n_hi=args.n_hi, sign=args.sign, fn=args.fn)
    out.rows.extend(lattice_table(dp, args.scale, args.n_lo, args.n_hi, args.sign, f))


def cmd_fock(args, dp, ctrl, out):
    out.params.update(dim=args.dim, table=args.table)
    if args.table == "eigen":
        out.rows.extend(eigen_gap_table(dp, args.dim))
        return
    ops = build_truncated(dp, args.dim)
    if args.table == "residuals":
        r = algebra_residuals(ops)
        out.rows.append({"r1": r.r1, "r2": r.r2, "r3": r.r3})
        return
    for name in ("lowering", "raising", "number", "q_number"):
        m = getattr(ops, name)
        for i in range(ops.dim):
            for j in range(ops.dim):
                out.rows.append({"matrix": name, "i": i, "j": j, "value": float(m[i, j])})


def _grid(args):
    if args.x is not None:
        return args.x
    if args.x_min is None or args.x_max is None:
        raise UsageError("give --x or both --x-min and --x-max")
    return np.linspace(args.x_min, args.x_max, args.points).tolist()


def cmd_special(args, dp, ctrl, out):
    kind = SeriesKind(args.kind)
    a = args.a if args.a is not None else (-1.0 if kind is SeriesKind.Q_EXP else 1.0)
    out.params.update(kind=args.kind, a=a)
    f = QSeries(kind, dp, ctrl)
    for x in _grid(args):
        row = {"x": x, "value": f(x)}
        row["residual"] = ode_residual(kind, a, dp, x, ctrl) if x != 0 else float("nan")
        out.rows.append(row)
    if any(math.isnan(r["residual"]) for r in out.rows):
        out.flags.append("residual_undefined_at_0")
        for r in out.rows:
            if math.isnan(r["residual"]):
                r["residual"] = None


def cmd_solve(args, dp, ctrl, out):
    out.params.update(mode=args.mode, fn=args.fn, b=args.b, depth=args.depth)
    f = parse_function(args.fn, dp)
    if args.mode == "recover":
        sol = recover_integrand(f, dp, args.b, args.depth)
        out.rows.extend(sol.rows())
        out.params.update(reintegrated=sol.reintegrate(dp), target=float(f(args.b)))
        return
    b, q = args.b, dp.q
    lo, hi = b * q**3, b * q
    spike = b * q
    half = 0.25 * spike * (1 - q**2)
    weight = (dp.q_inv - q) * spike
    cases = [
        ("identical", f),
        ("off_lattice_bump", Evaluator(lambda x: f(x) + bump(lo, hi, 1.0)(x))),
        ("on_lattice_spike", Evaluator(lambda x: f(x) + plateau(spike - half, spike + half, args.eps)(x))),
    ]
    expected = [0.0, 0.0, weight * args.eps]
    out.params.update(eps=args.eps)
    for (name, g), exp in zip(cases, expected):
        rep = uniqueness_check(f, g, dp, b, args.depth, 0.0, ctrl)
        out.rows.append(
            {"perturbation": name, "same_class": rep.same_class, "integral_gap": rep.integral_gap, "expected_gap": exp}
        )


def cmd_counterexample(args, dp, ctrl, out):
    ce = monotonicity_counterexample(dp, args.a, args.b, swap=args.swap)
    out.params.update(a=args.a, b=args.b, swap=args.swap, int_f=ce.int_f, int_g=ce.int_g)
    for x in np.linspace(0.0, args.b, args.points).tolist():
        out.rows.append({"x": x, "f": ce.f_spec(x), "g": ce.g_spec(x), "int_f": ce.int_f, "int_g": ce.int_g})


def cmd_limit_study(args, dp, ctrl, out):
    out.params.update(qs=args.qs, n=args.n, x=args.x)
    for q in args.qs:
        d = DeformationParameter(q)
        out.rows.append(
            {
                "q": q,
                "bracket_gap": q_bracket_classical_gap(args.n, d),
                "derivative_dev": abs(jackson_derivative(math.sin, d, args.x) - math.cos(args.x)),
                "commutator_dev": q_commutator_xp(args.n, d).deviation,
                "qexp_dev": abs(q_exp(args.x, d) - math.exp(args.x)),
            }
        )


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12, help="absolute truncation tolerance")
    common.add_argument("--max-terms", type=int, default=10000)
    common.add_argument("--magnitude-bound", type=float, default=1e6, help="assumed bound M on |f|")
    common.add_argument("--on-divergence", choices=("error", "partial"), default="error")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    needs_q = argparse.ArgumentParser(add_help=False, parents=[common])
    needs_q.add_argument("--q", type=float, required=True, help="deformation parameter in (0,1)")

    p = argparse.ArgumentParser(prog="qcalc", description="Symmetric q-deformed (Jackson) calculus.")
    p.add_argument("--version", action="version", version=f"qcalc {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("qnum", parents=[needs_q], help="q-brackets and q-factorials")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--n-max", type=int)
    s.add_argument("--what", choices=("bracket", "factorial", "gap"), default="bracket")
    s.set_defaults(handler=cmd_qnum)

    s = sub.add_parser("deriv", parents=[needs_q], help="Jackson derivative at points")
    s.add_argument("--fn", required=True)
    s.add_argument("--x", type=_floats, required=True)
    s.set_defaults(handler=cmd_deriv)

    s = sub.add_parser("integrate", parents=[needs_q], help="Jackson integrals")
    s.add_argument("--fn", required=True)
    s.add_argument("--kind", choices=("finite", "interval", "improper", "real-line"), default="finite")
    s.add_argument("--a", type=float)
    s.add_argument("--b", type=float)
    s.set_defaults(handler=cmd_integrate)

    s = sub.add_parser("lattice", parents=[needs_q], help="lattice point and weight tables")
    s.add_argument("--scale", type=float, default=1.0)
    s.add_argument("--n-lo", type=int, default=0)
    s.add_argument("--n-hi", type=int, default=10)
    s.add_argument("--sign", choices=("positive", "negative", "both"), default="positive")
    s.add_argument("--fn")
    s.set_defaults(handler=cmd_lattice)

    s = sub.add_parser("fock", parents=[needs_q], help="truncated oscillator matrices and residuals")
    s.add_argument("--dim", type=int, default=10)
    s.add_argument("--table", choices=("matrices", "residuals", "eigen"), default="eigen")
    s.set_defaults(handler=cmd_fock)

    s = sub.add_parser("special", parents=[needs_q], help="q-exp/q-sin/q-cos tables with ODE residuals")
    s.add_argument("--kind", choices=("qexp", "qsin", "qcos"), required=True)
    s.add_argument("--x", type=_floats)
    s.add_argument("--x-min", type=float)
    s.add_argument("--x-max", type=float)
    s.add_argument("--points", type=int, default=11)
    s.add_argument("--a", type=float, help="ODE coefficient (default 1, or -1 for qexp)")
    s.set_defaults(handler=cmd_special)

    s = sub.add_parser("solve", parents=[needs_q], help="integrand recovery and uniqueness demo")
    s.add_argument("--mode", choices=("recover", "uniqueness"), default="recover")
    s.add_argument("--fn", required=True)
    s.add_argument("--b", type=float, default=1.0)
    s.add_argument("--depth", type=int, default=10)
    s.add_argument("--eps", type=float, default=0.01)
    s.set_defaults(handler=cmd_solve)

    s = sub.add_parser("counterexample", parents=[needs_q], help="monotonicity failure of interval integrals")
    s.add_argument("--a", type=float, default=0.8)
    s.add_argument("--b", type=float, default=1.0)
    s.add_argument("--points", type=int, default=201)
    s.add_argument("--swap", action="store_true")
    s.set_defaults(handler=cmd_counterexample)

    s = sub.add_parser("limit-study", parents=[common], help="deviations from classical values as q -> 1")
    s.add_argument("--q", type=float, default=None, help=argparse.SUPPRESS)
    s.add_argument("--qs", type=_floats, default=[0.9, 0.99, 0.999, 0.9999])
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--x", type=float, default=1.0)
    s.set_defaults(handler=cmd_limit_study)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        ctrl, params = _common(args)
        dp = DeformationParameter(args.q) if args.q is not None else None
        out = Output(params)
        args.handler(args, dp, ctrl, out)
        text = out.render(args.format)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"qcalc: error: {exc}", file=stderr)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"qcalc: divergence: {exc}", file=stderr)
        return EXIT_DIVERGENCE
    except (QDomainError, QRangeError, QCalcError) as exc:
        print(f"qcalc: error: {exc}", file=stderr)
        return EXIT_DOMAIN
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
