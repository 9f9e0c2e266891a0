"""Command-line front end.

Every command builds a list of flat records (string values). The same
records are rendered as text, CSV or JSON, so the formats always carry
identical numbers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import constants
from .recon import choose_degree, legendre_coefficients, propagated_error, read_moments_csv
from .series import (
    GridAlpha,
    NonRemovableSingularity,
    SeriesEvaluation,
    TailCertificationError,
    grid_table,
    p_eval,
    to_fraction,
)
from .states import DivisionAlgebra, run_mc
from .verify import CLAIM_NAMES, MC_SEED, Verifier

CURVE_POINTS = 512
CURVE_STOP = 10


def parse_alpha(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def fixed_decimals(x: Fraction, digits: int) -> str:
    """``x`` rounded half-up to ``digits`` decimals."""
    scaled = x * 10**digits
    n = (abs(scaled.numerator) * 2 + scaled.denominator) // (2 * scaled.denominator)
    sign = "-" if x < 0 and n else ""
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"


def _rounded(ev: SeriesEvaluation, digits: int) -> str | None:
    enc = ev.bounded()
    lo = fixed_decimals(to_fraction(enc.lower), digits)
    hi = fixed_decimals(to_fraction(enc.upper), digits)
    return lo if lo == hi else None


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _sci(x) -> str:
    return f"{float(x):.3e}"


# ---------------------------------------------------------------- rendering


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if fmt == "csv":
        if not records:
            return ""
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(records)
        return buf.getvalue()
    blocks = []
    for r in records:
        width = max(len(k) for k in r)
        blocks.append("\n".join(f"{k.ljust(width)}  {v}" for k, v in r.items()))
    return "\n\n".join(blocks) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_eval(args) -> int:
    alpha = args.alpha
    digits = args.digits
    try:
        target = Fraction(1, 10 ** (digits + 5))
        for _ in range(4):
            ev = p_eval(alpha, target, args.precision_bits)
            text = _rounded(ev, digits)
            if text is not None:
                break
            target /= 10**10
        else:
            text = fixed_decimals(to_fraction(ev.bounded().value), digits)
    except NonRemovableSingularity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TailCertificationError as exc:
        print(f"error: convergence could not be certified: {exc}", file=sys.stderr)
        return 2
    exact = ""
    grid = GridAlpha.try_from(alpha)
    if grid is not None and ev.is_exact and to_fraction(ev.tail_bound) < Fraction(1, 10**digits):
        exact = _frac(grid_table(grid.value, grid.value, target)[0].rational)
    rec = {
        "alpha": _frac(alpha),
        "value": text,
        "error_bound": _sci(ev.bounded().abs_error),
        "terms": str(ev.terms_used),
        "exact": exact,
    }
    _emit(render([rec], args.format), args.out)
    return 0


def _curve_records(stop=CURVE_STOP, points=CURVE_POINTS) -> list[dict]:
    out = []
    for k in range(points):
        a = Fraction(stop * k, points - 1)
        ev = p_eval(a, Fraction(1, 10**20))
        out.append({"x": f"{float(a):.17g}", "y": f"{float(ev.bounded().value):.17g}"})
    return out


def cmd_table(args) -> int:
    rows = grid_table(args.stop, args.start, Fraction(1, 10**50))
    records = [
        {"alpha": _frac(r.alpha.value), "P": _frac(r.rational), "decimal": fixed_decimals(r.rational, args.digits)}
        for r in rows
    ]
    _emit(render(records, args.format), args.out)
    curve = args.curve
    if curve is None and args.out:
        p = Path(args.out)
        curve = str(p.with_name(p.stem + "_curve.csv"))
    if curve:
        Path(curve).write_text(render(_curve_records(), "csv"))
    return 0


def cmd_mc(args) -> int:
    algebra = DivisionAlgebra.parse(args.algebra)
    order = args.max_order if args.out else 0
    run = run_mc(algebra, args.samples, args.seed, args.threads, moment_order=order)
    est = run.estimate
    exact = p_eval(algebra.alpha, Fraction(1, 10**30)).bounded()
    ref = float(exact.value)
    rec = {
        "algebra": algebra.value,
        "alpha": _frac(algebra.alpha),
        "samples": str(est.samples),
        "seed": str(est.seed),
        "estimate": f"{est.probability_estimate:.17g}",
        "stderr": f"{est.standard_error:.17g}",
        "closed_form": f"{ref:.17g}",
        "z_score": f"{est.z_score(ref):.6f}",
        "ties": str(est.ties),
        "det_min": f"{est.det_min:.17g}",
        "det_max": f"{est.det_max:.17g}",
    }
    if args.out:
        Path(args.out).write_text(run.moments.to_csv())
        rec["moments_file"] = args.out
    sys.stdout.write(render([rec], args.format))
    return 0


def cmd_reconstruct(args) -> int:
    try:
        m = read_moments_csv(args.moments)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read moments: {exc}", file=sys.stderr)
        return 2
    degree = args.degree if args.degree is not None else choose_degree(m, args.tolerance)
    if degree > m.order:
        print(f"error: degree {degree} exceeds moment order {m.order}", file=sys.stderr)
        return 2
    rec = legendre_coefficients(m, degree)
    mass = rec.cumulative(0, m.interval[1])
    prefix = Path(args.out) if args.out else Path(args.moments).with_suffix("")
    lam_path = prefix.with_name(prefix.name + "_lambda.csv")
    dens_path = prefix.with_name(prefix.name + "_density.csv")
    lam_path.write_text(rec.to_csv())
    dens_path.write_text(rec.density_csv())
    out = {
        "degree": str(degree),
        "estimate": f"{float(mass):.17g}",
        "estimate_exact": _frac(mass) if degree == 0 else "",
        "propagated_stderr": f"{propagated_error(m, degree):.6g}",
        "lambda_file": str(lam_path),
        "density_file": str(dens_path),
    }
    tag = m.metadata.get("algebra", "")
    if tag:
        alg = DivisionAlgebra.parse(tag)
        ref = float(p_eval(alg.alpha, Fraction(1, 10**30)).bounded().value)
        out["closed_form"] = f"{ref:.17g}"
        out["difference"] = f"{float(mass) - ref:+.6g}"
    sys.stdout.write(render([out], args.format))
    return 0


def cmd_verify(args) -> int:
    v = Verifier(samples=args.samples, seed=args.seed, threads=args.threads, precision_bits=args.precision_bits)
    claims = args.claim or None
    try:
        results = v.run_all(claims)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    if args.format == "json":
        text = json.dumps([r.to_json() for r in results], indent=2) + "\n"
    elif args.format == "csv":
        text = render([{k: str(v) for k, v in r.to_json().items()} for r in results], "csv")
    else:
        lines = [r.line() for r in results]
        failed = sum(not r.passed for r in results)
        lines.append(f"{len(results) - failed}/{len(results)} claims pass")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if all(r.passed for r in results) else 1


def cmd_constants(args) -> int:
    records = [
        {"name": c.name, "symbolic": c.symbolic, "decimal": c.decimal, "digits_ok": str(c.digits_match()), "provenance": c.provenance}
        for c in constants.REFERENCE
    ]
    for n, powers in constants.FACTORIZATIONS.items():
        form = "*".join(f"{p}^{e}" for p, e in powers.items())
        records.append(
            {"name": f"factorization {n}", "symbolic": form, "decimal": str(n),
             "digits_ok": str(constants.factorization_holds(n, powers)), "provenance": "volume denominator"}
        )
    _emit(render(records, args.format), args.out)
    ok = all(r["digits_ok"] == "True" for r in records)
    return 0 if ok else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sepprob", description="Separability-probability series, sampling and verification.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, default_format="text"):
        sp.add_argument("--format", choices=("text", "csv", "json"), default=default_format)
        sp.add_argument("--out", default=None, help="write the main output to this path")

    e = sub.add_parser("eval", help="evaluate P(alpha) with a certified error bound")
    e.add_argument("--alpha", type=parse_alpha, required=True, help='rational "p/q" or decimal')
    e.add_argument("--digits", type=int, default=30)
    e.add_argument("--precision-bits", type=int, default=None)
    common(e)
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("table", help="exact rational values on the half-integer grid")
    t.add_argument("--start", type=parse_alpha, default=Fraction(0))
    t.add_argument("--stop", type=parse_alpha, default=Fraction(32))
    t.add_argument("--digits", type=int, default=30)
    t.add_argument("--curve", default=None, help=f"write P on [0, {CURVE_STOP}] at {CURVE_POINTS} points as x,y CSV")
    common(t, "csv")
    t.set_defaults(func=cmd_table)

    m = sub.add_parser("mc", help="Monte Carlo separability estimate")
    m.add_argument("--algebra", required=True, choices=[a.value for a in DivisionAlgebra])
    m.add_argument("--samples", type=int, default=1_000_000)
    m.add_argument("--seed", type=int, default=MC_SEED)
    m.add_argument("--threads", type=int, default=1)
    m.add_argument("--max-order", type=int, default=20, help="moment order written with --out")
    m.add_argument("--format", choices=("text", "csv", "json"), default="text")
    m.add_argument("--out", default=None, help="write determinantal moments as CSV")
    m.set_defaults(func=cmd_mc)

    r = sub.add_parser("reconstruct", help="Legendre reconstruction from a moment CSV")
    r.add_argument("--moments", required=True)
    r.add_argument("--degree", type=int, default=None)
    r.add_argument("--tolerance", type=float, default=0.01, help="statistical tolerance for automatic degree choice")
    r.add_argument("--format", choices=("text", "csv", "json"), default="text")
    r.add_argument("--out", default=None, help="path prefix for the lambda and density files")
    r.set_defaults(func=cmd_reconstruct)

    v = sub.add_parser("verify", help="check every registered claim")
    v.add_argument("--claim", action="append", choices=CLAIM_NAMES, help="run only this claim (repeatable)")
    v.add_argument("--samples", type=int, default=10_000_000)
    v.add_argument("--seed", type=int, default=MC_SEED)
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--precision-bits", type=int, default=256)
    common(v)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("constants", help="reference constants and factorization checks")
    common(c)
    c.set_defaults(func=cmd_constants)
    return p


_VALUE_FLAGS = ("--alpha", "--start", "--stop")


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-1/3" as an option; bind it to its flag explicitly
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
