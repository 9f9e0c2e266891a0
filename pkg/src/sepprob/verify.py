"""Registry of checkable numeric claims with their tolerances.

Each claim evaluates something with the engines of this package and
compares it against a reference constant or an independent oracle. The
result records the expected value, the computed value, the certified (or
statistical) bound and whether the claim holds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath.ctx_mp import MPContext

from . import constants
from .recon import DEFAULT_INTERVAL, beta_moments, legendre_coefficients, separability_from_moments, uniform_moments
from .series import (
    LIMIT_RATIO,
    grid_table,
    p_derivative,
    p_eval,
    telescoping_check,
    term_f_real,
    term_ratio,
    to_fraction,
)
from .states import DivisionAlgebra, bell_state, maximally_mixed, pt_determinant, run_mc

MC_SAMPLES = 10_000_000
MC_SEED = 7
MC_MOMENT_ORDER = 20
RECON_DEGREE = 10
TELESCOPING_POINTS = ("0", "1/2", "1", "3/2", "2", "5", "31")


@dataclass
class ClaimResult:
    claim: str
    expected: str
    computed: str
    bound: str
    passed: bool
    criterion: int
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"claim": self.claim, "expected": self.expected, "computed": self.computed, "bound": self.bound, "pass": self.passed}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{status}] {self.claim}: computed {self.computed} expected {self.expected} bound {self.bound}{extra}"


def _s(x, digits: int = 25) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, bool)):
        return str(x)
    if isinstance(x, float):
        return f"{x:.17g}"
    return mpmath.nstr(x, digits)


def _ref(name: str):
    c = constants.BY_NAME[name]
    return c.exact if c.exact is not None else c.value()


@dataclass
class Verifier:
    """Runs claims; expensive Monte Carlo output is computed once per algebra."""

    samples: int = MC_SAMPLES
    seed: int = MC_SEED
    threads: int = 1
    precision_bits: int = 256
    _mc: dict = field(default_factory=dict, repr=False)

    def mc(self, algebra: DivisionAlgebra):
        if algebra not in self._mc:
            t0 = time.perf_counter()
            run = run_mc(algebra, self.samples, self.seed, self.threads, moment_order=MC_MOMENT_ORDER)
            self._mc[algebra] = (run, time.perf_counter() - t0)
        return self._mc[algebra]

    # ------------------------------------------------------------ series

    def _value_claim(self, name, alpha, tol, criterion, time_limit=None) -> ClaimResult:
        expected = _ref(name)
        t0 = time.perf_counter()
        ev = p_eval(alpha, tol, self.precision_bits if criterion == 1 else None)
        dt = time.perf_counter() - t0
        enc = ev.bounded()
        ok = enc.contains(expected) and to_fraction(enc.abs_error) <= tol
        detail = f"{ev.terms_used} terms"
        if time_limit is not None:
            ok = ok and dt < time_limit
            detail += f", time limit {time_limit} s"
        return ClaimResult(name, _s(expected), _s(enc.value, 40), _s(enc.abs_error, 3), ok, criterion, detail)

    def _derivative_claim(self, name, alpha, order, tol) -> ClaimResult:
        expected = _ref(name)
        d = p_derivative(alpha, order, tol)
        ok = d.contains(expected) and to_fraction(d.abs_error) <= tol
        return ClaimResult(name, _s(expected, 40), _s(d.value, 40), _s(d.abs_error, 3), ok, 3)

    def telescoping(self) -> ClaimResult:
        tol = Fraction(1, 10**30)
        worst = 0
        ok = True
        for a in TELESCOPING_POINTS:
            r = telescoping_check(a, tol)
            worst = max(worst, to_fraction(r.residual) + to_fraction(r.bound))
            ok = ok and r.passed and to_fraction(r.residual) + to_fraction(r.bound) < tol
        return ClaimResult(
            "telescoping", "0", "residual+bound max", _s(mpmath.mpf(worst.numerator) / worst.denominator, 3), ok, 4,
            "alpha in " + ", ".join(TELESCOPING_POINTS),
        )

    def ratio_limit(self) -> ClaimResult:
        r = term_ratio(1000)
        gap = abs(r - LIMIT_RATIO)
        return ClaimResult("ratio-limit", _s(LIMIT_RATIO), _s(mpmath.mpf(r.numerator) / r.denominator), _s(float(gap)), gap < Fraction(1, 100), 5)

    def grid(self) -> ClaimResult:
        t0 = time.perf_counter()
        rows = grid_table(32, 0, Fraction(1, 10**50))
        dt = time.perf_counter() - t0
        body = [r for r in rows if r.alpha.twice_alpha >= 1]
        values = [r.rational for r in body]
        tails = max(to_fraction(r.evaluation.tail_bound) for r in body)
        ok = (
            len(body) == 64
            and all(r.evaluation.is_exact for r in body)
            and tails < Fraction(1, 10**50)
            and all(v > 0 for v in values)
            and all(u > v for u, v in zip(values, values[1:]))
            and dt < 60
        )
        return ClaimResult(
            "grid-table", "64 exact, decreasing, positive", f"{len(body)} rows, P(32)={float(values[-1]):.6g}",
            _s(float(tails), 3), ok, 6, "time limit 60 s",
        )

    # ------------------------------------------------------------ Monte Carlo

    def mc_claim(self, algebra: DivisionAlgebra) -> ClaimResult:
        run, _ = self.mc(algebra)
        expected = _ref({DivisionAlgebra.REAL: "P(1/2)", DivisionAlgebra.COMPLEX: "P(1)", DivisionAlgebra.QUATERNION: "P(2)"}[algebra])
        est = run.estimate
        z = est.z_score(float(expected))
        return ClaimResult(
            f"mc-{algebra.value}", _s(expected), _s(est.probability_estimate), _s(3 * est.standard_error, 3), abs(z) < 3, 7,
            f"z={z:+.3f}, n={est.samples}, seed={est.seed}, ties={est.ties}",
        )

    def det_range(self) -> ClaimResult:
        lo, hi, ok = math.inf, -math.inf, True
        for alg in DivisionAlgebra:
            est = self.mc(alg)[0].estimate
            lo, hi = min(lo, est.det_min), max(hi, est.det_max)
            ok = ok and est.det_in_range
        return ClaimResult("det-range", "[-1/16, 1/256]", f"[{lo:.10g}, {hi:.10g}]", "1e-10", ok, 8, f"{3 * self.samples} samples")

    def det_reference(self) -> ClaimResult:
        bell = [pt_determinant(bell_state(alg)) for alg in DivisionAlgebra]
        mixed = [pt_determinant(maximally_mixed(alg)) for alg in DivisionAlgebra]
        err = max([abs(v + 1 / 16) for v in bell] + [abs(v - 1 / 256) for v in mixed])
        return ClaimResult(
            "det-reference-states", "-1/16 (Bell), 1/256 (mixed)", f"{bell[0]:.17g}, {mixed[0]:.17g}", f"{err:.3g}",
            err < 1e-12, 8, "all three algebras",
        )

    # ------------------------------------------------------------ reconstruction

    def recon_degree0(self) -> ClaimResult:
        m = uniform_moments(4)
        v = separability_from_moments(m, 0)
        v2 = separability_from_moments(beta_moments(2, 3, 4), 0)
        ok = v == Fraction(1, 17) and v2 == Fraction(1, 17)
        return ClaimResult("recon-degree0", "1/17", _s(v), "0", ok, 9, "exact rational mode")

    def recon_beta(self) -> ClaimResult:
        a, b = DEFAULT_INTERVAL
        rec = legendre_coefficients(beta_moments(2, 3, 20), 20)

        def cdf(x):
            u = (x - a) / (b - a)
            return 6 * u**2 - 8 * u**3 + 3 * u**4

        def pdf(x):
            u = (x - a) / (b - a)
            return 12 * u * (1 - u) ** 2 / (b - a)

        pts = [a + (b - a) * Fraction(k, 64) for k in range(65)]
        cdf_err = max(abs(rec.cumulative(a, x) - cdf(x)) for x in pts)
        pdf_err = max(abs(rec.density(x) - pdf(x)) for x in pts)
        ok = cdf_err < Fraction(1, 10**6) and pdf_err < Fraction(1, 10**6)
        return ClaimResult("recon-beta", "Beta(2,3) CDF", f"max CDF error {float(cdf_err):.3g}", "1e-06", ok, 9, f"density error {float(pdf_err):.3g}, d=20")

    def recon_mc(self, algebra: DivisionAlgebra, degree: int = RECON_DEGREE) -> ClaimResult:
        run, _ = self.mc(algebra)
        name = {DivisionAlgebra.REAL: "P(1/2)", DivisionAlgebra.COMPLEX: "P(1)", DivisionAlgebra.QUATERNION: "P(2)"}[algebra]
        tol = 0.005 if algebra is DivisionAlgebra.QUATERNION else 0.01
        expected = _ref(name)
        m = run.moments.moment_sequence()
        est = separability_from_moments(m, degree)
        err = est - expected
        at20 = separability_from_moments(m, MC_MOMENT_ORDER)
        return ClaimResult(
            f"recon-mc-{algebra.value}", _s(expected), f"{float(est):.6f}", f"{tol:g}", abs(err) < tol, 9,
            f"d={degree}, error {float(err):+.4f}; d={MC_MOMENT_ORDER} gives {float(at20):.6f}",
        )

    # ------------------------------------------------------------ poles

    def pole_zero(self) -> ClaimResult:
        v = term_f_real(Fraction(-3, 2))
        oracle = _limit_oracle(mpmath.mpf(-3) / 2)
        ok = v.value == 0 and v.abs_error == 0 and abs(oracle) < 1e-18
        return ClaimResult("f(-3/2)", "0", _s(v.value), _s(v.abs_error), ok, 10, f"limit oracle {_s(oracle, 5)}")

    def pole_residue(self) -> ClaimResult:
        v = term_f_real(-1)
        oracle = _limit_oracle(mpmath.mpf(-1))
        ok = v.contains(Fraction(-3, 5)) and v.abs_error < 1e-20 and abs(oracle - v.value) < 1e-18
        return ClaimResult("f(-1)", "-3/5", _s(v.value, 30), _s(v.abs_error, 3), ok, 10, f"limit oracle {_s(oracle, 22)}")

    # ------------------------------------------------------------ constants

    def volumes(self) -> ClaimResult:
        ok = all(constants.factorization_holds(n, p) for n, p in constants.FACTORIZATIONS.items())
        shown = "; ".join(f"{n}={'*'.join(f'{p}^{e}' for p, e in pw.items())}" for n, pw in constants.FACTORIZATIONS.items())
        return ClaimResult("volumes", "factorizations", "hold" if ok else "fail", "exact", ok, 11, shown)

    def constant_digits(self) -> ClaimResult:
        bad = [c.name for c in constants.REFERENCE if not c.digits_match()]
        halving = constants.halving_holds()
        return ClaimResult(
            "constants-digits", f"{len(constants.REFERENCE)} constants at 50 digits", "all match" if not bad else ",".join(bad),
            "1e-50 relative", not bad and halving, 11, "boundary values are half of P(1/2), P(1), P(2)" if halving else "halving fails",
        )

    # ------------------------------------------------------------ registry

    def registry(self) -> dict[str, Callable[[], ClaimResult]]:
        q30 = Fraction(1, 10**30)
        q20 = Fraction(1, 10**20)
        q15 = Fraction(1, 10**15)
        reg: dict[str, Callable[[], ClaimResult]] = {}
        for name, alpha in (("P(0)", "0"), ("P(1/2)", "1/2"), ("P(1)", "1"), ("P(2)", "2")):
            reg[name] = lambda n=name, a=alpha: self._value_claim(n, a, q30, 1, time_limit=5)
        for name, alpha in (("P(-1/2)", "-1/2"), ("P(-1/4)", "-1/4"), ("P(-1)", "-1"), ("P(-3/2)", "-3/2")):
            reg[name] = lambda n=name, a=alpha: self._value_claim(n, a, q20, 2)
        reg["P(-1/3)"] = lambda: self._value_claim("P(-1/3)", "-1/3", q15, 2)
        reg["P'(1)"] = lambda: self._derivative_claim("P'(1)", 1, 1, q20)
        reg["P'(0)"] = lambda: self._derivative_claim("P'(0)", 0, 1, q20)
        reg["P''(0)"] = lambda: self._derivative_claim("P''(0)", 0, 2, q15)
        reg["telescoping"] = self.telescoping
        reg["ratio-limit"] = self.ratio_limit
        reg["grid-table"] = self.grid
        for alg in DivisionAlgebra:
            reg[f"mc-{alg.value}"] = lambda a=alg: self.mc_claim(a)
        reg["det-range"] = self.det_range
        reg["det-reference-states"] = self.det_reference
        reg["recon-degree0"] = self.recon_degree0
        reg["recon-beta"] = self.recon_beta
        for alg in DivisionAlgebra:
            reg[f"recon-mc-{alg.value}"] = lambda a=alg: self.recon_mc(a)
        reg["f(-3/2)"] = self.pole_zero
        reg["f(-1)"] = self.pole_residue
        reg["volumes"] = self.volumes
        reg["constants-digits"] = self.constant_digits
        return reg

    def run(self, claim: str) -> ClaimResult:
        reg = self.registry()
        if claim not in reg:
            raise KeyError(f"unknown claim {claim!r}; choose from {', '.join(reg)}")
        t0 = time.perf_counter()
        res = reg[claim]()
        res.seconds = time.perf_counter() - t0
        return res

    def run_all(self, claims=None) -> list[ClaimResult]:
        return [self.run(c) for c in (claims or self.registry())]


CLAIM_NAMES = tuple(Verifier().registry())


def _mp_f(ctx: MPContext, a):
    q = 185000 * a**5 + 779750 * a**4 + 1289125 * a**3 + 1042015 * a**2 + 410694 * a + 63000
    half = ctx.mpf(1) / 2
    return (
        q
        * ctx.power(2, -4 * a - 6)
        * ctx.gamma(3 * a + 5 * half)
        * ctx.gamma(5 * a + 2)
        / (3 * ctx.gamma(a + 1) * ctx.gamma(2 * a + 3) * ctx.gamma(5 * a + 13 * half))
    )


def _limit_oracle(point) -> mpmath.mpf:
    """Brute-force limit of f at a removable point from plain gamma values.

    Symmetric averages at offsets 10^-k, k = 10..20, are extrapolated by one
    Richardson step (the symmetric error is even in the offset).
    """
    ctx = MPContext()
    ctx.dps = 80
    p = ctx.mpf(point)
    sym = []
    for k in range(10, 21):
        h = ctx.mpf(10) ** -k
        sym.append((_mp_f(ctx, p + h) + _mp_f(ctx, p - h)) / 2)
    # steps differ by a factor 10, so the h^2 term is removed with weight 100
    return (100 * sym[-1] - sym[-2]) / 99
