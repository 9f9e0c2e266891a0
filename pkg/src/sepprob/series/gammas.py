"""Exact and interval gamma-family evaluations at rational arguments.

Two paths live here:

* ``gamma_half_exact`` handles half-integer arguments exactly, returning the
  rational coefficient of a power of ``sqrt(pi)``.
* ``log_gamma``, ``digamma`` and ``trigamma`` return rigorous enclosures in a
  caller-supplied interval context. Each shifts the argument to ``X >= X_min``
  with the exact recurrence and then applies the Stirling expansion, whose
  remainder for real positive ``X`` is bounded in magnitude by the first
  omitted term.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.ctx_iv import MPIntervalContext

__all__ = [
    "GammaPole",
    "rising",
    "gamma_half_exact",
    "frac_interval",
    "log_gamma",
    "gamma_shift",
    "digamma",
    "trigamma",
]


class GammaPole(ArithmeticError):
    """Raised when a gamma-family function is asked for a value at a pole."""


def rising(x: Fraction, n: int) -> Fraction:
    """Pochhammer symbol ``x (x+1) ... (x+n-1)`` in exact arithmetic."""
    num, den = x.numerator, x.denominator
    top = 1
    for k in range(n):
        top *= num + k * den
    return Fraction(top, den**n)


def _check_pole(x: Fraction) -> None:
    if x.denominator == 1 and x <= 0:
        raise GammaPole(f"gamma has a pole at {x}")


def gamma_half_exact(x: Fraction) -> tuple[Fraction, int]:
    """``Gamma(x) = c * sqrt(pi)**e`` for ``x`` in ``Z/2``; returns ``(c, e)``."""
    x = Fraction(x)
    if (2 * x).denominator != 1:
        raise ValueError(f"{x} is not a half-integer")
    _check_pole(x)
    if x.denominator == 1:
        if x > 0:
            return Fraction(math.factorial(int(x) - 1)), 0
        base = Fraction(1)
        e = 0
    else:
        base = Fraction(1, 2)
        e = 1
    if x >= base:
        return rising(base, int(x - base)), e
    # Gamma(x) = Gamma(base) / (x)_(base - x) for negative arguments
    return 1 / rising(x, int(base - x)), e


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    p, q = mpmath.bernfrac(n)
    return Fraction(int(p), int(q))


def frac_interval(ctx: MPIntervalContext, q: Fraction):
    """Outward-rounded enclosure of a rational number."""
    q = Fraction(q)
    if q.denominator == 1:
        return ctx.mpf(q.numerator)
    return ctx.mpf(q.numerator) / ctx.mpf(q.denominator)


def _x_min(prec: int) -> int:
    # Stirling terms bottom out near exp(-2*pi*X); this X leaves > prec bits.
    return int(0.12 * (prec + 16)) + 8


def gamma_shift(x: Fraction, prec: int) -> int:
    """Number of recurrence steps that lift ``x`` above the Stirling threshold."""
    return max(0, math.ceil(_x_min(prec) - x))


def _stop_threshold(prec: int) -> Fraction:
    return Fraction(1, 2 ** (prec + 8))


def _lgamma_stirling(ctx: MPIntervalContext, X: Fraction):
    tol = _stop_threshold(ctx.prec)
    series = Fraction(0)
    k = 1
    while True:
        term = _bernoulli(2 * k) / (2 * k * (2 * k - 1) * X ** (2 * k - 1))
        if abs(term) < tol:
            remainder = abs(term)
            break
        series += term
        k += 1
        if k > 4 * ctx.prec:
            raise RuntimeError("Stirling series failed to reach tolerance")
    Xi = frac_interval(ctx, X)
    base = (Xi - ctx.mpf(0.5)) * ctx.log(Xi) - Xi + ctx.log(2 * ctx.pi) / 2
    r = frac_interval(ctx, remainder)
    return base + frac_interval(ctx, series) + r * ctx.mpf([-1, 1])


def log_gamma(ctx: MPIntervalContext, x: Fraction):
    """Enclosure of ``log Gamma(x)`` for rational ``x > 0``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log_gamma requires a positive argument; use gamma_shift for the rest")
    n = gamma_shift(x, ctx.prec)
    value = _lgamma_stirling(ctx, x + n)
    if n:
        value -= ctx.log(frac_interval(ctx, rising(x, n)))
    return value


def digamma(ctx: MPIntervalContext, x: Fraction):
    """Enclosure of ``psi(x)`` for rational ``x`` away from the poles."""
    x = Fraction(x)
    _check_pole(x)
    n = gamma_shift(x, ctx.prec)
    X = x + n
    tol = _stop_threshold(ctx.prec)
    series = -Fraction(1, 2) / X
    k = 1
    while True:
        term = _bernoulli(2 * k) / (2 * k * X ** (2 * k))
        if abs(term) < tol:
            remainder = abs(term)
            break
        series -= term
        k += 1
    series -= sum((Fraction(1) / (x + j) for j in range(n)), Fraction(0))
    r = frac_interval(ctx, remainder)
    return ctx.log(frac_interval(ctx, X)) + frac_interval(ctx, series) + r * ctx.mpf([-1, 1])


def trigamma(ctx: MPIntervalContext, x: Fraction):
    """Enclosure of ``psi'(x)`` for rational ``x`` away from the poles."""
    x = Fraction(x)
    _check_pole(x)
    n = gamma_shift(x, ctx.prec)
    X = x + n
    tol = _stop_threshold(ctx.prec)
    series = 1 / X + Fraction(1, 2) / X**2
    k = 1
    while True:
        term = _bernoulli(2 * k) / X ** (2 * k + 1)
        if abs(term) < tol:
            remainder = abs(term)
            break
        series += term
        k += 1
    series += sum((Fraction(1) / (x + j) ** 2 for j in range(n)), Fraction(0))
    r = frac_interval(ctx, remainder)
    return frac_interval(ctx, series) + r * ctx.mpf([-1, 1])
