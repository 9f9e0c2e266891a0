"""Certified summation of P(alpha) = sum_{i>=0} f(alpha + i) and its derivatives.

Along the ray x0 + i (x0 >= 0) every summand is f(x0) times an exact
rational product of ratio values, so the partial sums are exact rationals
and only f(x0) (plus a few digamma values for derivatives) carries
rounding error. Points of the ray below x0 are summed one by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath.ctx_iv import MPIntervalContext

from .gammas import digamma, frac_interval, trigamma
from .terms import (
    DEN_FACTORS,
    NUM_FACTORS,
    TailCertificationError,
    _f_interval,
    certified_ray_start,
    q_poly,
    q_prime,
    q_second,
    term_f_exact,
    term_f_real,
    term_ratio,
)
from .types import (
    BoundedReal,
    GridAlpha,
    RationalLike,
    SeriesEvaluation,
    ceil_mpf,
    endpoints,
    make_interval,
    to_fraction,
)

DEFAULT_TARGET = Fraction(1, 10**30)
_MAX_ATTEMPTS = 6
_LN2_SLOPE = -4


class RemovablePoleDerivative(ArithmeticError):
    """Derivatives are not available at points where a gamma factor has a pole."""


def _target(x) -> Fraction:
    t = to_fraction(x)
    if t <= 0:
        raise ValueError("target_abs_error must be positive")
    return t


def working_precision(target: Fraction, terms: int, requested: int | None = None) -> int:
    """Requested bits plus ``2*log2(terms) + 32`` guard bits."""
    base = max(requested or 0, math.ceil(-math.log2(target)) + 8, 64)
    return base + 2 * math.ceil(math.log2(terms + 1)) + 32


def _estimated_terms(target: Fraction, cap: Fraction) -> int:
    return math.ceil(math.log(float(target)) / math.log(float(cap))) + 16


def _upper(x) -> Fraction:
    lo, hi = endpoints(x)
    return max(abs(to_fraction(lo)), abs(to_fraction(hi)))


def _radius(x) -> Fraction:
    lo, hi = endpoints(x)
    return (to_fraction(hi) - to_fraction(lo)) / 2


def _ray_sum(x0: Fraction, cap: Fraction, scale: Fraction, target: Fraction):
    """Exact partial sum of prod R along the ray and its tail factor.

    Stops once ``scale * T_n / (1 - cap) <= target`` where ``T_n`` is the
    first omitted product.
    """
    total = Fraction(0)
    prod = Fraction(1)
    n = 0
    while True:
        total += prod
        prod *= term_ratio(x0 + n)
        n += 1
        if scale * prod <= target * (1 - cap):
            return total, n, prod / (1 - cap)


def p_eval(
    alpha: RationalLike | GridAlpha,
    target_abs_error: RationalLike = DEFAULT_TARGET,
    precision_bits: int | None = None,
) -> SeriesEvaluation:
    """Evaluate P(alpha) with a certified absolute error.

    On the nonnegative half-integer grid the partial sum is an exact
    rational and only the (nonnegative) tail is bounded. Elsewhere the
    result is a ``BoundedReal`` that includes rounding and tail error.
    """
    a = to_fraction(alpha)
    target = _target(target_abs_error)
    i0, cap = certified_ray_start(a)
    x0 = a + i0

    if i0 == 0 and GridAlpha.try_from(a) is not None:
        f0 = term_f_exact(x0)
        total, n, tail_factor = _ray_sum(x0, cap, f0, target)
        return SeriesEvaluation(a, f0 * total, n, ceil_mpf(f0 * tail_factor))

    est = _estimated_terms(target, cap) + i0
    prec = working_precision(target, est, precision_bits)
    for _ in range(_MAX_ATTEMPTS):
        ctx = MPIntervalContext()
        ctx.prec = prec
        head = ctx.mpf(0)
        for i in range(i0):
            fi = _f_interval(ctx, a + i)
            if not isinstance(fi, Fraction):
                head += fi
            elif fi:
                head += frac_interval(ctx, fi)
        f0 = _f_interval(ctx, x0)
        total, n, tail_factor = _ray_sum(x0, cap, _upper(f0), target / 2)
        tail = ceil_mpf(_upper(f0) * tail_factor)
        value = head + f0 * frac_interval(ctx, total) + make_interval(ctx, mpmath.mpf(0), tail)
        if _radius(value) <= target:
            return SeriesEvaluation(a, BoundedReal.from_interval(value), i0 + n, tail)
        prec *= 2
    raise ArithmeticError(f"could not reach the target error at alpha={a}")


def truncated_sum(alpha: RationalLike | GridAlpha, terms: int) -> SeriesEvaluation:
    """The first ``terms`` summands on the nonnegative grid, with the certified tail.

    Exposes the same bound ``p_eval`` uses, for a caller-chosen truncation.
    """
    g = alpha if isinstance(alpha, GridAlpha) else GridAlpha.from_value(alpha)
    if terms < 1:
        raise ValueError("terms must be positive")
    x0 = g.value
    i0, cap = certified_ray_start(x0)
    if i0:
        raise TailCertificationError(f"no ratio cap certified from alpha={x0}")
    f0 = term_f_exact(g)
    total = Fraction(0)
    prod = Fraction(1)
    for n in range(terms):
        total += prod
        prod *= term_ratio(x0 + n)
    return SeriesEvaluation(x0, f0 * total, terms, ceil_mpf(f0 * prod / (1 - cap)))


def _psi_combo(ctx, x: Fraction):
    """-4 log 2 + sum of slope*psi(slope*x + offset) over the gamma factors."""
    acc = _LN2_SLOPE * ctx.log(ctx.mpf(2))
    for slope, offset in NUM_FACTORS:
        acc += slope * digamma(ctx, slope * x + offset)
    for slope, offset in DEN_FACTORS:
        acc -= slope * digamma(ctx, slope * x + offset)
    return acc


def _psi1_combo(ctx, x: Fraction):
    acc = ctx.mpf(0)
    for slope, offset in NUM_FACTORS:
        acc += slope**2 * trigamma(ctx, slope * x + offset)
    for slope, offset in DEN_FACTORS:
        acc -= slope**2 * trigamma(ctx, slope * x + offset)
    return acc


def _psi_step(x: Fraction, power: int) -> Fraction:
    # exact change of the digamma (power=1) or trigamma (power=2) combination
    # between x and x + 1, up to sign
    acc = Fraction(0)
    for sign, factors in ((1, NUM_FACTORS), (-1, DEN_FACTORS)):
        for slope, offset in factors:
            y = slope * x + offset
            acc += sign * slope**power * sum((1 / (y + k) ** power for k in range(slope)), Fraction(0))
    return acc


def _has_pole(x: Fraction) -> bool:
    for slope, offset in NUM_FACTORS + DEN_FACTORS:
        y = slope * x + offset
        if y.denominator == 1 and y <= 0:
            return True
    return False


def _head_derivative(ctx, x: Fraction, order: int):
    if _has_pole(x):
        raise RemovablePoleDerivative(f"derivative of f at the gamma pole alpha={x} is not supported")
    q0 = q_poly(x)
    g = _f_interval(ctx, x, with_q=False)
    psi = _psi_combo(ctx, x)
    q1 = frac_interval(ctx, Fraction(q_prime(x)))
    qq = frac_interval(ctx, Fraction(q0))
    if order == 1:
        return g * (q1 + qq * psi)
    q2 = frac_interval(ctx, Fraction(q_second(x)))
    return g * (q2 + 2 * q1 * psi + qq * (psi**2 + _psi1_combo(ctx, x)))


def p_derivative(
    alpha: RationalLike,
    order: int = 1,
    target_abs_error: RationalLike = Fraction(1, 10**20),
    precision_bits: int | None = None,
) -> BoundedReal:
    """Certified P'(alpha) or P''(alpha) by termwise differentiation.

    f' = f L with L = q'/q + psi-combination, and f'' = f (L^2 + L'). Along
    the ray, L(x0 + i) = L_psi(x0) + E_i with exact rational E_i, so only
    the digamma and trigamma combinations at x0 are transcendental. The tail
    uses ``|E_{n+k}| <= |E_n| + 5/x_n + 16 k / x_n`` (and an analogous bound
    for the trigamma part) together with the ratio cap.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    a = to_fraction(alpha)
    target = _target(target_abs_error)
    i0, cap = certified_ray_start(a, min_start=Fraction(1))
    x0 = a + i0
    est = _estimated_terms(target, cap) + i0
    prec = working_precision(target, est, precision_bits)
    one = Fraction(1)
    for _ in range(_MAX_ATTEMPTS):
        ctx = MPIntervalContext()
        ctx.prec = prec
        head = ctx.mpf(0)
        for i in range(i0):
            head += _head_derivative(ctx, a + i, order)
        f0 = _f_interval(ctx, x0)
        psi0 = _psi_combo(ctx, x0)
        psi1 = _psi1_combo(ctx, x0) if order == 2 else None
        f_up = _upper(f0)
        psi_up = _upper(psi0)
        psi1_up = _upper(psi1) if order == 2 else Fraction(0)

        s0 = s1 = s2 = s1p = Fraction(0)
        prod = one
        delta = Fraction(0)
        delta_p = Fraction(0)
        n = 0
        r = cap
        while True:
            x = x0 + n
            qx, q1x = q_poly(x), q_prime(x)
            e = Fraction(q1x, 1) / qx + delta
            s0 += prod
            s1 += prod * e
            if order == 2:
                ep = Fraction(q_second(x) * qx - q1x * q1x) / (qx * qx) - delta_p
                s2 += prod * e * e
                s1p += prod * ep
            delta += _psi_step(x, 1)
            if order == 2:
                delta_p += _psi_step(x, 2)
            prod *= term_ratio(x)
            n += 1

            xn = x0 + n
            en = Fraction(q_prime(xn)) / q_poly(xn) + delta
            c = psi_up + abs(en) + 5 / xn
            beta = 16 / xn
            if order == 1:
                factor = c / (1 - r) + beta * r / (1 - r) ** 2
            else:
                qn, q1n = q_poly(xn), q_prime(xn)
                epn = Fraction(q_second(xn) * qn - q1n * q1n) / (qn * qn) - delta_p
                a_p = abs(epn) + 50 / xn**2 + 16 * (1 / xn**2 + 1 / xn)
                factor = (
                    c * c / (1 - r)
                    + 2 * c * beta * r / (1 - r) ** 2
                    + beta * beta * r * (1 + r) / (1 - r) ** 3
                    + (psi1_up + a_p) / (1 - r)
                )
            tail = f_up * prod * factor
            if tail <= target / 2:
                break

        if order == 1:
            ray = psi0 * frac_interval(ctx, s0) + frac_interval(ctx, s1)
        else:
            ray = (
                (psi0**2 + psi1) * frac_interval(ctx, s0)
                + 2 * psi0 * frac_interval(ctx, s1)
                + frac_interval(ctx, s2)
                + frac_interval(ctx, s1p)
            )
        t = ceil_mpf(tail)
        value = head + f0 * ray + make_interval(ctx, mpmath.fneg(t, exact=True), t)
        if _radius(value) <= target:
            return BoundedReal.from_interval(value)
        prec *= 2
    raise ArithmeticError(f"could not reach the target error for the derivative at alpha={a}")


@dataclass(frozen=True)
class TelescopingResult:
    alpha: Fraction
    f: Fraction | BoundedReal
    residual: Fraction | mpmath.mpf
    bound: mpmath.mpf
    passed: bool


def telescoping_check(alpha: RationalLike, target_abs_error: RationalLike = DEFAULT_TARGET) -> TelescopingResult:
    """Check P(alpha) - P(alpha+1) = f(alpha) with two independent summations.

    Each side runs its own ray, ratio certificate and tail bound; nothing is
    shared between the two series.
    """
    a = to_fraction(alpha)
    target = _target(target_abs_error)
    left = p_eval(a, target / 4)
    right = p_eval(a + 1, target / 4)
    grid = GridAlpha.try_from(a)
    if left.is_exact and right.is_exact and grid is not None:
        f = term_f_exact(grid)
        residual = abs(left.result - right.result - f)
        bound = mpmath.fadd(left.tail_bound, right.tail_bound, exact=True)
        passed = residual <= to_fraction(bound)
        return TelescopingResult(a, f, residual, bound, passed)
    f = term_f_real(a, precision=working_precision(target, 1))
    diff = left.bounded() - right.bounded() - f
    residual = abs(diff.value)
    return TelescopingResult(a, f, residual, diff.abs_error, residual <= diff.abs_error)


def simplest_rational(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in ``[lo, hi]``."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_rational(-hi, -lo)
    # continued-fraction walk down the Stern-Brocot tree
    terms: list[int] = []
    while True:
        fl = math.floor(lo)
        if fl == lo:
            terms.append(fl)
            break
        if fl + 1 <= hi:
            terms.append(fl + 1)
            break
        terms.append(fl)
        lo, hi = 1 / (hi - fl), 1 / (lo - fl)
    value = Fraction(terms[-1])
    for t in reversed(terms[:-1]):
        value = t + 1 / value
    return value


def identify_rational(evaluation: SeriesEvaluation) -> Fraction:
    """Simplest rational inside the certified enclosure of ``evaluation``."""
    enc = evaluation.bounded()
    return simplest_rational(to_fraction(enc.lower), to_fraction(enc.upper))


@dataclass(frozen=True)
class GridRow:
    alpha: GridAlpha
    evaluation: SeriesEvaluation
    rational: Fraction


def grid_table(stop: RationalLike = 32, start: RationalLike = 0, target_abs_error: RationalLike = Fraction(1, 10**50)):
    """Exact-rational P values on the half-integer grid from ``start`` to ``stop``.

    Only the two anchors P(0) and P(1/2) are identified from their
    enclosures (simplest rational); every other grid value follows exactly
    from P(alpha + 1) = P(alpha) - f(alpha). Each derived rational must lie
    inside its own independently certified enclosure, otherwise
    ``ArithmeticError`` is raised. Denominators grow quickly with alpha, so
    direct identification from a fixed-width enclosure is not attempted.
    """
    lo = GridAlpha.from_value(start)
    hi = GridAlpha.from_value(stop)
    exact: dict[int, Fraction] = {}
    for parity in (0, 1):
        anchor = identify_rational(p_eval(GridAlpha(parity), target_abs_error))
        value = anchor
        for twice in range(parity, hi.twice_alpha + 1, 2):
            exact[twice] = value
            value -= term_f_exact(GridAlpha(twice))
    rows: list[GridRow] = []
    for twice in range(lo.twice_alpha, hi.twice_alpha + 1):
        g = GridAlpha(twice)
        ev = p_eval(g, target_abs_error)
        if not ev.bounded().contains(exact[twice]):
            raise ArithmeticError(f"telescoped rational for alpha={g} falls outside its certified enclosure")
        rows.append(GridRow(g, ev, exact[twice]))
    return rows
