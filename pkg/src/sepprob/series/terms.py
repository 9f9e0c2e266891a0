"""The summand f(alpha), its ratio function and the tail-ratio certificate.

f(alpha) = q(alpha) 2^(-4 alpha - 6) G(3a+5/2) G(5a+2) / (3 G(a+1) G(2a+3) G(5a+13/2))

where G is the gamma function and q is the quintic below.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
from mpmath.ctx_iv import MPIntervalContext

from .gammas import frac_interval, gamma_half_exact, gamma_shift, log_gamma, rising
from .types import BoundedReal, GridAlpha, RationalLike, to_fraction

# ascending powers
Q_COEFFS = (63000, 410694, 1042015, 1289125, 779750, 185000)

# gamma factors as (slope, offset): argument = slope * alpha + offset
NUM_FACTORS = ((3, Fraction(5, 2)), (5, Fraction(2)))
DEN_FACTORS = ((1, Fraction(1)), (2, Fraction(3)), (5, Fraction(13, 2)))

LIMIT_RATIO = Fraction(27, 64)
_CAPS = (LIMIT_RATIO, Fraction(7, 16), Fraction(1, 2), Fraction(3, 4))
_MAX_RAY_SHIFT = 512


class NonRemovableSingularity(ArithmeticError):
    """The summand has an uncancelled gamma pole at the requested point."""

    def __init__(self, alpha, factor: str):
        super().__init__(f"f has a non-removable pole at alpha={alpha} (from {factor})")
        self.alpha = alpha
        self.factor = factor


class TailCertificationError(ArithmeticError):
    """No ratio cap below one could be proven along the summation ray."""


def _horner(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def q_poly(alpha):
    """Quintic factor of the summand; exact for exact input."""
    if isinstance(alpha, str):
        alpha = to_fraction(alpha)
    return _horner(Q_COEFFS, alpha)


Q_PRIME = tuple(k * c for k, c in enumerate(Q_COEFFS))[1:]
Q_SECOND = tuple(k * c for k, c in enumerate(Q_PRIME))[1:]


def q_prime(alpha):
    return _horner(Q_PRIME, alpha)


def q_second(alpha):
    return _horner(Q_SECOND, alpha)


def _factor_name(slope: int, offset: Fraction) -> str:
    return f"Gamma({slope}*alpha+{offset})" if slope != 1 else f"Gamma(alpha+{offset})"


def term_f_exact(alpha: GridAlpha | RationalLike) -> Fraction:
    """Exact value of f on the nonnegative half-integer grid.

    Every gamma is expanded as a rising factorial from 1 or 1/2 so the
    sqrt(pi) powers cancel symbolically.
    """
    if not isinstance(alpha, GridAlpha):
        alpha = GridAlpha.from_value(alpha)
    a = alpha.value
    coef = Fraction(q_poly(a), 3) * Fraction(1, 2 ** int(4 * a + 6))
    pi_power = 0
    for slope, offset in NUM_FACTORS:
        c, e = gamma_half_exact(slope * a + offset)
        coef *= c
        pi_power += e
    for slope, offset in DEN_FACTORS:
        c, e = gamma_half_exact(slope * a + offset)
        coef /= c
        pi_power -= e
    if pi_power != 0:
        raise AssertionError(f"sqrt(pi) powers failed to cancel at alpha={a}")
    return coef


def _f_interval(ctx: MPIntervalContext, a: Fraction, with_q: bool = True):
    """Enclosure of f(a) in ``ctx``; exact zero is returned as ``Fraction(0)``.

    ``with_q=False`` drops the polynomial factor.
    """
    num_poles: list[str] = []
    den_poles: list[str] = []
    rational = Fraction(q_poly(a) if with_q else 1, 3)
    log_part = None

    def gamma_piece(slope, offset, sign):
        nonlocal rational, log_part
        x = slope * a + offset
        if x.denominator == 1 and x <= 0:
            n = int(-x)
            # Gamma(x + slope*eps) ~ (-1)^n / (n! * slope * eps)
            residue = Fraction((-1) ** n, math.factorial(n) * slope)
            rational = rational * residue if sign > 0 else rational / residue
            (num_poles if sign > 0 else den_poles).append(_factor_name(slope, offset))
            return
        n = gamma_shift(x, ctx.prec)
        shifted = log_gamma(ctx, x + n)
        corr = rising(x, n)
        if sign > 0:
            rational /= corr
            log_part = shifted if log_part is None else log_part + shifted
        else:
            rational *= corr
            log_part = -shifted if log_part is None else log_part - shifted

    for slope, offset in NUM_FACTORS:
        gamma_piece(slope, offset, +1)
    for slope, offset in DEN_FACTORS:
        gamma_piece(slope, offset, -1)

    if len(num_poles) > len(den_poles):
        raise NonRemovableSingularity(a, ", ".join(num_poles))
    if len(den_poles) > len(num_poles) or rational == 0:
        return Fraction(0)

    scale = -(4 * a + 6)
    if scale.denominator == 1:
        rational *= Fraction(2) ** int(scale)
    else:
        two = frac_interval(ctx, scale) * ctx.log(ctx.mpf(2))
        log_part = two if log_part is None else log_part + two
    value = frac_interval(ctx, rational)
    if log_part is not None:
        value = value * ctx.exp(log_part)
    return value


def term_f_real(alpha: RationalLike, precision: int = 128) -> BoundedReal:
    """Rigorous enclosure of f(alpha) for real (rational) alpha.

    Removable gamma poles are resolved by pole counting: surplus denominator
    poles give an exact zero, balanced poles use first-order residues.

    Raises
    ------
    NonRemovableSingularity
        If numerator poles outnumber denominator poles.
    """
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    a = to_fraction(alpha)
    ctx = MPIntervalContext()
    ctx.prec = precision + 16
    value = _f_interval(ctx, a)
    if isinstance(value, Fraction):
        return BoundedReal.exact(value)
    return BoundedReal.from_interval(value)


def _polymul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_from_roots(linear: Sequence[tuple[Fraction, Fraction]]) -> list[Fraction]:
    out = [Fraction(1)]
    for c0, c1 in linear:
        out = _polymul(out, [Fraction(c0), Fraction(c1)])
    return out


def _q_shifted_by_one() -> list[Fraction]:
    return taylor_shift([Fraction(c) for c in Q_COEFFS], Fraction(1))


def taylor_shift(p: Sequence[Fraction], c: Fraction) -> list[Fraction]:
    """Coefficients of ``t -> p(c + t)`` (ascending)."""
    coeffs = [Fraction(x) for x in p]
    n = len(coeffs)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            coeffs[j] += c * coeffs[j + 1]
    return coeffs


# R(x) = RATIO_NUM(x) / RATIO_DEN(x)
RATIO_NUM = _polymul(
    _q_shifted_by_one(),
    _poly_from_roots(
        [(Fraction(5, 2) + k, 3) for k in range(3)] + [(Fraction(j), 5) for j in range(2, 7)]
    ),
)
RATIO_DEN = _polymul(
    [16 * Fraction(c) for c in Q_COEFFS],
    _poly_from_roots(
        [(Fraction(1), 1), (Fraction(3), 2), (Fraction(4), 2)]
        + [(Fraction(13, 2) + j, 5) for j in range(5)]
    ),
)


def term_ratio(alpha: RationalLike) -> Fraction:
    """f(alpha+1)/f(alpha) from its closed-form rational function."""
    a = to_fraction(alpha)
    den = _horner(RATIO_DEN, a)
    if den == 0:
        raise ValueError(f"the ratio's rational form has a pole at alpha={a}")
    return _horner(RATIO_NUM, a) / den


@lru_cache(maxsize=4096)
def ratio_cap_certified(x0: Fraction, cap: Fraction) -> bool:
    """Prove ``0 <= R(x) <= cap`` for every ``x >= x0``.

    With ``t = x - x0`` the claim follows when the shifted denominator, the
    shifted numerator and ``cap*den - num`` have only nonnegative
    coefficients (and the denominator is positive at ``t = 0``).
    """
    num = taylor_shift(RATIO_NUM, x0)
    den = taylor_shift(RATIO_DEN, x0)
    if den[0] <= 0 or any(c < 0 for c in den) or any(c < 0 for c in num):
        return False
    return all(cap * d - n >= 0 for d, n in zip(den, num))


def certified_ray_start(alpha: Fraction, min_start: Fraction = Fraction(0)) -> tuple[int, Fraction]:
    """First index ``i0`` with ``alpha + i0 >= min_start`` where a cap is proven.

    Returns ``(i0, cap)``; the summands ``f(alpha + i)`` for ``i >= i0`` then
    decay at least geometrically with ratio ``cap``.
    """
    i0 = max(0, math.ceil(min_start - alpha))
    for i in range(i0, i0 + _MAX_RAY_SHIFT):
        x0 = alpha + i
        for cap in _CAPS:
            if ratio_cap_certified(x0, cap):
                return i, cap
    raise TailCertificationError(f"could not certify a ratio cap < 1 for the ray from alpha={alpha}")
