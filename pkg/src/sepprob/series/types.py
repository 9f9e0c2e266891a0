"""Value types shared by the series engine."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import mpmath
from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import from_man_exp, from_rational, mpf_pos, round_ceiling, round_floor

RationalLike = Union[Fraction, int, str, float]


def to_fraction(value: RationalLike) -> Fraction:
    """Convert ``value`` to an exact ``Fraction``.

    Strings may be ``"p/q"`` or decimal (``"1.5"``); floats are converted
    exactly from their binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite alpha: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as a rational number") from exc
    if isinstance(value, GridAlpha):
        return value.value
    if hasattr(value, "_mpf_"):
        # any mpmath context's real type
        sign, man, exp, _ = value._mpf_
        if not man and exp:
            raise ValueError(f"non-finite value: {value}")
        man, exp = (-1) ** sign * int(man), int(exp)
        return Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


def ceil_mpf(x: Fraction, prec: int = 64) -> mpmath.mpf:
    """Smallest ``prec``-bit binary float that is >= ``x``."""
    return mpmath.mp.make_mpf(from_rational(x.numerator, x.denominator, prec, round_ceiling))


def exact_mpf(man: int, exp: int = 0) -> mpmath.mpf:
    """``man * 2**exp`` as an mpf without rounding to the global precision."""
    return mpmath.mp.make_mpf(from_man_exp(man, exp))


def make_interval(ctx: MPIntervalContext, lo: mpmath.mpf, hi: mpmath.mpf):
    """Interval ``[lo, hi]`` in ``ctx``, rounded outward to ``ctx.prec`` bits."""
    a = mpf_pos(lo._mpf_, ctx.prec, round_floor)
    b = mpf_pos(hi._mpf_, ctx.prec, round_ceiling)
    return ctx.make_mpf((a, b))


def endpoints(x) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Exact binary endpoints of an interval-context number."""
    a, b = x._mpi_
    return mpmath.mp.make_mpf(a), mpmath.mp.make_mpf(b)


@dataclass(frozen=True, order=True)
class GridAlpha:
    """A point of the nonnegative half-integer lattice, stored as ``2*alpha``."""

    twice_alpha: int

    def __post_init__(self):
        if not isinstance(self.twice_alpha, int) or isinstance(self.twice_alpha, bool):
            raise TypeError("twice_alpha must be an int")
        if self.twice_alpha < 0:
            raise ValueError(f"grid alpha must be nonnegative, got twice_alpha={self.twice_alpha}")

    @classmethod
    def from_value(cls, value: RationalLike) -> "GridAlpha":
        a = to_fraction(value)
        twice = 2 * a
        if twice.denominator != 1:
            raise ValueError(f"alpha={a} is not a half-integer")
        return cls(int(twice))

    @classmethod
    def try_from(cls, value: RationalLike) -> "GridAlpha | None":
        try:
            return cls.from_value(value)
        except ValueError:
            return None

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_alpha, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice_alpha % 2 == 0

    def __add__(self, other: "GridAlpha | int") -> "GridAlpha":
        if isinstance(other, GridAlpha):
            return GridAlpha(self.twice_alpha + other.twice_alpha)
        return GridAlpha(self.twice_alpha + 2 * other)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class BoundedReal:
    """An arbitrary precision real ``value`` with a rigorous ``abs_error``.

    The represented quantity lies in ``[value - abs_error, value + abs_error]``.
    All arithmetic is carried out exactly on the binary endpoints and then
    re-centred, so enclosures never shrink below the exact result.
    """

    value: mpmath.mpf
    abs_error: mpmath.mpf

    def __post_init__(self):
        if self.abs_error < 0:
            raise ValueError("abs_error must be nonnegative")

    @classmethod
    def exact(cls, x: RationalLike, prec: int = 256) -> "BoundedReal":
        fx = to_fraction(x)
        if fx.denominator & (fx.denominator - 1) == 0:
            return cls(_exact_mpf(fx), mpmath.mpf(0))
        ctx = MPIntervalContext()
        ctx.prec = prec
        return cls.from_interval(ctx.mpf(fx.numerator) / fx.denominator)

    @classmethod
    def from_bounds(cls, lo: mpmath.mpf, hi: mpmath.mpf) -> "BoundedReal":
        if not isinstance(lo, mpmath.mpf):
            lo = exact_mpf(*_as_man_exp(lo))
        if not isinstance(hi, mpmath.mpf):
            hi = exact_mpf(*_as_man_exp(hi))
        if lo > hi:
            raise ValueError("empty enclosure")
        mid = mpmath.ldexp(mpmath.fadd(lo, hi, exact=True), -1)
        rad = mpmath.fsub(hi, mid, exact=True)
        return cls(mid, rad)

    @classmethod
    def from_interval(cls, x) -> "BoundedReal":
        return cls.from_bounds(*endpoints(x))

    @property
    def lower(self) -> mpmath.mpf:
        return mpmath.fsub(self.value, self.abs_error, exact=True)

    @property
    def upper(self) -> mpmath.mpf:
        return mpmath.fadd(self.value, self.abs_error, exact=True)

    def to_interval(self, ctx: MPIntervalContext):
        return make_interval(ctx, self.lower, self.upper)

    def contains(self, x: RationalLike | mpmath.mpf, slack: RationalLike = 0) -> bool:
        fx = to_fraction(x)
        s = to_fraction(slack)
        lo = to_fraction(self.lower)
        hi = to_fraction(self.upper)
        return lo - s <= fx <= hi + s

    def _binary(self, other, op) -> "BoundedReal":
        if not isinstance(other, BoundedReal):
            other = BoundedReal.exact(other)
        ctx = MPIntervalContext()
        ctx.prec = max(_bits(self.value), _bits(self.abs_error), _bits(other.value), _bits(other.abs_error)) + 64
        return BoundedReal.from_interval(op(self.to_interval(ctx), other.to_interval(ctx)))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binary(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __neg__(self):
        return BoundedReal(mpmath.fneg(self.value, exact=True), self.abs_error)

    def __float__(self):
        return float(self.value)

    def nstr(self, digits: int = 20) -> str:
        return mpmath.nstr(self.value, digits)

    def __repr__(self) -> str:
        return f"BoundedReal({mpmath.nstr(self.value, 25)} ± {mpmath.nstr(self.abs_error, 3)})"


def _bits(x: mpmath.mpf) -> int:
    if not x:
        return 1
    man, exp = x.man_exp
    return max(int(man).bit_length(), 1)


def _exact_mpf(fx: Fraction) -> mpmath.mpf:
    # fx has a power-of-two denominator, so the value is a finite binary float.
    return exact_mpf(fx.numerator, -(fx.denominator.bit_length() - 1))


def _as_man_exp(x) -> tuple[int, int]:
    if isinstance(x, int):
        return x, 0
    fx = Fraction(x)
    if fx.denominator & (fx.denominator - 1):
        raise ValueError(f"{x!r} is not a binary float")
    return fx.numerator, -(fx.denominator.bit_length() - 1)


@dataclass(frozen=True)
class SeriesEvaluation:
    """Outcome of a truncated summation ``sum_i f(alpha + i)``.

    ``result`` is the exact partial sum (a ``Fraction``) when the whole
    computation stayed on the rational grid, otherwise a ``BoundedReal``
    whose error already includes the tail. ``tail_bound`` bounds the
    discarded remainder, which is nonnegative in every case handled here.
    """

    alpha: Fraction
    result: Fraction | BoundedReal
    terms_used: int
    tail_bound: mpmath.mpf

    @property
    def is_exact(self) -> bool:
        return isinstance(self.result, Fraction)

    def bounded(self) -> BoundedReal:
        """Enclosure of the true sum."""
        if isinstance(self.result, Fraction):
            lo = self.result
            ctx = MPIntervalContext()
            ctx.prec = max(self.result.numerator.bit_length(), self.result.denominator.bit_length()) + 64
            a, b = endpoints(ctx.mpf(lo.numerator) / lo.denominator)
            return BoundedReal.from_bounds(a, mpmath.fadd(b, self.tail_bound, exact=True))
        return self.result

    @property
    def abs_error(self) -> mpmath.mpf:
        return self.bounded().abs_error

    @property
    def value(self) -> mpmath.mpf:
        return self.bounded().value
