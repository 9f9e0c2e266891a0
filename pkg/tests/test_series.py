from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sepprob.series import (
    BoundedReal,
    GridAlpha,
    LIMIT_RATIO,
    NonRemovableSingularity,
    RemovablePoleDerivative,
    certified_ray_start,
    grid_table,
    p_derivative,
    p_eval,
    q_poly,
    ratio_cap_certified,
    simplest_rational,
    telescoping_check,
    term_f_exact,
    term_f_real,
    term_ratio,
    to_fraction,
    truncated_sum,
)

mpmath.mp.dps = 80


def mp_f(a):
    """Direct floating evaluation of the summand with mpmath gamma (oracle)."""
    a = mpmath.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else mpmath.mpf(a)
    q = 185000 * a**5 + 779750 * a**4 + 1289125 * a**3 + 1042015 * a**2 + 410694 * a + 63000
    return (
        q
        * mpmath.power(2, -4 * a - 6)
        * mpmath.gamma(3 * a + mpmath.mpf(5) / 2)
        * mpmath.gamma(5 * a + 2)
        / (3 * mpmath.gamma(a + 1) * mpmath.gamma(2 * a + 3) * mpmath.gamma(5 * a + mpmath.mpf(13) / 2))
    )


def mp_P(a):
    return mpmath.nsum(lambda i: mp_f(a + i), [0, mpmath.inf])


# ---------------------------------------------------------------- q and f


@pytest.mark.parametrize("alpha, expected", [(0, 63000), (1, 3769584), (-1, -54)])
def test_q_poly_values(alpha, expected):
    assert q_poly(alpha) == expected


def test_q_poly_nested_form():
    for a in [Fraction(-7, 3), Fraction(1, 2), Fraction(11)]:
        nested = a * (5 * a * (25 * a * (2 * a * (740 * a + 3119) + 10313) + 208403) + 410694) + 63000
        assert q_poly(a) == nested


def test_f_exact_known_values():
    assert term_f_exact(0) == Fraction(25, 33)
    assert term_f_exact(0) == 1 - Fraction(8, 33)
    assert term_f_exact(1) == Fraction(1726, 10659)
    assert term_f_exact(1) == Fraction(8, 33) - Fraction(26, 323)


def test_f_half_matches_independent_sums():
    half = term_f_exact(Fraction(1, 2))
    p_half = p_eval(Fraction(1, 2), Fraction(1, 10**40)).bounded()
    p_three_halves = p_eval(Fraction(3, 2), Fraction(1, 10**40)).bounded()
    assert (p_half - p_three_halves).contains(half)
    assert p_half.contains(Fraction(29, 64))


def test_f_exact_rejects_off_grid():
    with pytest.raises(ValueError):
        term_f_exact(Fraction(1, 3))
    with pytest.raises(ValueError):
        term_f_exact(Fraction(-1, 2))


@pytest.mark.parametrize("twice", range(0, 65))
def test_grid_exactness(twice):
    g = GridAlpha(twice)
    assert term_f_real(g.value, precision=128).contains(term_f_exact(g))


def test_positivity_on_grid():
    assert all(term_f_exact(GridAlpha(t)) > 0 for t in range(0, 129))


@settings(max_examples=40, deadline=None)
@given(
    num=st.integers(min_value=-400, max_value=4000),
    den=st.integers(min_value=1, max_value=97),
)
def test_f_real_encloses_mpmath(num, den):
    a = Fraction(num, den)
    args = [3 * a + Fraction(5, 2), 5 * a + 2, a + 1, 2 * a + 3, 5 * a + Fraction(13, 2)]
    assume(not any(x.denominator == 1 and x <= 0 for x in args))
    enc = term_f_real(a, precision=128)
    assert enc.abs_error < mpmath.mpf(2) ** -100 * max(1, abs(enc.value))
    assert enc.contains(mp_f(a), slack=mpmath.mpf(10) ** -60 * max(1, abs(enc.value)))


def test_f_real_precision_nesting():
    a = Fraction(-1, 3)
    coarse = term_f_real(a, precision=64)
    fine = term_f_real(a, precision=256)
    assert fine.abs_error < coarse.abs_error
    assert coarse.contains(fine.lower) and coarse.contains(fine.upper)


# ---------------------------------------------------------------- poles


def test_pole_surplus_gives_exact_zero():
    v = term_f_real(Fraction(-3, 2))
    assert v.value == 0 and v.abs_error == 0


def test_balanced_poles_use_residue_ratio():
    v = term_f_real(-1)
    assert v.contains(Fraction(-3, 5))
    assert v.abs_error < 1e-30


def test_pole_limits_brute_force():
    # approach the removable points from both sides and extrapolate
    for point, expected in [(mpmath.mpf(-1), mpmath.mpf(-3) / 5), (mpmath.mpf(-1.5), mpmath.mpf(0))]:
        for k in range(10, 21):
            h = mpmath.mpf(10) ** -k
            sym = (mp_f(point + h) + mp_f(point - h)) / 2
            assert abs(sym - expected) < 10 * h


def test_non_removable_pole_is_reported():
    # 3*alpha + 5/2 = 0 while the denominator factors stay finite
    with pytest.raises(NonRemovableSingularity) as info:
        term_f_real(Fraction(-5, 6))
    assert "3*alpha+5/2" in info.value.factor
    with pytest.raises(NonRemovableSingularity):
        p_eval(Fraction(-5, 6), Fraction(1, 10**10))


# ---------------------------------------------------------------- ratio


def test_ratio_at_zero():
    assert term_ratio(0) == Fraction(1726, 8075)
    assert term_ratio(0) == term_f_exact(1) / term_f_exact(0)


@pytest.mark.parametrize("twice", [1, 3, 10, 41, 64])
def test_ratio_matches_exact_terms(twice):
    a = Fraction(twice, 2)
    assert term_ratio(a) == term_f_exact(a + 1) / term_f_exact(a)


def test_ratio_limit():
    assert abs(term_ratio(1000) - LIMIT_RATIO) < Fraction(1, 100)
    assert abs(term_ratio(10**6) - LIMIT_RATIO) < Fraction(1, 10**6)


def test_ratio_below_one_on_sampled_range():
    assert all(term_ratio(Fraction(k, 10)) < 1 for k in range(0, 1001))


def test_ratio_cap_certificate_is_sound():
    assert ratio_cap_certified(Fraction(0), LIMIT_RATIO)
    for k in range(0, 2000, 7):
        x = Fraction(k, 3)
        assert 0 <= term_ratio(x) <= LIMIT_RATIO


def test_certificate_rejects_too_small_cap():
    assert not ratio_cap_certified(Fraction(0), Fraction(2, 5))


def test_ray_start_skips_negative_points():
    assert certified_ray_start(Fraction(-1, 3)) == (1, LIMIT_RATIO)
    assert certified_ray_start(Fraction(-3, 2))[0] == 2


# ---------------------------------------------------------------- sums


@pytest.mark.parametrize(
    "alpha, expected",
    [(0, Fraction(1)), (Fraction(1, 2), Fraction(29, 64)), (1, Fraction(8, 33)), (2, Fraction(26, 323))],
)
def test_p_eval_grid(alpha, expected):
    ev = p_eval(alpha, Fraction(1, 10**30))
    assert ev.is_exact
    assert ev.tail_bound <= mpmath.mpf(10) ** -30
    assert ev.bounded().contains(expected)


@pytest.mark.parametrize("alpha", [Fraction(1, 3), Fraction(7, 5), Fraction(-1, 4), Fraction(-2, 7), Fraction(22, 7)])
def test_p_eval_against_nsum(alpha):
    ev = p_eval(alpha, Fraction(1, 10**25))
    assert ev.abs_error <= mpmath.mpf(10) ** -25
    assert ev.bounded().contains(mp_P(alpha), slack=mpmath.mpf(10) ** -40)


def test_p_eval_nesting():
    a = Fraction(2, 3)
    loose = p_eval(a, Fraction(1, 10**15)).bounded()
    tight = p_eval(a, Fraction(1, 10**45)).bounded()
    assert loose.contains(tight.lower) and loose.contains(tight.upper)


@settings(max_examples=30, deadline=None)
@given(twice=st.integers(min_value=0, max_value=80), n=st.integers(min_value=1, max_value=40))
def test_tail_soundness(twice, n):
    g = GridAlpha(twice)
    short = truncated_sum(g, n)
    long = truncated_sum(g, 4 * n)
    # exact difference of the two partial sums never exceeds the certified tail
    assert 0 <= long.result - short.result <= to_fraction(short.tail_bound)


def test_grid_monotone_decay():
    prev = None
    for twice in range(0, 65):
        enc = p_eval(GridAlpha(twice), Fraction(1, 10**40)).bounded()
        assert enc.lower > 0
        if prev is not None:
            assert prev.lower > enc.upper
        prev = enc


def test_grid_table_small():
    rows = grid_table(3)
    assert [r.rational for r in rows[:5]] == [1, Fraction(29, 64), Fraction(8, 33), Fraction(36061, 262144), Fraction(26, 323)]


def test_simplest_rational():
    assert simplest_rational(Fraction(8, 33) - Fraction(1, 10**12), Fraction(8, 33) + Fraction(1, 10**12)) == Fraction(8, 33)
    assert simplest_rational(Fraction(-3, 10), Fraction(-1, 4)) == Fraction(-1, 4)
    assert simplest_rational(Fraction(3, 2), Fraction(5, 2)) == 2


# ---------------------------------------------------------------- derivatives


def test_first_derivative_at_one():
    d = p_derivative(1, 1, Fraction(1, 10**20))
    assert d.abs_error <= 1e-20
    assert d.contains(Fraction(-130577, 457380))


def test_first_derivative_at_zero():
    assert p_derivative(0, 1, Fraction(1, 10**20)).contains(-2)


def test_second_derivative_at_zero():
    d = p_derivative(0, 2, Fraction(1, 10**15))
    assert d.abs_error <= 1e-15
    assert d.contains(40 - 20 * mpmath.zeta(2), slack=mpmath.mpf(10) ** -40)


@pytest.mark.parametrize("alpha", [Fraction(1, 3), Fraction(5, 2), Fraction(-1, 4)])
def test_derivatives_against_finite_differences(alpha):
    h = mpmath.mpf(10) ** -12
    a = mpmath.mpf(alpha.numerator) / alpha.denominator
    fd1 = (mp_P(a + h) - mp_P(a - h)) / (2 * h)
    fd2 = (mp_P(a + h) - 2 * mp_P(a) + mp_P(a - h)) / h**2
    assert p_derivative(alpha, 1, Fraction(1, 10**20)).contains(fd1, slack=mpmath.mpf(10) ** -18)
    assert p_derivative(alpha, 2, Fraction(1, 10**15)).contains(fd2, slack=mpmath.mpf(10) ** -12)


def test_derivative_at_pole_point_rejected():
    with pytest.raises(RemovablePoleDerivative):
        p_derivative(-1, 1)


# ---------------------------------------------------------------- telescoping


@pytest.mark.parametrize("alpha", [0, Fraction(1, 2), 1, Fraction(3, 2), 2, 5, 31])
def test_telescoping_grid(alpha):
    res = telescoping_check(alpha, Fraction(1, 10**30))
    assert res.passed
    assert res.residual < Fraction(1, 10**30)
    assert res.bound < mpmath.mpf(10) ** -30


def test_telescoping_off_grid():
    res = telescoping_check(Fraction(1, 3), Fraction(1, 10**25))
    assert res.passed
    assert res.residual + res.bound < 1e-25


# ---------------------------------------------------------------- types


def test_grid_alpha_parsing():
    assert GridAlpha.from_value("3/2") == GridAlpha.from_value("1.5") == GridAlpha(3)
    assert GridAlpha.from_value(1.5).value == Fraction(3, 2)
    with pytest.raises(ValueError):
        GridAlpha.from_value("1/3")
    with pytest.raises(ValueError):
        GridAlpha(-1)


@settings(max_examples=50, deadline=None)
@given(
    x=st.fractions(min_value=-100, max_value=100, max_denominator=1000),
    y=st.fractions(min_value=-100, max_value=100, max_denominator=1000),
)
def test_bounded_real_arithmetic_encloses(x, y):
    bx, by = BoundedReal.exact(x, prec=70), BoundedReal.exact(y, prec=70)
    assert (bx + by).contains(x + y)
    assert (bx - by).contains(x - y)
    assert (bx * by).contains(x * y)
    assert (-bx).contains(-x)
