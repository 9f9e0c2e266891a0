import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import betainc

from sepprob.recon import (
    DEFAULT_INTERVAL,
    MomentSequence,
    beta_moments,
    choose_degree,
    cumulative_probability,
    float_pipeline_agrees,
    legendre_coefficients,
    legendre_monomials,
    propagated_error,
    read_moments_csv,
    separability_from_moments,
    uniform_moments,
    write_moments_csv,
)

A, B = DEFAULT_INTERVAL


def beta23_cdf(x):
    u = (x - A) / (B - A)
    return 6 * u**2 - 8 * u**3 + 3 * u**4


def beta23_pdf(x):
    u = (x - A) / (B - A)
    return 12 * u * (1 - u) ** 2 / (B - A)


def test_monomials_match_numpy():
    polys = legendre_monomials(12)
    for k, p in enumerate(polys):
        ref = np.polynomial.legendre.leg2poly([0] * k + [1])
        assert np.allclose([float(c) for c in p], ref)


@pytest.mark.parametrize("degree", [0, 1, 5, 12])
def test_uniform_gives_flat_series(degree):
    r = legendre_coefficients(uniform_moments(12), degree)
    assert r.lambdas[0] == Fraction(1, 2)
    assert all(c == 0 for c in r.lambdas[1:])


def test_degree_zero_is_uniform():
    m = beta_moments(5, 2, 6)
    r = legendre_coefficients(m, 0)
    assert r.density(Fraction(-1, 32)) == 1 / (B - A)
    assert separability_from_moments(m, 0) == Fraction(1, 17)


@pytest.mark.parametrize("degree", [0, 3, 9, 20])
def test_full_interval_mass_is_one(degree):
    r = legendre_coefficients(beta_moments(Fraction(5, 2), Fraction(7, 2), 20), degree)
    assert cumulative_probability(r, A, B) == 1


def test_polynomial_density_reproduced_exactly():
    r = legendre_coefficients(beta_moments(2, 3, 3), 3)
    for k in range(9):
        x = A + (B - A) * Fraction(k, 8)
        assert r.density(x) == beta23_pdf(x)
        assert r.cumulative(A, x) == beta23_cdf(x)


def test_beta_oracle_degree_twenty():
    r = legendre_coefficients(beta_moments(2, 3, 20), 20)
    xs = [A + (B - A) * Fraction(k, 100) for k in range(101)]
    assert max(abs(r.density(x) - beta23_pdf(x)) for x in xs) < 1e-6
    assert max(abs(r.cumulative(A, x) - beta23_cdf(x)) for x in xs) < 1e-6


def _nonpoly_cdf_error(degree):
    p, q = 2.5, 3.5
    r = legendre_coefficients(beta_moments(Fraction(5, 2), Fraction(7, 2), 40), degree)
    us = np.linspace(0.05, 0.95, 19)
    return max(abs(float(r.cumulative(A, A + (B - A) * Fraction(u))) - betainc(p, q, float(u))) for u in us)


def test_nonpolynomial_beta_against_scipy():
    assert _nonpoly_cdf_error(20) < 1e-4


def test_monotone_refinement_on_smooth_oracle():
    errs = {d: _nonpoly_cdf_error(d) for d in (5, 10, 20, 40)}
    assert errs[10] <= errs[5] and errs[20] <= errs[10] and errs[40] <= errs[20]


@pytest.mark.parametrize("degree", [5, 20, 30])
def test_float_pipeline_conditioning(degree):
    assert float_pipeline_agrees(beta_moments(Fraction(5, 2), Fraction(7, 2), 30), degree)


def test_float_mode_values():
    m = beta_moments(2, 3, 10)
    ex = separability_from_moments(m, 10)
    fl = separability_from_moments(m, 10, mode="float")
    assert abs(float(ex) - float(fl)) < 1e-30


def test_validation_errors():
    with pytest.raises(ValueError):
        legendre_coefficients(uniform_moments(3), 4)
    with pytest.raises(ValueError):
        MomentSequence([1, float("nan")])
    with pytest.raises(ValueError):
        MomentSequence([Fraction(1, 2), 0])
    with pytest.raises(ValueError):
        MomentSequence([1, Fraction(1, 2)])
    r = legendre_coefficients(uniform_moments(2), 2)
    with pytest.raises(ValueError):
        r.cumulative(0, 1)


def test_hankel_check():
    assert beta_moments(2, 3, 6).hankel_ok(3)
    # variance below zero: mu_2 < mu_1^2
    bad = MomentSequence([1, Fraction(-1, 32), Fraction(1, 10**6)])
    assert not bad.hankel_ok(2)


def test_csv_round_trip():
    m = MomentSequence([1, -0.0018, 1.1e-5], stderr=[0, 1e-6, 1e-8], metadata={"algebra": "complex", "seed": 3, "samples": 10})
    back = read_moments_csv(write_moments_csv(m))
    assert back.moments == m.moments and back.stderr == m.stderr
    assert back.metadata["algebra"] == "complex"


def test_malformed_csv():
    with pytest.raises(ValueError):
        read_moments_csv("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_moments_csv("order,moment,stderr\n0,1,0\n2,0.1,0\n")


def test_output_tables():
    r = legendre_coefficients(beta_moments(2, 3, 5), 5)
    lam = r.to_csv().splitlines()
    assert lam[0] == "k,lambda_k" and len(lam) == 7
    dens = r.density_csv().splitlines()
    assert dens[0] == "x,g(x)" and len(dens) == 1025
    x, g = r.density_grid()
    assert np.allclose(g, [float(beta23_pdf(Fraction(v))) for v in x], atol=1e-9)


def test_degree_choice():
    m = MomentSequence(uniform_moments(20).moments, stderr=[0.0] + [1e-9 * 10**-n for n in range(1, 21)])
    d_loose = choose_degree(m, 0.1)
    d_tight = choose_degree(m, 1e-12)
    assert 0 <= d_tight <= d_loose <= 20
    assert propagated_error(m, d_loose) <= 0.1
    assert choose_degree(m, 1e300) == 20
