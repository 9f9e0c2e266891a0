from fractions import Fraction

import pytest
import sympy

from sepprob.constants import BY_NAME, FACTORIZATIONS, REFERENCE, factorization_holds, halving_holds
from sepprob.series import p_eval


@pytest.mark.parametrize("const", REFERENCE, ids=lambda c: c.name)
def test_fifty_digit_literals(const):
    assert const.digits_match(50)


@pytest.mark.parametrize("const", REFERENCE, ids=lambda c: c.name)
def test_literals_against_sympy(const):
    # a second, independent evaluation of every symbolic definition
    expr = sympy.sympify(const.symbolic.replace("^", "**").replace("Gamma", "gamma"))
    ref = sympy.N(expr, 60)
    lit = sympy.Float(const.decimal, 60)
    assert abs(ref - lit) <= abs(ref) * sympy.Float("1e-49")


@pytest.mark.parametrize("n, powers", list(FACTORIZATIONS.items()))
def test_factorizations(n, powers):
    assert factorization_holds(n, powers)
    assert sympy.factorint(n) == powers


def test_factorization_check_detects_errors():
    assert not factorization_holds(61931520, {2: 15, 3: 3, 5: 1, 7: 1})


def test_halving():
    assert halving_holds()
    assert BY_NAME["boundary real"].exact == Fraction(29, 128)


@pytest.mark.parametrize("name, alpha", [("P(1/2)", "1/2"), ("P(1)", "1"), ("P(2)", "2"), ("P(-1/2)", "-1/2"), ("P(-1/3)", "-1/3")])
def test_constants_agree_with_series(name, alpha):
    enc = p_eval(alpha, Fraction(1, 10**18)).bounded()
    c = BY_NAME[name]
    assert enc.contains(c.exact if c.exact is not None else c.value())


def test_provenance_present():
    assert all(c.provenance and c.symbolic for c in REFERENCE)
