from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from toeplitz_ball.arith import (
    ONE,
    ZERO,
    GaussianRational,
    format_scalar,
    grlex_key,
    monomial_norm_sq,
    multi_indices,
    multinomial,
    parse_scalar,
    sphere_moment,
)

from oracles import ball2_radial_integral, disc_integral, sphere_mc

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)
gaussians = st.builds(GaussianRational, fractions, fractions)


@pytest.mark.parametrize("k, expected", [((0, 0), 1), ((1, 1), 2), ((2, 1), 3)])
def test_multinomial_examples(k, expected):
    assert multinomial(k) == expected


def test_monomial_norm_examples():
    assert monomial_norm_sq((0,), 1) == 1
    assert monomial_norm_sq((1,), 1) == Fraction(1, 2)
    assert monomial_norm_sq((1, 1), 2) == Fraction(1, 12)


def test_monomial_norm_quadrature():
    assert disc_integral(lambda z: abs(z) ** 2) == pytest.approx(0.5, abs=1e-4)
    assert disc_integral(lambda z: abs(z) ** 6) == pytest.approx(float(monomial_norm_sq((3,), 1)), abs=1e-4)
    val = ball2_radial_integral(lambda r1, r2: r1 ** 2 * r2 ** 2)
    assert val == pytest.approx(1 / 12, abs=2e-4)
    val = ball2_radial_integral(lambda r1, r2: r1 ** 4)
    assert val == pytest.approx(float(monomial_norm_sq((2, 0), 2)), abs=2e-4)


def test_sphere_moment_examples():
    assert sphere_moment((0, 0), 2) == 1
    assert sphere_moment((1, 0), 2) == Fraction(1, 2)
    est = sphere_mc(lambda v: abs(v[0]) ** 2, 2, samples=100_000)
    assert est == pytest.approx(0.5, abs=0.01)
    est = sphere_mc(lambda v: abs(v[0]) ** 2 * abs(v[1]) ** 2, 2, samples=100_000)
    assert est == pytest.approx(float(sphere_moment((1, 1), 2)), abs=0.01)


@pytest.mark.parametrize("n, s", [(2, 2), (2, 3), (3, 2)])
def test_sphere_moment_gamma_display(n, s):
    # int |<z, zeta>|^(2s) dsigma = Gamma(N)Gamma(s+1)/Gamma(N+s) |z|^(2s), compared
    # coefficient by coefficient after expanding both sides in z^mu zbar^mu
    from toeplitz_ball.symbolic import BiPolynomial
    lhs = BiPolynomial.zero(n)
    for mu in multi_indices(n, s):
        if sum(mu) == s:
            lhs = lhs + BiPolynomial.monomial(mu, mu, multinomial(mu) ** 2 * sphere_moment(mu, n))
    c = Fraction(factorial(n - 1) * factorial(s), factorial(n + s - 1))
    assert lhs == (BiPolynomial.norm_sq(n) ** s).scale(c)
    if (n, s) == (2, 2):
        assert c == Fraction(1, 3)
        assert lhs.coeff((2, 0), (2, 0)) == Fraction(1, 3)


def test_sphere_moments_sum_to_one():
    # without the squared multinomial the sum is the integral of |zeta|^(2s) = 1
    for n in (1, 2, 3):
        for s in range(5):
            total = sum(multinomial(mu) * sphere_moment(mu, n) for mu in multi_indices(n, s) if sum(mu) == s)
            assert total == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_norm_closed_form_and_polar_consistency(n):
    for alpha in multi_indices(n, 8):
        a = sum(alpha)
        fact = 1
        for x in alpha:
            fact *= factorial(x)
        assert monomial_norm_sq(alpha, n) * Fraction(factorial(n + a), factorial(n) * fact) == 1
        assert monomial_norm_sq(alpha, n) == sphere_moment(alpha, n) * Fraction(n, n + a)


def test_grlex_order():
    idx = list(multi_indices(2, 2))
    assert idx == sorted(idx, key=grlex_key)
    assert idx[0] == (0, 0)
    assert all(sum(a) <= sum(b) for a, b in zip(idx, idx[1:]))


@given(gaussians, gaussians, gaussians)
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    if a:
        assert a * a.inverse() == ONE
    assert a.conjugate().conjugate() == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * a.conjugate()).im == 0 and (a * a.conjugate()).re == a.abs2()


@given(gaussians)
def test_scalar_text_roundtrip(a):
    text = format_scalar(a)
    assert parse_scalar(text) == a
    assert format_scalar(parse_scalar(text)) == text


def test_scalar_text_form():
    assert format_scalar(GaussianRational(Fraction(1, 2))) == "1/2"
    assert format_scalar(GaussianRational(Fraction(-3, 4), Fraction(1, 5))) == "-3/4+1/5*i"
    assert format_scalar(GaussianRational(0, -1)) == "0/1-1/1*i"
    with pytest.raises(ValueError):
        parse_scalar("one half")


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()
