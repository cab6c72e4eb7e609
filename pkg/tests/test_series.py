from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from permlogic.catalan import catalan
from permlogic.series import TruncatedSeries, catalan_branch, sqrt_one_minus

coeffs = st.lists(st.fractions(max_denominator=20).filter(lambda f: abs(f) < 50), min_size=1, max_size=8)


def test_branch_coefficients_are_shifted_catalan():
    b = catalan_branch(20)
    assert b[0] == 0
    for n in range(1, 21):
        assert b[n] == catalan(n - 1)


def test_branch_satisfies_quadratic():
    b = catalan_branch(30)
    assert b * b == b - TruncatedSeries.z(30)


def test_sqrt_squares_back():
    s = sqrt_one_minus(4, 25)
    assert s * s == TruncatedSeries.constant(1, 25) - TruncatedSeries.z(25) * 4


@given(coeffs, coeffs)
def test_multiplication_commutes(a, b):
    x = TruncatedSeries.from_coefficients(a, 8)
    y = TruncatedSeries.from_coefficients(b, 8)
    assert x * y == y * x


@given(coeffs, coeffs, coeffs)
def test_distributive(a, b, c):
    x, y, w = (TruncatedSeries.from_coefficients(v, 8) for v in (a, b, c))
    assert x * (y + w) == x * y + x * w


def test_power_matches_repeated_product():
    b = catalan_branch(12)
    assert b**3 == b * b * b
    assert b**0 == TruncatedSeries.constant(1, 12)


def test_coefficients_past_order_are_rejected():
    with pytest.raises((IndexError, ValueError)):
        catalan_branch(5)[6]


def test_exact_rationals():
    s = sqrt_one_minus(1, 6)
    assert s[1] == Fraction(-1, 2)
    assert s[2] == Fraction(-1, 8)
