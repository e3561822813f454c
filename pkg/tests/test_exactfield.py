"""Exact scalar layer: cyclotomic arithmetic and complex points."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbconfig.exactfield import (
    ComplexPoint,
    Cyclotomic,
    InvalidOrderError,
    OrderMismatchError,
    complex_sqrt_exact,
    complex_to_cyclotomic,
    cyclotomic_polynomial,
    euler_phi,
    format_rational,
    parse_rational,
    rational_sqrt,
)

# Textbook cyclotomic polynomials, ascending coefficients.
KNOWN_PHI = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    6: (1, -1, 1),
    12: (1, 0, -1, 0, 1),
}


def _oracle_poly_mod(poly, modulus):
    # Independent long division used to pin reduction results in tests.
    poly = [Fraction(c) for c in poly]
    modulus = [Fraction(c) for c in modulus]
    while len(poly) >= len(modulus):
        lead = poly[-1] / modulus[-1]
        shift = len(poly) - len(modulus)
        for i, c in enumerate(modulus):
            poly[shift + i] -= lead * c
        while poly and poly[-1] == 0:
            poly.pop()
    return poly


def test_cyclotomic_polynomials_match_table():
    for m, coeffs in KNOWN_PHI.items():
        assert cyclotomic_polynomial(m) == coeffs


def test_euler_phi_small_values():
    assert [euler_phi(m) for m in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_zeta3_cubes_to_one_against_long_division_oracle():
    # Oracle: x^3 reduced mod Phi_3 by independent long division.
    expected = _oracle_poly_mod([0, 0, 0, 1], KNOWN_PHI[3])
    assert expected == [Fraction(1)]
    z = Cyclotomic.zeta(3)
    assert z * z * z == Cyclotomic.one(3)
    assert z ** 3 == Cyclotomic.one(3)


def test_inverse_of_one_plus_zeta3_is_minus_zeta3():
    # Oracle: multiply the claimed inverse back, using only ring operations.
    z = Cyclotomic.zeta(3)
    a = Cyclotomic.one(3) + z
    claimed = -z
    assert a * claimed == Cyclotomic.one(3)
    assert a.inverse() == claimed


def test_primitive_root_powers_distinct_for_order_6():
    z = Cyclotomic.zeta(6)
    powers = [z ** k for k in range(6)]
    assert len(set(powers)) == 6


@pytest.mark.parametrize("m", range(1, 13))
def test_root_of_unity_relations(m):
    z = Cyclotomic.zeta(m)
    assert z ** m == Cyclotomic.one(m)
    if m >= 2:
        total = Cyclotomic.zero(m)
        for k in range(m):
            total = total + z ** k
        assert total == Cyclotomic.zero(m)


small_rationals = st.fractions(
    min_value=-3, max_value=3, max_denominator=6
)


@st.composite
def cyclotomic_elements(draw, order=None):
    m = order if order is not None else draw(st.integers(min_value=1, max_value=12))
    coeffs = draw(
        st.lists(small_rationals, min_size=euler_phi(m), max_size=euler_phi(m))
    )
    return Cyclotomic(m, coeffs)


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.data())
def test_field_laws(m, data):
    a = data.draw(cyclotomic_elements(order=m))
    b = data.draw(cyclotomic_elements(order=m))
    c = data.draw(cyclotomic_elements(order=m))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == Cyclotomic.one(m)
        assert (a / a) == Cyclotomic.one(m)


def test_order_mismatch_raises():
    with pytest.raises(OrderMismatchError):
        Cyclotomic.zeta(3) + Cyclotomic.zeta(4)
    with pytest.raises(InvalidOrderError):
        Cyclotomic.zero(0)
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.zero(5).inverse()


def test_embedding_into_larger_field():
    z6 = Cyclotomic.zeta(6)
    z12 = Cyclotomic.zeta(12)
    assert z6.embed(12) == z12 ** 2
    a = Cyclotomic(6, [Fraction(1, 2), Fraction(-2)])
    assert (a * a).embed(12) == a.embed(12) * a.embed(12)
    with pytest.raises(OrderMismatchError):
        Cyclotomic.zeta(5).embed(12)


def test_rational_serialization_round_trip():
    for text in ["3/4", "-7/2", "5", "0"]:
        assert format_rational(parse_rational(text)) == text
    a = Cyclotomic(4, [Fraction(1, 3), Fraction(-2)])
    assert Cyclotomic.from_json(4, a.to_json()) == a


def test_complex_point_exact_arithmetic():
    z = ComplexPoint.exact(Fraction(1, 2), Fraction(3))
    w = ComplexPoint.exact(2, -1)
    assert (z * w).re == Fraction(1, 2) * 2 - 3 * (-1)
    assert (z / w) * w == z
    assert z ** 3 == z * z * z
    assert (z - z) == ComplexPoint.exact(0)
    with pytest.raises(ZeroDivisionError):
        z / ComplexPoint.exact(0)


def test_complex_point_no_false_merges_at_2eps():
    # Points whose exact distance exceeds 2*eps never compare close at eps.
    eps = 1e-9
    pairs = [
        (ComplexPoint.exact(0), ComplexPoint.exact(Fraction(3, 10 ** 9))),
        (ComplexPoint.exact(1, 1), ComplexPoint.exact(1, Fraction(10 ** 9 + 3, 10 ** 9))),
    ]
    for a, b in pairs:
        assert (a - b).norm2() > Fraction(2 * eps) ** 2
        assert not a.isclose(b, eps)
        assert not a.to_approx(eps).isclose(b.to_approx(eps), eps)
        assert a.isclose(a, eps)


def test_complex_point_mode_coercion_and_eq():
    a = ComplexPoint.exact(1, 2)
    b = ComplexPoint.approx(1.0, 2.0, 1e-9)
    assert (a + b).mode == ComplexPoint.APPROX
    assert a != b  # structural equality is mode-aware
    assert a.isclose(b, 1e-9)
    assert ComplexPoint.from_json(a.to_json()) == a
    assert ComplexPoint.from_json(b.to_json()) == b


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None
    assert rational_sqrt(0) == 0


def test_complex_sqrt_exact():
    root = complex_sqrt_exact(ComplexPoint.exact(3, 4))
    assert root == ComplexPoint.exact(2, 1)
    assert root * root == ComplexPoint.exact(3, 4)
    assert complex_sqrt_exact(ComplexPoint.exact(-9)) == ComplexPoint.exact(0, 3)
    assert complex_sqrt_exact(ComplexPoint.exact(2)) is None
    assert complex_sqrt_exact(ComplexPoint.exact(1, 1)) is None
    w = ComplexPoint.exact(Fraction(2, 3), Fraction(-5, 7))
    sq = w * w
    root = complex_sqrt_exact(sq)
    assert root is not None and root * root == sq


@settings(max_examples=60, deadline=None)
@given(small_rationals, small_rationals)
def test_gaussian_rational_cyclotomic_embedding(re, im):
    z = ComplexPoint.exact(re, im)
    for order in (4, 12):
        image = complex_to_cyclotomic(z, order)
        square = complex_to_cyclotomic(z * z, order)
        assert image * image == square
