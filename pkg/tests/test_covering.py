"""Covering maps: the degree-2 quotient, exponential, squaring, and the
power-difference fibration, plus the sampled verifier."""

import cmath
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from orbconfig.covering import (
    CoveringReport,
    exp_cover,
    exp_fiber,
    exp_joukowski_composite,
    in_punctured_configuration,
    joukowski_branch_points,
    joukowski_fiber,
    joukowski_map,
    power_difference_map,
    squaring_cover,
    squaring_fiber,
    verify_cover,
)
from orbconfig.exactfield import ComplexPoint
from orbconfig.orbmodel import CyclicRotation, DomainError
from orbconfig.orbit_config import MembershipError, sample_orbit_config


def pt(re, im=0) -> ComplexPoint:
    return ComplexPoint.exact(Fraction(re), Fraction(im))


small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=8)
gaussian_points = st.builds(pt, small_rationals, small_rationals)


# -- the degree-2 quotient map ---------------------------------------------


def test_quotient_map_branch_values():
    assert joukowski_map(pt(1)) == pt(0)
    assert joukowski_map(pt(-1)) == pt(Fraction(1, 2))
    assert joukowski_map(pt(0, 1)) == pt(Fraction(1, 4))


def test_quotient_map_pole():
    with pytest.raises(DomainError):
        joukowski_map(pt(0))
    with pytest.raises(DomainError):
        joukowski_map(ComplexPoint.approx(0.0, 0.0))


def test_quotient_map_modes():
    exact = joukowski_map(pt(2))
    assert exact.is_exact
    assert exact == pt(Fraction(1, 4) - Fraction(5, 16))
    loose = joukowski_map(ComplexPoint.approx(2.0, 0.0))
    assert not loose.is_exact
    assert loose.isclose(exact, 1e-12)


def test_fiber_at_quarter_is_imaginary_pair():
    fiber = joukowski_fiber(pt(Fraction(1, 4)))
    assert set(fiber) == {pt(0, 1), pt(0, -1)}
    assert all(w.is_exact for w in fiber)


def test_fiber_double_roots_at_branch_values():
    assert joukowski_fiber(pt(0)) == (pt(1),)
    assert joukowski_fiber(pt(Fraction(1, 2))) == (pt(-1),)


def test_branch_point_table():
    table = joukowski_branch_points()
    assert [(v, w, d) for v, w, d in table] == [
        (pt(0), pt(1), 2),
        (pt(Fraction(1, 2)), pt(-1), 2),
    ]


@given(gaussian_points)
def test_fiber_matches_reciprocal_pair(w):
    assume(w != pt(0) and w != pt(1) and w != pt(-1))
    v = joukowski_map(w)
    fiber = joukowski_fiber(v)
    assert set(fiber) == {w, w.inverse()}
    assert fiber[0] * fiber[1] == pt(1)


@given(gaussian_points)
def test_deck_identity_exact(w):
    assume(w != pt(0))
    assert joukowski_map(w) == joukowski_map(w.inverse())


def test_fiber_falls_back_to_floats_off_the_square_locus():
    fiber = joukowski_fiber(pt(1))
    assert len(fiber) == 2
    assert all(not w.is_exact for w in fiber)
    product = fiber[0].to_complex() * fiber[1].to_complex()
    assert abs(product - 1) < 1e-12
    for w in fiber:
        assert joukowski_map(w).isclose(pt(1).to_approx(), 1e-9)


# -- exponential cover ------------------------------------------------------


def test_exp_cover_basics():
    one = exp_cover(pt(0))
    assert not one.is_exact
    assert one.isclose(pt(1), 1e-12)
    z = ComplexPoint.approx(0.3, 0.2)
    assert exp_cover(z).isclose(exp_cover(z + 1), 1e-12)


def test_exp_fiber_window_of_one():
    fiber = exp_fiber(pt(1), window=2)
    assert len(fiber) == 5
    values = sorted(z.to_complex().real for z in fiber)
    assert values == pytest.approx([-2, -1, 0, 1, 2], abs=1e-12)
    assert all(abs(z.to_complex().imag) < 1e-12 for z in fiber)


def test_exp_fiber_roundtrip_and_pole():
    w = ComplexPoint.approx(0.4, -1.1)
    for z in exp_fiber(w, window=1):
        assert exp_cover(z).isclose(w, 1e-9)
    with pytest.raises(DomainError):
        exp_fiber(pt(0))


# -- the composite on dihedral configurations -------------------------------


def test_composite_single_coordinate_hits_quarter():
    (image,) = exp_joukowski_composite((pt(Fraction(1, 4)),))
    assert image.isclose(pt(Fraction(1, 4)), 1e-12)


def test_composite_deck_invariance():
    zs = (pt(Fraction(1, 8), Fraction(1, 2)), pt(Fraction(3, 8), Fraction(-1, 4)))
    base = exp_joukowski_composite(zs)
    shifted = exp_joukowski_composite((zs[0] + 1, zs[1]))
    negated = exp_joukowski_composite((-zs[0], zs[1]))
    for moved in (shifted, negated):
        for a, b in zip(base, moved):
            assert a.isclose(b, 1e-9)


def test_composite_rejects_integral_sums():
    with pytest.raises(MembershipError):
        exp_joukowski_composite((pt(Fraction(1, 4)), pt(Fraction(3, 4))))
    with pytest.raises(MembershipError):
        exp_joukowski_composite((pt(Fraction(1, 4)), pt(Fraction(1, 4)) + 2))


# -- squaring ----------------------------------------------------------------


def test_squaring_spec_pair():
    assert squaring_cover((pt(2), pt(3))) == (pt(4), pt(9))


def test_squaring_fiber_is_sign_enumeration():
    fiber = set(squaring_fiber((pt(4), pt(9))))
    assert fiber == {
        (pt(2), pt(3)),
        (pt(2), pt(-3)),
        (pt(-2), pt(3)),
        (pt(-2), pt(-3)),
    }


def test_squaring_rejects_punctures_and_collisions():
    with pytest.raises(MembershipError):
        squaring_cover((pt(1), pt(3)))
    with pytest.raises(MembershipError):
        squaring_cover((pt(2), pt(-2)))


def test_squaring_fiber_sizes_up_to_four_coordinates():
    from orbconfig.orbmodel import SignFlipPunctured

    for n in range(1, 5):
        ws = sample_orbit_config(SignFlipPunctured(), n, seed=11 * n).points
        assume_zero_free = all(w != pt(0) for w in ws)
        if not assume_zero_free:
            continue
        vs = squaring_cover(ws)
        fiber = set(squaring_fiber(vs))
        assert len(fiber) == 2**n
        assert ws in fiber
        for tup in fiber:
            assert squaring_cover(tup) == vs


# -- power differences -------------------------------------------------------


def test_power_difference_spec_examples():
    assert power_difference_map((pt(1), pt(2)), 2) == (pt(3),)
    assert power_difference_map((pt(1), pt(2), pt(5)), 1) == (pt(4), pt(3))


def test_power_difference_rejects_shared_orbits():
    with pytest.raises(MembershipError):
        power_difference_map((pt(2), pt(-2)), 2)
    with pytest.raises(ValueError):
        power_difference_map((pt(1), pt(2)), 0)


def test_power_difference_lands_in_punctured_configuration():
    for m in range(1, 5):
        for n in range(2, 5):
            zs = sample_orbit_config(CyclicRotation(m), n, seed=100 * m + n).points
            base = power_difference_map(zs, m)
            assert len(base) == n - 1
            assert in_punctured_configuration(base)


def test_in_punctured_configuration_edges():
    assert in_punctured_configuration((pt(1), pt(2)))
    assert not in_punctured_configuration((pt(0), pt(2)))
    assert not in_punctured_configuration((pt(2), pt(2)))
    near = ComplexPoint.approx(1.0, 0.0)
    assert not in_punctured_configuration((near, ComplexPoint.approx(1.0, 1e-12)))


# -- sampled verification ----------------------------------------------------


def test_verify_cover_quotient_map_passes():
    report = verify_cover("q", samples=200, seed=3)
    assert report.passed
    assert report.declared_degree == 2
    assert report.used + report.skipped == 200
    assert report.fiber_sizes == ((2, report.used),)
    assert all(entry["verified"] for entry in report.branch_points)
    assert report.max_defect == 0.0
    assert all(mode == "exact" for _, mode, _ in report.deck_checks)


def test_verify_cover_is_deterministic():
    a = verify_cover("q", samples=50, seed=9).to_json()
    b = verify_cover("q", samples=50, seed=9).to_json()
    assert a == b


def test_verify_cover_squaring_degrees():
    for n in (1, 2, 3):
        report = verify_cover("squaring", n=n, samples=40, seed=n)
        assert report.passed
        assert report.declared_degree == 2**n


def test_verify_cover_exp_composite():
    report = verify_cover("qE", n=2, samples=30, window=3, seed=5)
    assert report.passed
    assert report.declared_degree == 4
    assert report.window == 3
    assert report.used + report.skipped == 30
    approx_checks = {name for name, mode, _ in report.deck_checks if mode == "approx"}
    assert "translation_periodicity" in approx_checks
    assert "negation_invariance" in approx_checks
    assert report.max_defect <= report.eps


def test_verify_cover_rejects_unknown_map():
    with pytest.raises(ValueError):
        verify_cover("mystery")
    with pytest.raises(ValueError):
        verify_cover("q", samples=0)


def test_covering_report_json_shape():
    report = verify_cover("q", samples=20, seed=1)
    data = report.to_json()
    assert data["map"] == "q"
    assert data["pass"] is True
    assert data["seed"] == 1
    assert isinstance(data["fiber_sizes"], list)
    assert {"name", "mode", "ok"} <= set(data["deck_checks"][0])
    assert data["samples"] == data["used"] + data["skipped_singular"]
