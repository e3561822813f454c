"""Orbit configuration spaces of planar actions.

A configuration is a tuple of domain points lying in pairwise distinct
orbits.  This module provides the membership predicates, a deterministic
rational sampler, the standard hyperplane-arrangement models of these
spaces (the braid arrangement, the rotation arrangements, and the central
sign-flip cone arrangement), and the coning homeomorphism that identifies
the cone complement with scale times a sign-flip configuration space.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arrangement import QQ, ArrangementSpec, ScalarField, make_arrangement
from .exactfield import ComplexPoint, Cyclotomic
from .orbmodel import PlanarAction, SignFlipPunctured

Box = tuple[Fraction, Fraction, Fraction, Fraction]

DEFAULT_BOX: Box = (Fraction(-2), Fraction(2), Fraction(-2), Fraction(2))


class MembershipError(ValueError):
    """A point failed a configuration-space membership precondition."""


class SamplingError(RuntimeError):
    """The rejection sampler ran out of attempts."""


def same_orbit(
    action: PlanarAction, z: ComplexPoint, w: ComplexPoint, eps: Optional[float] = None
) -> bool:
    """Whether z and w lie on one orbit of the action.

    Exact points are compared exactly; approximate points use eps, falling
    back to the eps carried by the points.  Raises DomainError when the
    action's domain excludes an argument.
    """
    return action.same_orbit(z, w, eps)


def is_orbit_config(
    action: PlanarAction, points: Sequence[ComplexPoint], eps: Optional[float] = None
) -> bool:
    """Whether the tuple is a configuration: in the domain, orbits distinct.

    Unlike same_orbit, a coordinate outside the domain makes the answer
    False rather than an error; the predicate decides membership in the
    orbit configuration space.
    """
    pts = list(points)
    if any(not action.contains(z, eps) for z in pts):
        return False
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if action.same_orbit(pts[i], pts[j], eps):
                return False
    return True


@dataclass(frozen=True)
class ConfigPoint:
    """A point of the orbit configuration space of a planar action."""

    action: PlanarAction
    points: tuple[ComplexPoint, ...]

    @property
    def n(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "action": self.action.to_json(),
            "points": [z.to_json() for z in self.points],
        }


def sample_orbit_config(
    action: PlanarAction,
    n: int,
    seed: int = 0,
    box: Box = DEFAULT_BOX,
    denominator: int = 8,
    max_attempts: int = 1000,
) -> ConfigPoint:
    """Deterministically sample an exact configuration by rejection.

    Coordinates are drawn uniformly from the grid of rationals with the
    given denominator inside the closed box (re_lo, re_hi, im_lo, im_hi);
    tuples failing is_orbit_config are rejected.  The same seed always
    yields the same configuration.
    """
    if n < 0:
        raise ValueError("configuration size must be nonnegative")
    if denominator < 1:
        raise ValueError("grid denominator must be positive")
    re_lo, re_hi, im_lo, im_hi = (Fraction(b) for b in box)
    if re_lo > re_hi or im_lo > im_hi:
        raise ValueError("empty sampling box")
    rng = random.Random(seed)

    def draw_scaled(lo: Fraction, hi: Fraction) -> Fraction:
        lo_n = math.ceil(lo * denominator)
        hi_n = math.floor(hi * denominator)
        if lo_n > hi_n:
            raise ValueError("sampling box contains no grid point")
        return Fraction(rng.randint(lo_n, hi_n), denominator)

    for _ in range(max_attempts):
        candidate = tuple(
            ComplexPoint.exact(draw_scaled(re_lo, re_hi), draw_scaled(im_lo, im_hi))
            for _ in range(n)
        )
        if is_orbit_config(action, candidate):
            return ConfigPoint(action=action, points=candidate)
    raise SamplingError(
        f"no valid {n}-point configuration in {max_attempts} attempts; "
        "enlarge the box or the grid denominator"
    )


# ---------------------------------------------------------------------------
# Arrangement models
# ---------------------------------------------------------------------------


def braid_arrangement(n: int) -> ArrangementSpec:
    """The hyperplanes x_i = x_j, 1 <= i < j <= n, over Q."""
    if n < 1:
        raise ValueError("braid arrangement needs n >= 1")
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            normal = [Fraction(0)] * n
            normal[i], normal[j] = Fraction(1), Fraction(-1)
            rows.append((tuple(normal), Fraction(0)))
    return make_arrangement(n, QQ, rows, label=f"braid({n})")


def rotation_arrangement(n: int, m: int) -> ArrangementSpec:
    """Hyperplanes z_i = zeta_m^k z_j modeling rotation-orbit collisions.

    Points of C^n avoiding all of them are exactly the configurations of n
    points in distinct orbits of the order-m rotation about 0, once the
    coordinates avoiding the origin question is handled upstream; there are
    m * n(n-1)/2 hyperplanes.  The field is Q for m <= 2 and Q(zeta_m)
    otherwise.
    """
    if n < 1 or m < 1:
        raise ValueError("rotation arrangement needs n >= 1 and m >= 1")
    field = QQ if m <= 2 else ScalarField("cyclotomic", m)
    zero, one = field.zero(), field.one()
    if m <= 2:
        roots = [Fraction(1)] if m == 1 else [Fraction(1), Fraction(-1)]
    else:
        zeta = Cyclotomic.zeta(m)
        roots = [zeta**k for k in range(m)]
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for root in roots:
                normal = [zero] * n
                normal[i], normal[j] = one, -root
                rows.append((tuple(normal), zero))
    return make_arrangement(n, field, rows, label=f"case1({m},{n})")


def sign_flip_arrangement(n: int) -> ArrangementSpec:
    """The central cone arrangement x_i = +-x_j (i < j) plus x_1 = 0.

    Its complement in C^(n+1) is the image of the coning homeomorphism on
    scale times an n-point sign-flip configuration; it has
    2 * C(n+1, 2) + 1 hyperplanes in dimension n + 1.
    """
    if n < 0:
        raise ValueError("sign flip arrangement needs n >= 0")
    dim = n + 1
    rows = []
    for i in range(dim):
        for j in range(i + 1, dim):
            for sign in (Fraction(-1), Fraction(1)):
                normal = [Fraction(0)] * dim
                normal[i], normal[j] = Fraction(1), sign
                rows.append((tuple(normal), Fraction(0)))
    axis = [Fraction(0)] * dim
    axis[0] = Fraction(1)
    rows.append((tuple(axis), Fraction(0)))
    return make_arrangement(dim, QQ, rows, label=f"case3X({n})")


# ---------------------------------------------------------------------------
# The coning homeomorphism (lambda, w) -> (lambda, lambda w)
# ---------------------------------------------------------------------------


def in_cone_complement(
    xs: Sequence[ComplexPoint], eps: Optional[float] = None
) -> bool:
    """x_1 != 0 and x_i != +-x_j for all i < j, exactly or within eps."""
    xs = list(xs)
    if not xs:
        return False
    zero = ComplexPoint.exact(0)
    if xs[0].is_exact:
        if xs[0] == zero:
            return False
    elif xs[0].isclose(zero, eps):
        return False
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            a, b = xs[i], xs[j]
            if a.is_exact and b.is_exact:
                if a == b or a == -b:
                    return False
            elif a.isclose(b, eps) or a.isclose(-b, eps):
                return False
    return True


def cone_coordinates(
    lam: ComplexPoint, points: Sequence[ComplexPoint], eps: Optional[float] = None
) -> tuple[ComplexPoint, ...]:
    """Map (lambda, w_1..w_n) to (lambda, lambda w_1, .., lambda w_n).

    Requires lambda != 0 and the w tuple to be a sign-flip configuration;
    the image then lies in the cone complement, which is re-checked exactly
    for exact inputs.
    """
    zero = ComplexPoint.exact(0)
    if lam.is_exact:
        if lam == zero:
            raise MembershipError("scale coordinate must be nonzero")
    elif lam.isclose(zero, eps):
        raise MembershipError("scale coordinate must be nonzero")
    if not is_orbit_config(SignFlipPunctured(), points, eps):
        raise MembershipError("points do not form a sign-flip configuration")
    image = (lam,) + tuple(lam * w for w in points)
    if all(x.is_exact for x in image) and not in_cone_complement(image):
        raise MembershipError("image left the cone complement")
    return image


def cone_coordinates_inverse(
    xs: Sequence[ComplexPoint], eps: Optional[float] = None
) -> tuple[ComplexPoint, tuple[ComplexPoint, ...]]:
    """Recover (lambda, w) from a cone-complement point; exact inverse."""
    if not in_cone_complement(xs, eps):
        raise MembershipError("point is not in the cone complement")
    lam = xs[0]
    inv = lam.inverse()
    return lam, tuple(x * inv for x in xs[1:])
