"""Explicit covering and fibration maps between planar configuration spaces.

The algebraic maps (the degree-2 rational quotient map, coordinatewise
squaring, the power-difference fibration) evaluate exactly on exact points;
the transcendental exponential cover runs in approximate mode only.
verify_cover spot-checks the covering claims on seeded samples: constant
generic fiber cardinality, exact branch data via discriminant vanishing,
and deck-transformation invariance, recording per check whether it ran
exactly or to a tolerance.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .exactfield import DEFAULT_EPS, ComplexPoint, complex_sqrt_exact
from .orbmodel import CyclicRotation, DomainError, IntegerDihedral, SignFlipPunctured
from .orbit_config import MembershipError, is_orbit_config, sample_orbit_config

_ZERO = ComplexPoint.exact(0)
_ONE = ComplexPoint.exact(1)
_TWO_PI = 2.0 * math.pi


def joukowski_map(w: ComplexPoint) -> ComplexPoint:
    """v = (1/4)(1 - (1 + w^2) / (2w)), the degree-2 quotient of the
    punctured plane folding w with 1/w; exact on exact points."""
    if w.is_exact:
        if w == _ZERO:
            raise DomainError("the quotient map has a pole at 0")
        return (_ONE - (_ONE + w * w) * (w * 2).inverse()) * Fraction(1, 4)
    if w.norm2() == 0.0:
        raise DomainError("the quotient map has a pole at 0")
    wc = w.to_complex()
    return ComplexPoint.from_complex((1 - (1 + wc * wc) / (2 * wc)) / 4, w.eps or DEFAULT_EPS)


def joukowski_fiber(
    v: ComplexPoint, eps: Optional[float] = None
) -> tuple[ComplexPoint, ...]:
    """Roots of w^2 - (2 - 8v) w + 1 = 0; both preimages of v, or one
    double root at the branch values v = 0 and v = 1/2.

    The two generic roots are reciprocal (their product is the constant
    term 1).  Roots are exact whenever the discriminant is a Gaussian
    rational square; otherwise they fall back to floating point.
    """
    if v.is_exact:
        trace = _ONE * 2 - v * 8
        disc = trace * trace - 4
        half = Fraction(1, 2)
        if disc == _ZERO:
            return (trace * half,)
        root = complex_sqrt_exact(disc)
        if root is not None:
            pair = [(trace - root) * half, (trace + root) * half]
            pair.sort(key=lambda z: (z.re, z.im))
            return tuple(pair)
        vc = v.to_complex()
        out_eps = eps or DEFAULT_EPS
    else:
        vc = v.to_complex()
        out_eps = eps or v.eps or DEFAULT_EPS
    trace_c = 2 - 8 * vc
    disc_c = trace_c * trace_c - 4
    if abs(disc_c) <= out_eps * out_eps:
        return (ComplexPoint.from_complex(trace_c / 2, out_eps),)
    root_c = cmath.sqrt(disc_c)
    # Take the larger-magnitude root first and recover the other from the
    # exact product 1; this avoids cancellation when |trace| is large.
    big = (trace_c + root_c) / 2
    alt = (trace_c - root_c) / 2
    if abs(alt) > abs(big):
        big = alt
    pair = sorted((big, 1 / big), key=lambda z: (z.real, z.imag))
    return tuple(ComplexPoint.from_complex(z, out_eps) for z in pair)


def joukowski_branch_points() -> tuple[tuple[ComplexPoint, ComplexPoint, int], ...]:
    """(base value, preimage, local degree) at the two branch values."""
    return (
        (_ZERO, _ONE, 2),
        (ComplexPoint.exact(Fraction(1, 2)), ComplexPoint.exact(-1), 2),
    )


def exp_cover(z: ComplexPoint) -> ComplexPoint:
    """z -> exp(2 pi i z); transcendental, so always approximate."""
    value = cmath.exp(2j * math.pi * z.to_complex())
    return ComplexPoint.from_complex(value, z.eps or DEFAULT_EPS)


def exp_fiber(
    w: ComplexPoint, window: int = 3, eps: Optional[float] = None
) -> tuple[ComplexPoint, ...]:
    """Preimages z0 + k, |k| <= window, of w under exp(2 pi i .); z0 is the
    principal logarithm divided by 2 pi i."""
    out_eps = eps or w.eps or DEFAULT_EPS
    if (w.is_exact and w == _ZERO) or (not w.is_exact and abs(w.to_complex()) <= out_eps):
        raise DomainError("0 is not in the image of the exponential cover")
    z0 = cmath.log(w.to_complex()) / (2j * math.pi)
    return tuple(
        ComplexPoint.from_complex(z0 + k, out_eps)
        for k in range(-window, window + 1)
    )


def exp_joukowski_composite(
    zs: Sequence[ComplexPoint], eps: Optional[float] = None
) -> tuple[ComplexPoint, ...]:
    """Coordinatewise v_j = joukowski(exp(2 pi i z_j)).

    The input must be a configuration for the integer dihedral action
    (z_i +- z_j never an integer); the images are then pairwise distinct,
    which is re-checked to tolerance.  Cone values 0 and 1/2 are allowed
    as outputs.
    """
    zs = tuple(zs)
    if not is_orbit_config(IntegerDihedral(), zs, eps):
        raise MembershipError(
            "input is not an integer-dihedral configuration (z_i +- z_j hits Z)"
        )
    images = tuple(joukowski_map(exp_cover(z)) for z in zs)
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if images[i].isclose(images[j], eps):
                raise MembershipError("composite images collided within tolerance")
    return images


def squaring_cover(
    ws: Sequence[ComplexPoint], eps: Optional[float] = None
) -> tuple[ComplexPoint, ...]:
    """(w_1, ..., w_n) -> (w_1^2, ..., w_n^2) on sign-flip configurations.

    Output coordinates are pairwise distinct and never 1; the fiber over a
    generic image has the full 2^n sign choices.
    """
    ws = tuple(ws)
    if not is_orbit_config(SignFlipPunctured(), ws, eps):
        raise MembershipError("input is not a sign-flip configuration")
    return tuple(w * w for w in ws)


def squaring_fiber(
    vs: Sequence[ComplexPoint], eps: Optional[float] = None
) -> tuple[tuple[ComplexPoint, ...], ...]:
    """All sign-enumeration preimage tuples of vs under coordinatewise
    squaring: one square root per coordinate, then every sign pattern.
    Coordinates equal to 0 contribute a single degenerate root."""
    choices: list[tuple[ComplexPoint, ...]] = []
    for v in vs:
        root: Optional[ComplexPoint] = None
        if v.is_exact:
            root = complex_sqrt_exact(v)
        if root is None:
            root = ComplexPoint.from_complex(
                cmath.sqrt(v.to_complex()), eps or v.eps or DEFAULT_EPS
            )
        if (root.is_exact and root == _ZERO) or (
            not root.is_exact and abs(root.to_complex()) <= (eps or DEFAULT_EPS)
        ):
            choices.append((root,))
        else:
            choices.append((root, -root))
    return tuple(product(*choices))


def in_punctured_configuration(
    points: Sequence[ComplexPoint], eps: Optional[float] = None
) -> bool:
    """Membership in the configuration space of the punctured plane:
    every coordinate nonzero and pairwise distinct."""
    pts = list(points)
    for i, z in enumerate(pts):
        if z.is_exact:
            if z == _ZERO:
                return False
        elif z.isclose(_ZERO, eps):
            return False
        for w in pts[i + 1 :]:
            if z.is_exact and w.is_exact:
                if z == w:
                    return False
            elif z.isclose(w, eps):
                return False
    return True


def power_difference_map(
    zs: Sequence[ComplexPoint], m: int, eps: Optional[float] = None
) -> tuple[ComplexPoint, ...]:
    """b_j = z_n^m - z_j^m for j < n, on rotation-orbit configurations.

    The output lies in the configuration space of the punctured plane:
    distinct rotation orbits make every b_j nonzero and pairwise distinct.
    That consequence is re-checked and enforced.
    """
    zs = tuple(zs)
    if m < 1:
        raise ValueError("rotation order must be >= 1")
    if not zs:
        raise MembershipError("need at least one coordinate")
    if not is_orbit_config(CyclicRotation(m), zs, eps):
        raise MembershipError("input coordinates do not lie in distinct rotation orbits")
    last = zs[-1] ** m
    base = tuple(last - z**m for z in zs[:-1])
    if not in_punctured_configuration(base, eps):
        raise MembershipError("power differences left the punctured configuration space")
    return base


# ---------------------------------------------------------------------------
# Sampled verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoveringReport:
    map_id: str
    n: int
    declared_degree: int
    window: Optional[int]
    samples: int
    used: int
    skipped: int
    fiber_sizes: tuple[tuple[int, int], ...]  # (size, count), sorted
    branch_points: tuple[dict, ...]
    deck_checks: tuple[tuple[str, str, bool], ...]  # (name, mode, ok)
    max_defect: float
    eps: float
    seed: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "map": self.map_id,
            "n": self.n,
            "declared_degree": self.declared_degree,
            "window": self.window,
            "samples": self.samples,
            "used": self.used,
            "skipped_singular": self.skipped,
            "fiber_sizes": [list(pair) for pair in self.fiber_sizes],
            "branch_points": list(self.branch_points),
            "deck_checks": [
                {"name": name, "mode": mode, "ok": ok}
                for name, mode, ok in self.deck_checks
            ],
            "max_defect": self.max_defect,
            "epsilon": self.eps,
            "seed": self.seed,
            "pass": self.passed,
        }


class _ReportBuilder:
    def __init__(self) -> None:
        self.sizes: dict[int, int] = {}
        self.checks: dict[tuple[str, str], bool] = {}
        self.max_defect = 0.0
        self.skipped = 0
        self.used = 0

    def fiber(self, size: int) -> None:
        self.sizes[size] = self.sizes.get(size, 0) + 1
        self.used += 1

    def check(self, name: str, mode: str, ok: bool) -> None:
        key = (name, mode)
        self.checks[key] = self.checks.get(key, True) and ok

    def defect(self, value: float) -> None:
        if value > self.max_defect:
            self.max_defect = value


def _grid_point(rng: random.Random, span: int = 24, den: int = 8) -> ComplexPoint:
    return ComplexPoint.exact(
        Fraction(rng.randint(-span, span), den), Fraction(rng.randint(-span, span), den)
    )


def _verify_quotient_map(rb: _ReportBuilder, samples: int, rng: random.Random) -> tuple[dict, ...]:
    skip_at = {_ZERO, _ONE, ComplexPoint.exact(-1)}
    for _ in range(samples):
        w = _grid_point(rng)
        if w in skip_at:
            rb.skipped += 1
            continue
        v = joukowski_map(w)
        fiber = joukowski_fiber(v)
        rb.fiber(len(fiber))
        expected = {w, w.inverse()}
        rb.check("fiber_matches_parametrization", "exact", set(fiber) == expected)
        if len(fiber) == 2:
            rb.check("reciprocal_root_product", "exact", fiber[0] * fiber[1] == _ONE)
        rb.check(
            "maps_back", "exact", all(joukowski_map(root) == v for root in fiber)
        )
        rb.check("deck_invariance", "exact", joukowski_map(w.inverse()) == v)
    branch_records = []
    for base, preimage, degree in joukowski_branch_points():
        trace = _ONE * 2 - base * 8
        disc_vanishes = trace * trace - 4 == _ZERO
        fiber = joukowski_fiber(base)
        verified = (
            disc_vanishes
            and fiber == (preimage,)
            and joukowski_map(preimage) == base
        )
        rb.check("branch_data", "exact", verified)
        branch_records.append(
            {
                "value": base.to_json(),
                "preimage": preimage.to_json(),
                "local_degree": degree,
                "verified": verified,
            }
        )
    return tuple(branch_records)


def _verify_squaring(
    rb: _ReportBuilder, n: int, samples: int, eps: float, rng: random.Random
) -> None:
    signs = list(product((1, -1), repeat=n))
    for _ in range(samples):
        ws = sample_orbit_config(
            SignFlipPunctured(), n, seed=rng.randrange(2**32)
        ).points
        if any(w == _ZERO for w in ws):
            rb.skipped += 1  # 0 squares to the cone point with a degenerate fiber
            continue
        vs = squaring_cover(ws)
        fiber = squaring_fiber(vs)
        distinct = set(fiber)
        rb.fiber(len(distinct))
        expected = {tuple(w * s for w, s in zip(ws, pattern)) for pattern in signs}
        rb.check("fiber_is_sign_enumeration", "exact", distinct == expected)
        rb.check(
            "fiber_in_configuration_space",
            "exact",
            all(is_orbit_config(SignFlipPunctured(), t) for t in fiber),
        )
        rb.check(
            "maps_back",
            "exact",
            all(tuple(z * z for z in t) == vs for t in fiber),
        )
        rb.check(
            "sign_action_invariance",
            "exact",
            all(
                squaring_cover(tuple(w * s for w, s in zip(ws, pattern))) == vs
                for pattern in signs
            ),
        )


def _strip_logs(w: complex, window: int, eps: float) -> list[complex]:
    z0 = cmath.log(w) / (2j * math.pi)
    z0 -= math.floor(z0.real)
    return [z0 + k for k in range(window)]


def _verify_exp_composite(
    rb: _ReportBuilder, n: int, samples: int, window: int, eps: float, rng: random.Random
) -> None:
    unit_box = (Fraction(0), Fraction(7, 8), Fraction(-1), Fraction(1))
    dihedral = IntegerDihedral()
    for _ in range(samples):
        zs = sample_orbit_config(
            dihedral, n, seed=rng.randrange(2**32), box=unit_box
        ).points
        vs = exp_joukowski_composite(zs, eps)
        per_coord: list[list[complex]] = []
        singular = False
        for v in vs:
            vc = v.to_complex()
            disc = (2 - 8 * vc) ** 2 - 4
            if abs(disc) <= eps:
                singular = True
                break
            roots = [r.to_complex() for r in joukowski_fiber(v, eps)]
            logs = [z for r in roots for z in _strip_logs(r, window, eps)]
            per_coord.append(logs)
        if singular:
            rb.skipped += 1
            continue
        window_counts: dict[tuple[int, ...], int] = {}
        for combo in product(*per_coord):
            cell = tuple(math.floor(z.real) for z in combo)
            window_counts[cell] = window_counts.get(cell, 0) + 1
        cells_ok = len(window_counts) == window**n and all(
            count == 2**n for count in window_counts.values()
        )
        rb.check("per_window_count", "approx", cells_ok)
        rb.fiber(min(window_counts.values()) if window_counts else 0)
        probe = [per_coord[i][0] for i in range(n)]
        back = [
            joukowski_map(exp_cover(ComplexPoint.from_complex(zc, eps)))
            for zc in probe
        ]
        defect = max(abs(a.to_complex() - b.to_complex()) for a, b in zip(back, vs))
        rb.defect(defect)
        rb.check("maps_back", "approx", defect <= eps)
        shifted = (zs[0] + 1,) + zs[1:]
        negated = (-zs[0],) + zs[1:]
        for name, moved in (("translation_periodicity", shifted), ("negation_invariance", negated)):
            moved_vs = exp_joukowski_composite(moved, eps)
            gap = max(abs(a.to_complex() - b.to_complex()) for a, b in zip(moved_vs, vs))
            rb.defect(gap)
            rb.check(name, "approx", gap <= eps)


def verify_cover(
    map_id: str,
    n: int = 2,
    samples: int = 200,
    window: int = 3,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
) -> CoveringReport:
    """Sample-based verification of a declared covering map.

    map ids: "q" (degree 2), "squaring" (degree 2^n, full sign
    enumeration), "qE" (the exponential-then-quotient composite; 2^n
    preimages per fundamental window, scanned over window^n cells).
    Singular samples (branch values, degenerate coordinates) are skipped
    and counted, never silently dropped.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if window < 1:
        raise ValueError("window must be >= 1")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    rng = random.Random(seed)
    rb = _ReportBuilder()
    branch_records: tuple[dict, ...] = ()
    if map_id == "q":
        n_effective = 1
        declared = 2
        branch_records = _verify_quotient_map(rb, samples, rng)
        window_out = None
    elif map_id == "squaring":
        if n < 1:
            raise ValueError("squaring needs n >= 1")
        n_effective = n
        declared = 2**n
        _verify_squaring(rb, n, samples, eps, rng)
        window_out = None
    elif map_id == "qE":
        if n < 1:
            raise ValueError("the exponential composite needs n >= 1")
        n_effective = n
        declared = 2**n
        _verify_exp_composite(rb, n, samples, window, eps, rng)
        window_out = window
    else:
        raise ValueError(f"unknown map id {map_id!r}")
    sizes = tuple(sorted(rb.sizes.items()))
    generic_ok = all(size == declared for size, _ in sizes) and rb.used > 0
    checks_ok = all(rb.checks.values())
    passed = generic_ok and checks_ok and rb.max_defect <= eps
    return CoveringReport(
        map_id=map_id,
        n=n_effective,
        declared_degree=declared,
        window=window_out,
        samples=samples,
        used=rb.used,
        skipped=rb.skipped,
        fiber_sizes=sizes,
        branch_points=branch_records,
        deck_checks=tuple(
            (name, mode, ok) for (name, mode), ok in sorted(rb.checks.items())
        ),
        max_defect=rb.max_defect,
        eps=eps,
        seed=seed,
        passed=passed,
    )
