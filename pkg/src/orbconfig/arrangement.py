"""Hyperplane arrangements over Q and Q(zeta_m), with exact invariants.

Flats are computed as a breadth-first closure under intersection, with
canonical reduced row echelon forms as dedup keys; no floating point enters
any rank or membership decision.  The intersection poset drives the Mobius
recursion, the characteristic and Poincare polynomials, and the chamber
counts.  Chambers of rational arrangements are enumerated by incremental
hyperplane insertion with exact rational witness points; feasibility falls
back to Fourier-Motzkin elimination only when a direct normal-direction shot
from the current witness is inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .exactfield import (
    ComplexPoint,
    Cyclotomic,
    complex_to_cyclotomic,
    format_rational,
    parse_rational,
)


class NotRealError(ValueError):
    """Operation requires the rational (real) form of the arrangement."""


class CentralityError(ValueError):
    """Operation requires a central arrangement."""


class BadPrimeError(ValueError):
    """The requested prime collides with the arrangement's bad primes."""


class SizeGuardError(ValueError):
    """Input exceeds the documented size rails for this operation."""


# ---------------------------------------------------------------------------
# Scalar fields and arrangement data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarField:
    """Q, or the cyclotomic field Q(zeta_m) for m >= 3."""

    kind: str  # "Q" | "cyclotomic"
    order: Optional[int] = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.order is not None:
                raise ValueError("rational field takes no order")
        elif self.kind == "cyclotomic":
            if not self.order or self.order < 1:
                raise ValueError("cyclotomic field needs an order >= 1")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    def zero(self):
        return Fraction(0) if self.is_rational else Cyclotomic.zero(self.order)

    def one(self):
        return Fraction(1) if self.is_rational else Cyclotomic.one(self.order)

    def coerce(self, value):
        if self.is_rational:
            if isinstance(value, Cyclotomic):
                q = value.as_rational()
                if q is None:
                    raise ValueError("cyclotomic value does not lie in Q")
                return q
            return Fraction(value)
        if isinstance(value, Cyclotomic):
            if value.order != self.order:
                raise ValueError("cyclotomic order mismatch")
            return value
        return Cyclotomic.from_rational(self.order, Fraction(value))

    def sort_key(self, value):
        if self.is_rational:
            return (value,)
        return value.coeffs

    def scalar_to_json(self, value):
        if self.is_rational:
            return format_rational(value)
        return value.to_json()

    def scalar_from_json(self, data):
        if self.is_rational:
            return parse_rational(data)
        return Cyclotomic.from_json(self.order, data)

    def to_json(self) -> dict:
        if self.is_rational:
            return {"type": "Q"}
        return {"type": "cyclotomic", "m": self.order}

    @classmethod
    def from_json(cls, data: dict) -> "ScalarField":
        if data.get("type") == "Q":
            return cls("Q")
        if data.get("type") == "cyclotomic":
            return cls("cyclotomic", int(data["m"]))
        raise ValueError(f"unknown field spec {data!r}")


QQ = ScalarField("Q")


@dataclass(frozen=True)
class Hyperplane:
    """The affine hyperplane normal . x = offset, normalized upstream."""

    normal: tuple
    offset: object

    def eval_gap(self, point: Sequence):
        """normal . point - offset, in whatever ring the inputs live in."""
        total = None
        for a, x in zip(self.normal, point):
            term = a * x
            total = term if total is None else total + term
        return total - self.offset


@dataclass(frozen=True)
class ArrangementSpec:
    """A finite list of pairwise distinct hyperplanes in a fixed dimension."""

    dim: int
    field: ScalarField
    hyperplanes: tuple[Hyperplane, ...]
    label: str = "custom"

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "label": self.label,
            "dim": self.dim,
            "field": self.field.to_json(),
            "hyperplanes": [
                {
                    "normal": [self.field.scalar_to_json(a) for a in h.normal],
                    "offset": self.field.scalar_to_json(h.offset),
                }
                for h in self.hyperplanes
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ArrangementSpec":
        field = ScalarField.from_json(data["field"])
        dim = int(data["dim"])
        raw = [
            (
                tuple(field.scalar_from_json(a) for a in h["normal"]),
                field.scalar_from_json(h.get("offset", 0)),
            )
            for h in data["hyperplanes"]
        ]
        return make_arrangement(dim, field, raw, label=data.get("label", "custom"))


def make_arrangement(
    dim: int,
    field: ScalarField,
    raw_hyperplanes: Iterable[tuple],
    label: str = "custom",
) -> ArrangementSpec:
    """Normalize, deduplicate and sort hyperplane data into a spec.

    Each (normal, offset) pair is scaled so its first nonzero normal
    coefficient is 1; duplicates collapse and the result is ordered by the
    lexicographic key of the scaled coefficients.
    """
    if dim < 0:
        raise ValueError("dimension must be nonnegative")
    zero = field.zero()
    seen: dict[tuple, Hyperplane] = {}
    for normal, offset in raw_hyperplanes:
        normal = tuple(field.coerce(a) for a in normal)
        offset = field.coerce(offset)
        if len(normal) != dim:
            raise ValueError(f"normal of length {len(normal)} in dimension {dim}")
        pivot = next((a for a in normal if a != zero), None)
        if pivot is None:
            raise ValueError("zero normal vector is not a hyperplane")
        inv = field.one() / pivot
        normal = tuple(a * inv for a in normal)
        offset = offset * inv
        key = tuple(field.sort_key(a) for a in normal) + field.sort_key(offset)
        seen.setdefault(key, Hyperplane(normal, offset))
    ordered = [seen[key] for key in sorted(seen)]
    return ArrangementSpec(dim=dim, field=field, hyperplanes=tuple(ordered), label=label)


def complement_contains(spec: ArrangementSpec, point: Sequence[ComplexPoint]) -> bool:
    """Exact test that a complex point avoids every hyperplane of the spec.

    Coordinates must be exact Gaussian rationals.  Rational coefficients act
    on the ComplexPoints directly; cyclotomic coefficients and Gaussian
    rational coordinates are both embedded into Q(zeta_L) for L = lcm(m, 4)
    and the linear forms are evaluated there.
    """
    if len(point) != spec.dim:
        raise ValueError(f"point of length {len(point)} in dimension {spec.dim}")
    if any(z.mode != ComplexPoint.EXACT for z in point):
        raise ValueError("complement membership is decided on exact points only")
    if spec.field.is_rational:
        for h in spec.hyperplanes:
            gap = ComplexPoint.exact(-h.offset)
            for a, z in zip(h.normal, point):
                gap = gap + z * a
            if gap.re == 0 and gap.im == 0:
                return False
        return True
    m = spec.field.order
    target = m * 4 // math.gcd(m, 4)
    zero = Cyclotomic.zero(target)
    coords = [complex_to_cyclotomic(z, target) for z in point]
    for h in spec.hyperplanes:
        gap = -h.offset.embed(target)
        for a, z in zip(h.normal, coords):
            gap = gap + a.embed(target) * z
        if gap == zero:
            return False
    return True


# ---------------------------------------------------------------------------
# Exact linear algebra over the arrangement's field
# ---------------------------------------------------------------------------


def _rref(rows: list[list], field: ScalarField) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (rows without zero rows, pivot cols)."""
    zero, one = field.zero(), field.one()
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != zero), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != zero:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


class _AffineSystem:
    """Rows [a | b] meaning a . x = b, kept in canonical reduced form."""

    __slots__ = ("field", "dim", "rows", "pivots")

    def __init__(self, field: ScalarField, dim: int, rows: Iterable[Sequence] = ()):
        self.field = field
        self.dim = dim
        reduced, pivots = _rref([list(r) for r in rows], field)
        self.rows = reduced
        self.pivots = pivots

    @property
    def consistent(self) -> bool:
        return self.dim not in self.pivots

    @property
    def rank(self) -> int:
        return len([p for p in self.pivots if p < self.dim])

    @property
    def solution_dim(self) -> int:
        return self.dim - self.rank

    def key(self) -> tuple:
        return tuple(tuple(row) for row in self.rows)

    def with_row(self, row: Sequence) -> "_AffineSystem":
        return _AffineSystem(self.field, self.dim, self.rows + [list(row)])

    def implies(self, row: Sequence) -> bool:
        """True when every solution of the system satisfies row."""
        extended = self.with_row(row)
        return extended.rank == self.rank and extended.consistent == self.consistent

    def particular_solution(self) -> Optional[list]:
        if not self.consistent:
            return None
        zero = self.field.zero()
        point = [zero] * self.dim
        for row, pivot in zip(self.rows, self.pivots):
            point[pivot] = row[self.dim]
        return point


def _hyperplane_row(h: Hyperplane) -> list:
    return list(h.normal) + [h.offset]


# ---------------------------------------------------------------------------
# Flats, Mobius function, polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Flat:
    """A nonempty intersection of hyperplanes.

    contains lists the indices of every hyperplane containing the flat; the
    ambient space is the flat with an empty index set.
    """

    contains: frozenset[int]
    dim: int
    mobius: int


@dataclass(frozen=True)
class FlatPoset:
    spec: ArrangementSpec
    flats: tuple[Flat, ...]

    @property
    def ambient(self) -> Flat:
        return next(f for f in self.flats if not f.contains)

    @property
    def rank(self) -> int:
        return self.spec.dim - min(f.dim for f in self.flats)

    def count_by_dim(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for f in self.flats:
            out[f.dim] = out.get(f.dim, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "flats": [
                {"hyperplanes": sorted(f.contains), "dim": f.dim, "mobius": f.mobius}
                for f in sorted(self.flats, key=lambda f: (-f.dim, sorted(f.contains)))
            ],
            "rank": self.rank,
        }


def flat_poset(spec: ArrangementSpec) -> FlatPoset:
    """All nonempty intersections, with Mobius values from the top.

    mu(ambient) = 1 and mu(X) = -sum of mu(Z) over flats Z strictly
    containing X; the zero-sum identity over each lower interval is a
    consequence and is exercised by the tests.
    """
    field = spec.field
    rows = [_hyperplane_row(h) for h in spec.hyperplanes]
    ambient = _AffineSystem(field, spec.dim)

    found: dict[frozenset, _AffineSystem] = {frozenset(): ambient}
    frontier = [(frozenset(), ambient)]
    while frontier:
        next_frontier = []
        for members, system in frontier:
            for idx, row in enumerate(rows):
                if idx in members:
                    continue
                candidate = system.with_row(row)
                if not candidate.consistent:
                    continue
                new_members = frozenset(
                    j for j, other in enumerate(rows) if candidate.implies(other)
                )
                if new_members not in found:
                    found[new_members] = candidate
                    next_frontier.append((new_members, candidate))
        frontier = next_frontier

    dims = {members: system.solution_dim for members, system in found.items()}
    order = sorted(found, key=lambda m: -dims[m])
    mobius: dict[frozenset, int] = {}
    for members in order:
        if not members:
            mobius[members] = 1
            continue
        total = 0
        for other in order:
            if other != members and other < members:
                total += mobius[other]
        mobius[members] = -total
    flats = tuple(
        Flat(contains=members, dim=dims[members], mobius=mobius[members])
        for members in order
    )
    return FlatPoset(spec=spec, flats=flats)


@dataclass(frozen=True)
class Polynomial:
    """Integer-coefficient polynomial, ascending coefficients."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        trimmed = list(self.coeffs)
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, "coeffs", tuple(trimmed))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        total = 0
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def __add__(self, other: "Polynomial") -> "Polynomial":
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            tuple(
                (self.coeffs[i] if i < len(self.coeffs) else 0)
                + (other.coeffs[i] if i < len(other.coeffs) else 0)
                for i in range(size)
            )
        )

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + Polynomial(tuple(-c for c in other.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.coeffs or not other.coeffs:
            return Polynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self):
        return f"Polynomial({self.coeffs})"


def characteristic_polynomial(poset: FlatPoset) -> Polynomial:
    """chi(t) = sum over flats of mu(X) t^dim(X)."""
    coeffs = [0] * (poset.spec.dim + 1)
    for f in poset.flats:
        coeffs[f.dim] += f.mobius
    return Polynomial(tuple(coeffs))


def poincare_polynomial(poset: FlatPoset) -> Polynomial:
    """pi(t) = sum over flats of |mu(X)| t^codim(X).

    Cross-checked in place against the substitution (-t)^d chi(-1/t); a
    mismatch would mean a broken Mobius computation and raises.
    """
    d = poset.spec.dim
    coeffs = [0] * (d + 1)
    for f in poset.flats:
        coeffs[d - f.dim] += abs(f.mobius)
    pi = Polynomial(tuple(coeffs))
    chi = characteristic_polynomial(poset)
    substituted = [0] * (d + 1)
    for j, c in enumerate(chi.coeffs):
        substituted[d - j] += c * (-1) ** (d - j)
    if Polynomial(tuple(substituted)) != pi:
        raise ArithmeticError("Poincare polynomial failed the substitution identity")
    return pi


def chamber_count(poset: FlatPoset) -> tuple[int, int]:
    """(total, bounded) chamber counts of the real form, by sign-alternation.

    total = (-1)^d chi(-1); bounded = (-1)^rank chi(1).  Requires a rational
    arrangement (the real picture is meaningless over a cyclotomic field).
    """
    if not poset.spec.field.is_rational:
        raise NotRealError("chamber counts need an arrangement defined over Q")
    chi = characteristic_polynomial(poset)
    d = poset.spec.dim
    total = (-1) ** d * chi(-1)
    bounded = (-1) ** poset.rank * chi(1)
    return total, bounded


# ---------------------------------------------------------------------------
# Chamber enumeration with exact witnesses
# ---------------------------------------------------------------------------

MAX_ENUM_DIM = 6
MAX_ENUM_HYPERPLANES = 12


@dataclass(frozen=True)
class Chamber:
    signs: str  # one of "+"/"-" per hyperplane, in spec order
    witness: tuple[Fraction, ...]


@dataclass(frozen=True)
class ChamberSet:
    spec: ArrangementSpec
    chambers: tuple[Chamber, ...]

    def __len__(self):
        return len(self.chambers)

    def sign_vectors(self) -> frozenset[str]:
        return frozenset(c.signs for c in self.chambers)

    def to_json(self) -> dict:
        return {
            "count": len(self.chambers),
            "chambers": [
                {"signs": c.signs, "witness": [format_rational(x) for x in c.witness]}
                for c in sorted(self.chambers, key=lambda c: c.signs)
            ],
        }


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _fm_feasible(
    ineqs: list[tuple[tuple[Fraction, ...], Fraction]], nvars: int
) -> Optional[list[Fraction]]:
    """Strict feasibility of {a . x + c > 0} by Fourier-Motzkin; returns a point.

    Rows are normalized and deduplicated at each elimination step; variables
    are eliminated in an order that minimizes the pos*neg product.  Midpoints
    of the final feasibility intervals are back-substituted, so the returned
    point satisfies every inequality strictly.
    """

    def normalize(rows):
        out = set()
        for coeffs, c in rows:
            scale = next((abs(v) for v in coeffs if v), None)
            if scale is None:
                if c <= 0:
                    return None
                continue
            out.add((tuple(v / scale for v in coeffs), c / scale))
        return out

    def solve(rows: set, nvars: int) -> Optional[list[Fraction]]:
        if nvars == 0:
            return []
        # choose the variable with the smallest pos*neg fan-out
        best_var, best_cost = None, None
        for var in range(nvars):
            pos = sum(1 for coeffs, _ in rows if coeffs[var] > 0)
            neg = sum(1 for coeffs, _ in rows if coeffs[var] < 0)
            cost = pos * neg
            if best_cost is None or cost < best_cost:
                best_var, best_cost = var, cost
        var = best_var
        uppers, lowers, rest = [], [], []
        for coeffs, c in rows:
            v = coeffs[var]
            reduced = coeffs[:var] + coeffs[var + 1 :]
            if v > 0:
                lowers.append((tuple(x / v for x in reduced), c / v))  # x_var > -(r.y + c)
            elif v < 0:
                uppers.append((tuple(x / -v for x in reduced), c / -v))  # x_var < r.y + c
            else:
                rest.append((reduced, c))
        combined = list(rest)
        for lc, lcst in lowers:
            for uc, ucst in uppers:
                combined.append(
                    (tuple(u + l for u, l in zip(uc, lc)), ucst + lcst)
                )
        normalized = normalize(combined)
        if normalized is None:
            return None
        partial = solve(normalized, nvars - 1)
        if partial is None:
            return None
        lo, hi = None, None
        for lc, lcst in lowers:
            bound = -(_dot(lc, partial) + lcst)
            lo = bound if lo is None else max(lo, bound)
        for uc, ucst in uppers:
            bound = _dot(uc, partial) + ucst
            hi = bound if hi is None else min(hi, bound)
        if lo is None and hi is None:
            value = Fraction(0)
        elif lo is None:
            value = hi - 1
        elif hi is None:
            value = lo + 1
        else:
            if not lo < hi:
                return None
            value = (lo + hi) / 2
        return partial[:var] + [value] + partial[var:]

    normalized = normalize(ineqs)
    if normalized is None:
        return None
    return solve(normalized, nvars)


def _chamber_rows(
    spec: ArrangementSpec, signs: Sequence[int], upto: int
) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    rows = []
    for i in range(upto):
        h = spec.hyperplanes[i]
        s = signs[i]
        rows.append((tuple(s * a for a in h.normal), -s * h.offset))
    return rows


def _interior_on_hyperplane(
    rows: list[tuple[tuple[Fraction, ...], Fraction]],
    normal: tuple[Fraction, ...],
    offset: Fraction,
) -> Optional[list[Fraction]]:
    """A point with normal.x = offset satisfying all rows strictly, or None."""
    pivot = next(i for i, v in enumerate(normal) if v)
    inv = 1 / normal[pivot]
    # substitute x_pivot = (offset - sum_{j != pivot} normal_j x_j) / normal_pivot
    reduced = []
    for coeffs, c in rows:
        factor = coeffs[pivot] * inv
        new_coeffs = tuple(
            coeffs[j] - factor * normal[j] for j in range(len(coeffs)) if j != pivot
        )
        reduced.append((new_coeffs, c + factor * offset))
    solution = _fm_feasible(reduced, len(normal) - 1)
    if solution is None:
        return None
    lifted = list(solution)
    rest = sum(
        (normal[j] * solution[k] for k, j in enumerate(i for i in range(len(normal)) if i != pivot)),
        Fraction(0),
    )
    lifted.insert(pivot, (offset - rest) * inv)
    return lifted


def _step_off(
    rows: list[tuple[tuple[Fraction, ...], Fraction]],
    point: list[Fraction],
    direction: tuple[Fraction, ...],
) -> Fraction:
    """Half the exit time from {rows strictly satisfied} along direction."""
    limit = None
    for coeffs, c in rows:
        slope = _dot(coeffs, direction)
        if slope < 0:
            t = -(_dot(coeffs, point) + c) / slope
            limit = t if limit is None else min(limit, t)
    return (limit / 2) if limit is not None else Fraction(1)


def _enumerate_chambers(
    spec: ArrangementSpec, box_rows: Optional[list] = None
) -> list[tuple[list[int], list[Fraction]]]:
    dim = spec.dim
    chambers: list[tuple[list[int], list[Fraction]]] = [
        ([], [Fraction(0)] * dim)
    ]
    if box_rows:
        witness = _fm_feasible(list(box_rows), dim)
        if witness is None:
            return []
        chambers = [([], witness)]
    for idx, h in enumerate(spec.hyperplanes):
        normal = h.normal
        offset = h.offset
        nn = _dot(normal, normal)
        updated: list[tuple[list[int], list[Fraction]]] = []
        for signs, witness in chambers:
            rows = _chamber_rows(spec, signs, idx)
            if box_rows:
                rows = rows + box_rows
            gap = _dot(normal, witness) - offset
            crossing: Optional[list[Fraction]] = None
            if gap == 0:
                crossing = witness
            else:
                side = 1 if gap > 0 else -1
                direction = tuple(-side * a for a in normal)
                t_hit = abs(gap) / nn
                t_exit = None
                for coeffs, c in rows:
                    slope = _dot(coeffs, direction)
                    if slope < 0:
                        t = -(_dot(coeffs, witness) + c) / slope
                        t_exit = t if t_exit is None else min(t_exit, t)
                if t_exit is None or t_exit > t_hit:
                    far_t = t_hit + ((t_exit - t_hit) / 2 if t_exit is not None else Fraction(1))
                    far = [w + far_t * d for w, d in zip(witness, direction)]
                    updated.append((signs + [side], witness))
                    updated.append((signs + [-side], far))
                    continue
                crossing = _interior_on_hyperplane(rows, normal, offset)
                if crossing is None:
                    updated.append((signs + [side], witness))
                    continue
            # witness sits on the new hyperplane strictly inside the chamber:
            # nudge along both normal directions
            plus_dir = tuple(normal)
            minus_dir = tuple(-a for a in normal)
            t_plus = _step_off(rows, crossing, plus_dir)
            t_minus = _step_off(rows, crossing, minus_dir)
            plus_point = [w + t_plus * d for w, d in zip(crossing, plus_dir)]
            minus_point = [w + t_minus * d for w, d in zip(crossing, minus_dir)]
            updated.append((signs + [1], plus_point))
            updated.append((signs + [-1], minus_point))
        chambers = updated
    return chambers


def enumerate_chambers(spec: ArrangementSpec, bound: Optional[Fraction] = None) -> ChamberSet:
    """All chambers of a rational arrangement, with exact interior witnesses.

    With bound given, only chambers meeting the open box |x_i| < bound are
    reported (sign vectors still refer to the arrangement's hyperplanes).
    Guard rails: dimension <= 6 and at most 12 hyperplanes.
    """
    if not spec.field.is_rational:
        raise NotRealError("chamber enumeration needs an arrangement defined over Q")
    if spec.dim > MAX_ENUM_DIM or len(spec.hyperplanes) > MAX_ENUM_HYPERPLANES:
        raise SizeGuardError(
            f"chamber enumeration capped at dim {MAX_ENUM_DIM} and "
            f"{MAX_ENUM_HYPERPLANES} hyperplanes"
        )
    box_rows = None
    if bound is not None:
        bound = Fraction(bound)
        if bound <= 0:
            raise ValueError("bound must be positive")
        box_rows = []
        for i in range(spec.dim):
            unit = tuple(Fraction(int(i == j)) for j in range(spec.dim))
            box_rows.append((unit, bound))
            box_rows.append((tuple(-u for u in unit), bound))
    raw = _enumerate_chambers(spec, box_rows)
    chambers = tuple(
        Chamber(
            signs="".join("+" if s > 0 else "-" for s in signs),
            witness=tuple(witness),
        )
        for signs, witness in raw
    )
    return ChamberSet(spec=spec, chambers=chambers)


# ---------------------------------------------------------------------------
# Centrality, essentialization, simpliciality
# ---------------------------------------------------------------------------


def common_point(spec: ArrangementSpec) -> Optional[list]:
    system = _AffineSystem(
        spec.field, spec.dim, [_hyperplane_row(h) for h in spec.hyperplanes]
    )
    return system.particular_solution() if system.consistent else None


def essentialize(spec: ArrangementSpec) -> ArrangementSpec:
    """Quotient a central arrangement by the common intersection subspace.

    Coordinates are taken along a row-space basis of the normal matrix; each
    normal is rewritten in those coordinates.  Offsets become zero after
    translating a common point to the origin.
    """
    center = common_point(spec)
    if center is None:
        raise CentralityError("essentialization requires a central arrangement")
    field = spec.field
    zero = field.zero()
    normals = [list(h.normal) for h in spec.hyperplanes]
    basis, _ = _rref(normals, field)
    rank = len(basis)
    if rank == spec.dim and all(c == zero for c in center):
        return spec
    new_rows = []
    for h in spec.hyperplanes:
        # solve a = sum c_k basis_k; with basis in RREF the coefficients are
        # read off at the pivot columns after elimination
        system_rows = [list(col) for col in zip(*basis)]  # basis^T, rank columns
        augmented = [row + [a] for row, a in zip(system_rows, h.normal)]
        solved, pivots = _rref(augmented, field)
        if rank in pivots:
            raise CentralityError("normal escaped the row space; not central")
        coeffs = [zero] * rank
        for row, pivot in zip(solved, pivots):
            coeffs[pivot] = row[rank]
        new_rows.append((tuple(coeffs), zero))
    return make_arrangement(rank, field, new_rows, label=f"{spec.label} (essential)")


@dataclass(frozen=True)
class SimplicialityReport:
    simplicial: bool
    rank: int
    chamber_count: int
    wall_counts: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.simplicial

    def to_json(self) -> dict:
        return {
            "simplicial": self.simplicial,
            "rank": self.rank,
            "chambers": self.chamber_count,
            "wall_counts": list(self.wall_counts),
        }


def is_simplicial(spec: ArrangementSpec) -> SimplicialityReport:
    """Whether every chamber of the essentialized arrangement is simplicial.

    A chamber is simplicial when it has exactly rank walls with linearly
    independent normals.  Walls are read off the full chamber list: the i-th
    hyperplane bounds a chamber exactly when flipping the i-th sign of its
    sign vector yields another realizable chamber.
    """
    if not spec.field.is_rational:
        raise NotRealError("simpliciality is checked on the rational real form")
    essential = essentialize(spec)  # raises CentralityError when not central
    rank = essential.dim
    raw = _enumerate_chambers(essential)
    realized = {"".join("+" if s > 0 else "-" for s in signs) for signs, _ in raw}
    wall_counts = []
    simplicial = True
    for signs in sorted(realized):
        walls = []
        for i in range(len(signs)):
            flipped = signs[:i] + ("-" if signs[i] == "+" else "+") + signs[i + 1 :]
            if flipped in realized:
                walls.append(i)
        wall_counts.append(len(walls))
        if len(walls) != rank:
            simplicial = False
            continue
        wall_normals = [list(essential.hyperplanes[i].normal) for i in walls]
        _, pivots = _rref(wall_normals, essential.field)
        if len(pivots) != rank:
            simplicial = False
    return SimplicialityReport(
        simplicial=simplicial,
        rank=rank,
        chamber_count=len(raw),
        wall_counts=tuple(wall_counts),
    )


# ---------------------------------------------------------------------------
# Finite field point counts
# ---------------------------------------------------------------------------

MAX_FIELD_POINTS = 2_000_000


def _integer_rows(spec: ArrangementSpec) -> list[list[int]]:
    if not spec.field.is_rational:
        raise NotRealError("finite field counts need integer (rational) coefficients")
    rows = []
    for h in spec.hyperplanes:
        entries = list(h.normal) + [h.offset]
        lcm = 1
        for e in entries:
            lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
        row = [int(e * lcm) for e in entries]
        g = 0
        for v in row:
            g = math.gcd(g, v)
        rows.append([v // g for v in row] if g else row)
    return rows


def _nonzero_minor_primes(rows: list[list[int]]) -> set[int]:
    def det(matrix: list[list[int]]) -> int:
        n = len(matrix)
        if n == 1:
            return matrix[0][0]
        total = 0
        sign = 1
        for j in range(n):
            if matrix[0][j]:
                minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
                total += sign * matrix[0][j] * det(minor)
            sign = -sign
        return total

    primes: set[int] = set()
    ncols = len(rows[0]) if rows else 0
    for size in range(1, min(len(rows), ncols) + 1):
        for row_idx in combinations(range(len(rows)), size):
            for col_idx in combinations(range(ncols), size):
                value = abs(det([[rows[r][c] for c in col_idx] for r in row_idx]))
                p = 2
                while p * p <= value:
                    if value % p == 0:
                        primes.add(p)
                        while value % p == 0:
                            value //= p
                    p += 1
                if value > 1:
                    primes.add(value)
    return primes


def bad_primes(spec: ArrangementSpec) -> set[int]:
    """Primes dividing some nonzero minor of the integer system [A | b].

    Avoiding all of them preserves the rank and consistency pattern of every
    subsystem mod q, which forces the point count to equal chi(q).
    """
    return _nonzero_minor_primes(_integer_rows(spec))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def good_primes(spec: ArrangementSpec, count: int = 2) -> list[int]:
    """The smallest admissible primes for finite_field_count."""
    rows = _integer_rows(spec)
    bad = _nonzero_minor_primes(rows)
    floor = max((abs(v) for row in rows for v in row), default=1)
    out: list[int] = []
    q = floor
    while len(out) < count:
        q += 1
        if _is_prime(q) and q not in bad:
            out.append(q)
    return out


def finite_field_count(spec: ArrangementSpec, q: int) -> int:
    """Points of F_q^d avoiding every hyperplane, by direct enumeration.

    Requires a prime q larger than every coefficient magnitude and outside
    the precomputed bad-prime set.
    """
    rows = _integer_rows(spec)
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    if any(abs(v) >= q for row in rows for v in row):
        raise BadPrimeError(f"q = {q} does not exceed all coefficient magnitudes")
    if q in _nonzero_minor_primes(rows):
        raise BadPrimeError(f"q = {q} is a bad prime for this arrangement")
    dim = spec.dim
    if q ** dim > MAX_FIELD_POINTS:
        raise SizeGuardError(f"{q}^{dim} exceeds the enumeration cap")
    mod_rows = [[v % q for v in row] for row in rows]
    count = 0
    point = [0] * dim
    total = q ** dim
    for index in range(total):
        value = index
        for i in range(dim):
            point[i] = value % q
            value //= q
        ok = True
        for row in mod_rows:
            acc = -row[dim]
            for a, x in zip(row, point):
                acc += a * x
            if acc % q == 0:
                ok = False
                break
        count += ok
    return count


# ---------------------------------------------------------------------------
# Deletion and restriction (used by the property tests and reports)
# ---------------------------------------------------------------------------


def delete_hyperplane(spec: ArrangementSpec, index: int) -> ArrangementSpec:
    remaining = [
        (h.normal, h.offset) for i, h in enumerate(spec.hyperplanes) if i != index
    ]
    return make_arrangement(
        spec.dim, spec.field, remaining, label=f"{spec.label} minus {index}"
    )


def restrict_to_hyperplane(spec: ArrangementSpec, index: int) -> ArrangementSpec:
    """The multiset of traces K cap H as an arrangement inside H."""
    field = spec.field
    zero = field.zero()
    h = spec.hyperplanes[index]
    # parametrize H: x = anchor + B^T y with B a null-space basis of normal
    system = _AffineSystem(field, spec.dim, [_hyperplane_row(h)])
    anchor = system.particular_solution()
    reduced, pivots = _rref([list(h.normal)], field)
    pivot_set = set(pivots)
    free_cols = [c for c in range(spec.dim) if c not in pivot_set]
    basis = []
    for c in free_cols:
        vec = [zero] * spec.dim
        vec[c] = field.one()
        for row, p in zip(reduced, pivots):
            vec[p] = -row[c]
        basis.append(vec)
    traces = []
    for i, other in enumerate(spec.hyperplanes):
        if i == index:
            continue
        new_normal = tuple(
            sum((b * a for b, a in zip(vec, other.normal)), zero) for vec in basis
        )
        if all(v == zero for v in new_normal):
            continue  # parallel to H, empty trace
        new_offset = other.offset - sum(
            (a * x for a, x in zip(other.normal, anchor)), zero
        )
        traces.append((new_normal, new_offset))
    return make_arrangement(
        len(free_cols), field, traces, label=f"{spec.label} | {index}"
    )
