"""Exact scalar arithmetic: rationals, cyclotomic field elements, complex points.

Every decision that feeds a rank computation, a set membership test, or a
fiber count is made in exact arithmetic.  Rationals are ``fractions.Fraction``
(arbitrary precision, always reduced, positive denominator).  An element of
Q(zeta_m) is a dense coefficient vector in the power basis
1, zeta, ..., zeta^(phi(m)-1), reduced modulo the m-th cyclotomic polynomial.
Complex points come in an exact mode (Gaussian rationals) and an approximate
mode (floats plus an explicit tolerance carried by the point).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Union

Rational = Fraction
RationalLike = Union[int, Fraction]

#: Default comparison tolerance for approximate-mode points.  Comparison APIs
#: take eps explicitly; this value is only the documented fallback.
DEFAULT_EPS = 1e-9


class InvalidOrderError(ValueError):
    """Cyclotomic order must be a positive integer."""


class OrderMismatchError(ValueError):
    """Arithmetic attempted between elements of different cyclotomic fields."""


def parse_rational(text: str) -> Fraction:
    """Parse a "p/q" or "p" decimal string into an exact rational."""
    return Fraction(str(text).strip())


def format_rational(q: RationalLike) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def euler_phi(m: int) -> int:
    if m < 1:
        raise InvalidOrderError(f"order must be >= 1, got {m}")
    result = m
    n, p = m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


# ---------------------------------------------------------------------------
# Integer polynomial helpers (ascending coefficient lists) used only to build
# cyclotomic polynomials; Fraction polynomial helpers used for field division.
# ---------------------------------------------------------------------------


def _int_poly_div(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials, den monic; remainder must vanish.
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for shift in range(len(out) - 1, -1, -1):
        c = num[shift + len(den) - 1]
        out[shift] = c
        if c:
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    assert all(c == 0 for c in num), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise InvalidOrderError(f"order must be >= 1, got {m}")
    if m == 1:
        return (-1, 1)
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _int_poly_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for shift in range(len(q) - 1, -1, -1):
        c = a[shift + len(b) - 1] * inv_lead
        q[shift] = c
        if c:
            for i, d in enumerate(b):
                a[shift + i] -= c * d
    return _trim(q), _trim(a)


class Cyclotomic:
    """An element of Q(zeta_m) in the power basis modulo Phi_m.

    Coefficient vectors always have length phi(m).  Arithmetic between
    elements of different orders raises OrderMismatchError; ints and
    Fractions coerce into the constant coefficient.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[RationalLike]):
        if order < 1:
            raise InvalidOrderError(f"order must be >= 1, got {order}")
        phi = euler_phi(order)
        vec = [Fraction(c) for c in coeffs]
        if len(vec) > phi:
            vec = self._reduce(order, vec)
        vec += [Fraction(0)] * (phi - len(vec))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(vec))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Cyclotomic elements are immutable")

    @staticmethod
    def _reduce(order: int, vec: list[Fraction]) -> list[Fraction]:
        phi_poly = [Fraction(c) for c in cyclotomic_polynomial(order)]
        _, rem = _poly_divmod(_trim(list(vec)), phi_poly)
        return rem

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "Cyclotomic":
        return cls(order, [])

    @classmethod
    def one(cls, order: int) -> "Cyclotomic":
        return cls(order, [1])

    @classmethod
    def from_rational(cls, order: int, value: RationalLike) -> "Cyclotomic":
        return cls(order, [Fraction(value)])

    @classmethod
    def zeta(cls, order: int) -> "Cyclotomic":
        """The primitive m-th root of unity generating the field."""
        return cls(order, [0, 1])

    # -- structure ----------------------------------------------------------

    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                raise OrderMismatchError(
                    f"cannot mix Q(zeta_{self.order}) with Q(zeta_{other.order})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(self.order, other)
        return NotImplemented  # type: ignore[return-value]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(self.order, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(format_rational(c))
            else:
                base = f"z{k}" if k > 1 else "z"
                terms.append(base if c == 1 else f"{format_rational(c)}*{base}")
        body = " + ".join(terms) if terms else "0"
        return f"Cyclotomic({self.order}, {body})"

    def sort_key(self) -> tuple[Fraction, ...]:
        return self.coeffs

    def as_rational(self) -> Optional[Fraction]:
        """The element as a Fraction when it lies in Q, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prod = _poly_mul(_trim(list(self.coeffs)), _trim(list(other.coeffs)))
        return Cyclotomic(self.order, self._reduce(self.order, prod))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via the extended Euclidean algorithm.

        gcd(a, Phi_m) is a nonzero constant because Phi_m is irreducible
        over Q and deg a < deg Phi_m; Bezout gives u with u*a = gcd mod Phi_m.
        """
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        phi_poly = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r0, r1 = phi_poly, _trim(list(self.coeffs))
        u0, u1 = [], [Fraction(1)]  # invariant: u_k * a == r_k  (mod Phi_m)
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1))
        assert len(r0) == 1, "cyclotomic polynomial must be coprime to a nonzero element"
        scale = 1 / r0[0]
        return Cyclotomic(self.order, [c * scale for c in u0])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Cyclotomic.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def embed(self, target_order: int) -> "Cyclotomic":
        """Image under Q(zeta_m) -> Q(zeta_L), zeta_m -> zeta_L^(L/m), m | L."""
        if target_order % self.order != 0:
            raise OrderMismatchError(
                f"{self.order} does not divide target order {target_order}"
            )
        zeta = Cyclotomic.zeta(target_order) ** (target_order // self.order)
        result = Cyclotomic.zero(target_order)
        for c in reversed(self.coeffs):
            result = result * zeta + c
        return result

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, order: int, data: dict) -> "Cyclotomic":
        return cls(order, [parse_rational(c) for c in data["coeffs"]])


def rational_sqrt(value: RationalLike) -> Optional[Fraction]:
    """Exact square root of a rational, or None when it is not a square."""
    value = Fraction(value)
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return Fraction(rn, rd)


class ComplexPoint:
    """A point of C, either exact (Gaussian rational) or approximate.

    Exact points carry Fraction coordinates and support decidable equality.
    Approximate points carry float coordinates plus the eps they were built
    with; comparisons take an explicit eps and fall back to the carried one.
    Mixing modes in arithmetic coerces to approximate.
    """

    EXACT = "exact"
    APPROX = "approx"

    __slots__ = ("re", "im", "mode", "eps")

    def __init__(self, re, im=0, mode: str = EXACT, eps: Optional[float] = None):
        if mode == self.EXACT:
            object.__setattr__(self, "re", Fraction(re))
            object.__setattr__(self, "im", Fraction(im))
            object.__setattr__(self, "eps", None)
        elif mode == self.APPROX:
            if eps is None or not eps > 0:
                raise ValueError("approximate points require an explicit eps > 0")
            object.__setattr__(self, "re", float(re))
            object.__setattr__(self, "im", float(im))
            object.__setattr__(self, "eps", float(eps))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexPoint is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def exact(cls, re: RationalLike, im: RationalLike = 0) -> "ComplexPoint":
        return cls(re, im, mode=cls.EXACT)

    @classmethod
    def approx(cls, re: float, im: float = 0.0, eps: float = DEFAULT_EPS) -> "ComplexPoint":
        return cls(re, im, mode=cls.APPROX, eps=eps)

    @classmethod
    def from_complex(cls, z: complex, eps: float = DEFAULT_EPS) -> "ComplexPoint":
        return cls(z.real, z.imag, mode=cls.APPROX, eps=eps)

    @property
    def is_exact(self) -> bool:
        return self.mode == self.EXACT

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def to_approx(self, eps: float = DEFAULT_EPS) -> "ComplexPoint":
        if self.is_exact:
            return ComplexPoint.approx(float(self.re), float(self.im), eps)
        return self

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other) -> tuple["ComplexPoint", "ComplexPoint"]:
        if isinstance(other, (int, Fraction)):
            other = ComplexPoint.exact(other)
        elif isinstance(other, complex):
            other = ComplexPoint.from_complex(other, self.eps or DEFAULT_EPS)
        elif isinstance(other, float):
            other = ComplexPoint.approx(other, 0.0, self.eps or DEFAULT_EPS)
        if not isinstance(other, ComplexPoint):
            raise TypeError(f"cannot combine ComplexPoint with {type(other).__name__}")
        a, b = self, other
        if a.is_exact and not b.is_exact:
            a = a.to_approx(b.eps)
        elif b.is_exact and not a.is_exact:
            b = b.to_approx(a.eps)
        return a, b

    def _out_eps(self, other: "ComplexPoint") -> float:
        return max(self.eps or 0.0, other.eps or 0.0) or DEFAULT_EPS

    def __add__(self, other):
        a, b = self._pair(other)
        if a.is_exact:
            return ComplexPoint.exact(a.re + b.re, a.im + b.im)
        return ComplexPoint.approx(a.re + b.re, a.im + b.im, a._out_eps(b))

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact:
            return ComplexPoint.exact(-self.re, -self.im)
        return ComplexPoint.approx(-self.re, -self.im, self.eps)

    def __sub__(self, other):
        a, b = self._pair(other)
        return a + (-b)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        a, b = self._pair(other)
        re = a.re * b.re - a.im * b.im
        im = a.re * b.im + a.im * b.re
        if a.is_exact:
            return ComplexPoint.exact(re, im)
        return ComplexPoint.approx(re, im, a._out_eps(b))

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexPoint":
        if self.is_exact:
            return ComplexPoint.exact(self.re, -self.im)
        return ComplexPoint.approx(self.re, -self.im, self.eps)

    def norm2(self):
        """|z|^2, exact for exact points."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ComplexPoint":
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("inverse of zero complex point")
        if self.is_exact:
            return ComplexPoint.exact(self.re / n, -self.im / n)
        return ComplexPoint.approx(self.re / n, -self.im / n, self.eps)

    def __truediv__(self, other):
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ComplexPoint.exact(1) if self.is_exact else ComplexPoint.approx(1.0, 0.0, self.eps)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- comparison ----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and self.is_exact:
            other = ComplexPoint.exact(other)
        if not isinstance(other, ComplexPoint):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self) -> int:
        return hash((self.mode, self.re, self.im))

    def isclose(self, other, eps: Optional[float] = None) -> bool:
        """|self - other| <= eps; eps falls back to the carried tolerance."""
        a, b = self._pair(other)
        if eps is None:
            eps = self._out_eps(b if isinstance(other, ComplexPoint) else a)
        if a.is_exact and b.is_exact:
            return (a - b).norm2() <= Fraction(eps) ** 2
        return abs(a.to_complex() - b.to_complex()) <= eps

    def __repr__(self) -> str:
        if self.is_exact:
            return f"ComplexPoint({format_rational(self.re)}, {format_rational(self.im)})"
        return f"ComplexPoint({self.re!r}, {self.im!r}, approx, eps={self.eps!r})"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        if self.is_exact:
            return {"re": format_rational(self.re), "im": format_rational(self.im), "mode": self.EXACT}
        return {"re": self.re, "im": self.im, "mode": self.APPROX, "eps": self.eps}

    @classmethod
    def from_json(cls, data) -> "ComplexPoint":
        if isinstance(data, dict) and "mode" in data:
            if data["mode"] == cls.APPROX:
                return cls.approx(float(data["re"]), float(data["im"]), float(data.get("eps", DEFAULT_EPS)))
            return cls.exact(parse_rational(data["re"]), parse_rational(data.get("im", 0)))
        if isinstance(data, dict):
            return cls.exact(parse_rational(data["re"]), parse_rational(data.get("im", 0)))
        return cls.exact(parse_rational(data))


def complex_sqrt_exact(z: ComplexPoint) -> Optional[ComplexPoint]:
    """An exact square root of an exact point when one exists in Q(i).

    z = (x+yi)^2 forces x^2 = (Re z + |z|)/2 with |z| rational, so the search
    reduces to two rational square roots.  Returns the root with x > 0, or
    x == 0 and y >= 0.
    """
    if not z.is_exact:
        raise ValueError("exact square root requires an exact point")
    a, b = z.re, z.im
    if b == 0:
        if a >= 0:
            x = rational_sqrt(a)
            return ComplexPoint.exact(x) if x is not None else None
        y = rational_sqrt(-a)
        return ComplexPoint.exact(0, y) if y is not None else None
    s = rational_sqrt(a * a + b * b)
    if s is None:
        return None
    x = rational_sqrt((a + s) / 2)
    if x is None or x == 0:
        return None
    y = b / (2 * x)
    return ComplexPoint.exact(x, y)


def complex_to_cyclotomic(z: ComplexPoint, order: int) -> Cyclotomic:
    """Embed an exact Gaussian rational into Q(zeta_L) with 4 | L (i = zeta_L^(L/4))."""
    if not z.is_exact:
        raise ValueError("only exact points embed into a cyclotomic field")
    if order % 4 != 0:
        raise OrderMismatchError(f"embedding Q(i) needs 4 | order, got {order}")
    i_unit = Cyclotomic.zeta(order) ** (order // 4)
    return Cyclotomic.from_rational(order, z.re) + i_unit * Fraction(z.im)
