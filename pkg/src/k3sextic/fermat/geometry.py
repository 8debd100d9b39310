"""Points of P^2 over GF(25), the Hermitian sextic B_F and its tangent lines."""

from __future__ import annotations

import enum
from functools import lru_cache
from itertools import product

from ..gf import field as F

Point = tuple[int, int, int]


def normalize(p) -> Point:
    """Scale so the first nonzero coordinate is 1."""
    p = tuple(int(c) for c in p)
    for c in p:
        if c:
            ic = F.inv(c)
            return tuple(F.mul(ic, v) for v in p)
    raise ValueError("zero vector is not a projective point")


def point_key(p: Point):
    return tuple(F.order_key(c) for c in p)


@lru_cache(maxsize=None)
def plane_points() -> tuple[Point, ...]:
    """All 651 points of P^2(GF(25)), normalized, in a fixed order."""
    pts = {normalize(v) for v in product(range(F.Q), repeat=3) if any(v)}
    return tuple(sorted(pts, key=point_key))


def fermat_value(p) -> int:
    return F.add(F.add(F.power(p[0], 6), F.power(p[1], 6)), F.power(p[2], 6))


@lru_cache(maxsize=None)
def hermitian_points() -> tuple[Point, ...]:
    """The 126 GF(25)-points of x^6 + y^6 + z^6 = 0."""
    return tuple(p for p in plane_points() if fermat_value(p) == 0)


def hermitian_form(u, v) -> int:
    """sum u_i * v_i^5."""
    return F.add(F.add(F.mul(u[0], F.frob(v[0])), F.mul(u[1], F.frob(v[1]))), F.mul(u[2], F.frob(v[2])))


def tangent_line(p: Point) -> Point:
    """Coefficients (a^5, b^5, c^5) of the tangent line to B_F at p."""
    return tuple(F.frob(c) for c in p)


def line_points(line) -> list[Point]:
    return [p for p in plane_points() if dot(line, p) == 0]


def dot(u, v) -> int:
    return F.add(F.add(F.mul(u[0], v[0]), F.mul(u[1], v[1])), F.mul(u[2], v[2]))


def cross(u, v) -> Point:
    m, s = F.mul, F.sub
    return (s(m(u[1], v[2]), m(u[2], v[1])),
            s(m(u[2], v[0]), m(u[0], v[2])),
            s(m(u[0], v[1]), m(u[1], v[0])))


def colinear(p, q, r) -> bool:
    return dot(cross(p, q), r) == 0


# --- GF(625) = GF(25)[u]/(u^2 - sqrt2), used only to classify tangents ----

class GF625:
    """Element a0 + a1*u of GF(625) with u^2 = sqrt(2) (a non-square in GF(25))."""

    __slots__ = ("a0", "a1")
    NR = F.R2

    def __init__(self, a0: int, a1: int = 0):
        self.a0, self.a1 = a0, a1

    def __add__(self, o):
        o = _lift(o)
        return GF625(F.add(self.a0, o.a0), F.add(self.a1, o.a1))

    def __sub__(self, o):
        o = _lift(o)
        return GF625(F.sub(self.a0, o.a0), F.sub(self.a1, o.a1))

    def __mul__(self, o):
        o = _lift(o)
        m, a = F.mul, F.add
        return GF625(a(m(self.a0, o.a0), m(self.NR, m(self.a1, o.a1))),
                     a(m(self.a0, o.a1), m(self.a1, o.a0)))

    __rmul__ = __mul__
    __radd__ = __add__

    def __eq__(self, o):
        o = _lift(o)
        return self.a0 == o.a0 and self.a1 == o.a1

    def __hash__(self):
        return hash((self.a0, self.a1))

    def __bool__(self):
        return bool(self.a0 or self.a1)

    def __pow__(self, n: int):
        r, b = GF625(F.ONE), self
        if n < 0:
            b, n = b.inv(), -n
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def inv(self):
        # norm to GF(25): (a0 + a1 u)(a0 - a1 u) = a0^2 - NR a1^2
        nrm = F.sub(F.mul(self.a0, self.a0), F.mul(self.NR, F.mul(self.a1, self.a1)))
        ni = F.inv(nrm)
        return GF625(F.mul(self.a0, ni), F.neg(F.mul(self.a1, ni)))

    def is_gf25(self) -> bool:
        return self.a1 == 0

    def __repr__(self):
        return f"GF625({F.to_str(self.a0)}, {F.to_str(self.a1)})"

    @classmethod
    def all(cls):
        return [cls(a, b) for a in range(F.Q) for b in range(F.Q)]


def _lift(o):
    return o if isinstance(o, GF625) else GF625(o)


def _normalize625(p):
    for c in p:
        if c:
            ic = c.inv()
            return tuple(ic * v for v in p)
    raise ValueError("zero vector")


@lru_cache(maxsize=None)
def nonrational_fermat_points(limit: int = 4) -> tuple:
    """A few points of B_F defined over GF(625) but not over GF(25)."""
    out = []
    one, zero = GF625(F.ONE), GF625(0)
    for x in GF625.all():
        for y in GF625.all():
            v = x ** 6 + y ** 6 + one
            if not v and not (x.is_gf25() and y.is_gf25()):
                out.append((x, y, one))
                if len(out) >= limit:
                    return tuple(out)
    return tuple(out)


class TangentCase(enum.Enum):
    MULT5_NONRATIONAL = "mult5"
    MULT6_RATIONAL = "mult6"


class NotTangentError(ValueError):
    pass


def _binary_restriction(line, p):
    """Coefficients of f(p + t*q) in t (f = x^6+y^6+z^6), q another point of the line."""
    line = tuple(_lift(c) for c in line)
    p = tuple(_lift(c) for c in p)
    # a second point: cross with a coordinate vector not proportional to line
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        e = tuple(GF625(c) for c in e)
        q = _cross625(line, e)
        if any(q) and any(_cross625(q, p)):
            break
    coeffs = [GF625(0)] * 7
    # expand sum_i (p_i + t q_i)^6
    binom = [1, 6, 15, 20, 15, 6, 1]
    for i in range(3):
        for k in range(7):
            c = binom[k] % 5
            if not c:
                continue
            coeffs[k] = coeffs[k] + GF625(c) * (p[i] ** (6 - k)) * (q[i] ** k)
    return coeffs, q


def _cross625(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def classify_tangent(line, contact) -> tuple[TangentCase, tuple]:
    """Classify a line tangent to B_F at ``contact``.

    Coordinates may be GF(25) ints or :class:`GF625` elements.  Returns the
    case tag and the residual intersection point (``contact`` itself in the
    multiplicity-6 case).
    """
    line = tuple(_lift(c) for c in line)
    contact = tuple(_lift(c) for c in contact)
    if _dot625(line, contact):
        raise NotTangentError("contact point not on line")
    coeffs, q = _binary_restriction(line, contact)
    mult = next((k for k, c in enumerate(coeffs) if c), 7)
    if mult == 6:
        if not all(c.is_gf25() for c in contact):
            raise NotTangentError("multiplicity-6 contact at a non-rational point")
        return TangentCase.MULT6_RATIONAL, contact
    if mult == 5:
        # remaining root t = -c5/c6
        t = GF625(0) - coeffs[5] * coeffs[6].inv()
        residual = _normalize625(tuple(a + t * b for a, b in zip(contact, q)))
        return TangentCase.MULT5_NONRATIONAL, residual
    raise NotTangentError(f"line meets B_F at the contact point with multiplicity {mult}")


def _dot625(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def frob625(p, k: int = 1):
    """Coordinatewise x -> x^(5^k)."""
    return tuple(c ** (5 ** k) for c in p)


def tangent_line625(p):
    return tuple(c ** 5 for c in p)
