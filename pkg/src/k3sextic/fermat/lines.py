"""The 252 h_F-lines: splitting of tangent lines, sign normalization,
intersection numbers and NS classes."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from ..gf import field as F
from ..gf.groebner import INFINITE, buchberger, quotient_dimension, surface_equation
from ..gf.poly import HOMOG, PLANE, Poly, parse_poly
from .geometry import Point, hermitian_points, normalize, tangent_line, cross

# Basis lines: (sign, point, generator, generator) in the polynomial grammar,
# r2 standing for sqrt(2).  Hardcoded ground truth; the derived lines are
# checked against these.
BASIS_TABLE: tuple[tuple[str, str, str, str], ...] = (
    ("+", "0 1 1+r2", "y+4*r2*z+z", "x^3+4*w"),
    ("-", "0 1 1+r2", "y+4*r2*z+z", "w+x^3"),
    ("+", "0 1 1+4*r2", "x^3+4*w", "y+r2*z+z"),
    ("+", "0 1 2", "x^3+4*w", "y+2*z"),
    ("+", "0 1 3", "x^3+4*w", "y+3*z"),
    ("+", "0 1 4+r2", "x^3+4*w", "y+4*z+4*r2*z"),
    ("+", "1 0 1+r2", "x+4*r2*z+z", "y^3+4*w"),
    ("+", "1 0 1+4*r2", "y^3+4*w", "x+r2*z+z"),
    ("+", "1 0 2", "x+2*z", "w+y^3"),
    ("+", "1 0 4+r2", "w+y^3", "x+4*z+4*r2*z"),
    ("+", "1 r2 1", "x+4*r2*y+z", "y^3+2*r2*z*y^2+3*w+z^2*y+3*r2*z^3"),
    ("-", "1 r2 2+2*r2", "x+4*r2*y+3*r2*z+2*z",
     "3*r2*z^3+2*z^2*y+2*r2*z^2*y+3*w+y^3+2*z*y^2+4*r2*z*y^2"),
    ("-", "1 r2 2+3*r2",
     "3*r2*z^3+2*z^2*y+3*r2*z^2*y+3*w+y^3+3*z*y^2+4*r2*z*y^2", "x+4*r2*y+2*r2*z+2*z"),
    ("+", "1 r2 3+2*r2", "x+4*r2*y+3*z+3*r2*z",
     "2*r2*z^3+2*z^2*y+3*r2*z^2*y+2*w+y^3+2*z*y^2+r2*z*y^2"),
    ("-", "1 r2 3+3*r2", "x+4*r2*y+2*r2*z+3*z",
     "2*r2*z^3+2*z^2*y+2*r2*z^2*y+2*w+y^3+3*z*y^2+r2*z*y^2"),
    ("+", "1 2*r2 2*r2", "y^3+4*z^3+2*z*y^2+4*r2*w+3*z^2*y", "x+3*r2*y+3*r2*z"),
    ("+", "1 2*r2 3*r2", "x+3*r2*y+2*r2*z", "y^3+z^3+3*z*y^2+r2*w+3*z^2*y"),
    ("-", "1 2*r2 2+r2", "x+3*r2*y+2*z+4*r2*z",
     "z^3+z^2*y+r2*z^2*y+r2*w+y^3+z*y^2+4*r2*z*y^2"),
    ("+", "1 2*r2 2+4*r2", "x+3*r2*y+2*z+r2*z",
     "4*z^3+z^2*y+4*r2*z^2*y+4*r2*w+y^3+4*z*y^2+4*r2*z*y^2"),
    ("+", "1 2*r2 3+r2", "x+3*r2*y+3*z+4*r2*z",
     "z^3+z^2*y+4*r2*z^2*y+r2*w+y^3+z*y^2+r2*z*y^2"),
    ("+", "1 1+r2 0", "x+y+4*r2*y", "w+z^3"),
    ("+", "1 1+3*r2 1", "x+y+2*r2*y+z",
     "2*r2*z^3+2*z^2*y+3*r2*z^2*y+3*w+y^3+2*z*y^2+r2*z*y^2"),
)

P0: Point = (0, F.ONE, F.gf(1, 1))

NUM_LINES = 252
RANK = 22


@dataclass(frozen=True)
class HLine:
    """One h_F-line {L = 0, w = g} lying over the tangent line L at ``point``.

    ``linear`` holds the coefficients of L, scaled so its first nonzero
    coefficient is 1; ``g`` is a plane cubic free of that first variable.
    """

    point: Point
    linear: Point
    g: Poly
    sign: str = "?"
    index: int = 0
    cls: tuple[int, ...] | None = field(default=None, compare=False)

    @property
    def elim(self) -> int:
        return next(i for i, c in enumerate(self.linear) if c)

    def generators(self) -> tuple[Poly, Poly]:
        """(L, w - g) in the homogeneous ring (w, x, y, z)."""
        L = Poly({tuple(1 if k == i + 1 else 0 for k in range(4)): c
                  for i, c in enumerate(self.linear) if c}, HOMOG)
        G = Poly({(1, 0, 0, 0): F.ONE}, HOMOG) - _lift_plane(self.g)
        return L, G

    def g_at(self, p) -> int:
        return self.g(*p)

    def key(self):
        return (self.point, self.g)

    def with_(self, **kw) -> "HLine":
        return replace(self, **kw)


def _lift_plane(p: Poly) -> Poly:
    return Poly({(0,) + e: c for e, c in p.terms.items()}, HOMOG)


def _to_plane(p: Poly) -> Poly:
    if any(e[0] for e in p.terms):
        raise ValueError("polynomial involves w")
    return Poly({e[1:]: c for e, c in p.terms.items()}, PLANE)


def eliminate(poly: Poly, linear) -> Poly:
    """Substitute the first variable with nonzero coefficient in ``linear``."""
    v = next(i for i, c in enumerate(linear) if c)
    inv = F.inv(linear[v])
    images = []
    for i in range(3):
        if i == v:
            t = {}
            for j in range(3):
                if j != v and linear[j]:
                    e = [0, 0, 0]
                    e[j] = 1
                    t[tuple(e)] = F.neg(F.mul(inv, linear[j]))
            images.append(Poly(t, PLANE))
        else:
            images.append(Poly.var(PLANE[i], PLANE))
    return poly.subs(images)


class SplitError(ArithmeticError):
    pass


def split_line(P) -> tuple[HLine, HLine]:
    """The two components over the tangent line at P, as (w = g, w = -g)."""
    P = normalize(P)
    fermat = Poly({(6, 0, 0): F.ONE, (0, 6, 0): F.ONE, (0, 0, 6): F.ONE}, PLANE)
    if fermat(*P) != 0:
        raise SplitError("point not on the branch sextic")
    lin = normalize(tangent_line(P))
    v = next(i for i, c in enumerate(lin) if c)
    a, b = [i for i in range(3) if i != v]
    f = eliminate(fermat, lin)
    m = Poly({_unit(a): P[b], _unit(b): F.neg(P[a])}, PLANE)
    m6 = m ** 6
    lead, lc = m6.leading()
    c = F.div(f.coeff(lead), lc)
    if f != m6.scale(c):
        raise SplitError("restricted sextic is not a sixth power")
    try:
        s = F.sqrt(c)
    except F.NonSquareError as exc:  # pragma: no cover - excluded by geometry
        raise SplitError("restricted sextic is not a square") from exc
    g = (m ** 3).scale(s)
    return HLine(P, lin, g), HLine(P, lin, -g)


def _unit(i):
    e = [0, 0, 0]
    e[i] = 1
    return tuple(e)


def parse_basis_row(row) -> HLine:
    """HLine of a hardcoded basis row (sign attached, index unset)."""
    sign, pt, g1, g2 = row
    point = normalize(tuple(F.parse(t) for t in pt.split()))
    gens = [parse_poly(g1, HOMOG), parse_poly(g2, HOMOG)]
    lin = [g for g in gens if g.degree() == 1 and all(e[0] == 0 for e in g.terms)]
    if len(lin) != 1:
        raise ValueError(f"cannot identify the linear generator in {row}")
    L = lin[0]
    other = gens[1] if gens[0] is L else gens[0]
    coeffs = normalize(tuple(L.coeff(_unit4(i + 1)) for i in range(3)))
    alpha = other.coeff((1, 0, 0, 0))
    rest = other - Poly({(1, 0, 0, 0): alpha}, HOMOG)
    g = eliminate(_to_plane(rest).scale(F.neg(F.inv(alpha))), coeffs)
    return HLine(point, coeffs, g, sign=sign)


def _unit4(i):
    e = [0, 0, 0, 0]
    e[i] = 1
    return tuple(e)


# --- intersection numbers -------------------------------------------------

def meet_number(l1: HLine, l2: HLine) -> int:
    """Intersection number on X from incidence geometry."""
    if l1.key() == l2.key():
        return -2
    if l1.point == l2.point:
        return 3
    p = cross(l1.linear, l2.linear)
    return 1 if l1.g(*p) == l2.g(*p) else 0


def scheme_length(l1: HLine, l2: HLine, n_power: int = 8):
    """Length of l1 ∩ l2 on X by Groebner bases on the charts z=1, x=1, y=1.

    The charts x=1 and y=1 only count points at infinity of the previous
    ones, enforced by adding high powers of the vanishing coordinates.
    """
    gens = list(l1.generators()) + list(l2.generators())
    Fh = surface_equation(HOMOG)
    total = 0
    for chart, killed in ((3, ()), (1, (3,)), (2, (1, 3))):
        ring = tuple(v for k, v in enumerate(HOMOG) if k != chart)
        polys = [g.dehomogenize(chart, ring) for g in gens + [Fh]]
        for k in killed:
            e = [0, 0, 0, 0]
            e[k] = n_power
            polys.append(Poly.monomial(tuple(e), F.ONE, HOMOG).dehomogenize(chart, ring))
        length = quotient_dimension(buchberger(polys))
        if length == INFINITE:
            return INFINITE
        total += length
    return total


# --- the full configuration --------------------------------------------------

@dataclass
class LineConfiguration:
    lines: list[HLine]               # 0-based list, index attribute is 1-based
    gram: np.ndarray                 # 22 x 22 basis Gram matrix
    classes: np.ndarray              # 252 x 22 integer classes
    meet: np.ndarray                 # 252 x 252 intersection numbers
    point_index: dict = field(default_factory=dict)

    @property
    def basis(self) -> list[HLine]:
        return self.lines[:RANK]

    def index_of(self, point, sign) -> int:
        """0-based position of l^sign(point)."""
        return self.point_index[(normalize(point), sign)]

    def partner(self, i: int) -> int:
        ln = self.lines[i]
        return self.index_of(ln.point, "-" if ln.sign == "+" else "+")


def normalize_signs(pairs: list[tuple[HLine, HLine]]) -> list[HLine]:
    """Attach signs: l+(P0) is w = x^3, and l+(P) meets it with number 1."""
    ref = None
    for a, b in pairs:
        if a.point == P0:
            x3 = Poly({(3, 0, 0): F.ONE}, PLANE)
            ref = a if a.g == x3 else b
            if ref.g != x3:
                raise AssertionError("no component w = x^3 over P0")
    if ref is None:
        raise AssertionError("P0 missing from the points")
    out = []
    for a, b in pairs:
        if a.point == P0:
            plus, minus = (a, b) if a is ref else (b, a)
        else:
            ma, mb = meet_number(a, ref), meet_number(b, ref)
            if sorted((ma, mb)) != [0, 1]:
                raise AssertionError(f"ambiguous sign over {a.point}: {ma}, {mb}")
            plus, minus = (a, b) if ma == 1 else (b, a)
        out.append(plus.with_(sign="+"))
        out.append(minus.with_(sign="-"))
    return out


def all_lines() -> list[HLine]:
    """All 252 lines, basis first (indices 1..22), then by (point, sign)."""
    pts = hermitian_points()
    signed = normalize_signs([split_line(P) for P in pts])
    by_key = {(l.point, l.sign): l for l in signed}
    basis = [parse_basis_row(r) for r in BASIS_TABLE]
    ordered, used = [], set()
    for row_line in basis:
        key = (row_line.point, row_line.sign)
        derived = by_key.get(key)
        if derived is None or derived.g != row_line.g or derived.linear != row_line.linear:
            raise AssertionError(f"basis line over {row_line.point} disagrees with derivation")
        ordered.append(derived)
        used.add(key)
    rank = {p: i for i, p in enumerate(pts)}
    rest = sorted((l for l in signed if (l.point, l.sign) not in used),
                  key=lambda l: (rank[l.point], l.sign != "+"))
    ordered.extend(rest)
    return [l.with_(index=i + 1) for i, l in enumerate(ordered)]


def gram_matrix(basis: list[HLine], method: str = "groebner") -> np.ndarray:
    n = len(basis)
    M = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        M[i, i] = -2
        for j in range(i + 1, n):
            if method == "groebner":
                v = scheme_length(basis[i], basis[j])
                if v == INFINITE:
                    raise AssertionError(f"lines {i + 1} and {j + 1} coincide")
            else:
                v = meet_number(basis[i], basis[j])
            M[i, j] = M[j, i] = v
    return M


def class_from_numbers(numbers, gram: np.ndarray) -> np.ndarray:
    """Solve v M = numbers exactly over Z; raises if v is not integral."""
    a = np.asarray(numbers, dtype=np.int64)
    v = np.rint(np.linalg.solve(gram.astype(float), a.astype(float))).astype(np.int64)
    if not np.array_equal(v @ gram, a):
        raise ArithmeticError("class is not integral")
    return v


def class_of_line(line: HLine, basis: list[HLine], gram: np.ndarray) -> np.ndarray:
    nums = [meet_number(line, b) for b in basis]
    v = class_from_numbers(nums, gram)
    h = np.zeros(len(basis), dtype=np.int64)
    h[0] = h[1] = 1
    if v @ gram @ v != -2 or v @ gram @ h != 1:
        raise ArithmeticError("line class fails the norm checks")
    return v


@lru_cache(maxsize=None)
def build_configuration(method: str = "groebner") -> LineConfiguration:
    """Lines, basis Gram matrix (by ``method``) and all classes."""
    lines = all_lines()
    basis = lines[:RANK]
    gram = gram_matrix(basis, method)
    n = len(lines)
    meet = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            meet[i, j] = meet[j, i] = meet_number(lines[i], lines[j])
    if not np.array_equal(meet[:RANK, :RANK], gram):
        raise AssertionError("incidence and Groebner intersection numbers disagree")
    classes = np.array([class_from_numbers(meet[i, :RANK], gram) for i in range(n)])
    if not np.array_equal(classes @ gram @ classes.T, meet):
        raise AssertionError("classes do not reproduce the intersection numbers")
    lines = [l.with_(cls=tuple(int(x) for x in classes[i])) for i, l in enumerate(lines)]
    point_index = {(l.point, l.sign): i for i, l in enumerate(lines)}
    return LineConfiguration(lines, gram, classes, meet, point_index)


H_F = np.array([1, 1] + [0] * 20, dtype=np.int64)
