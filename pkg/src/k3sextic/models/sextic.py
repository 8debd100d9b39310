"""Plane sextic forms over GF(25): coefficient vectors, linear substitution,
singular points and their local ADE types."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..fermat.geometry import normalize, plane_points
from ..gf import field as F
from ..gf import vec as V
from ..gf.linalg import inverse, rank
from ..gf.poly import PLANE, Poly
from ..nsengine.lattice import ADEType

#: degree-6 monomials x^a y^b z^c, lexicographically descending
SEXTIC_MONOMIALS: tuple[tuple[int, int, int], ...] = tuple(
    (a, b, 6 - a - b) for a in range(6, -1, -1) for b in range(6 - a, -1, -1)
)
_EXP = np.array(SEXTIC_MONOMIALS, dtype=np.intp)
_MPOS = {e: i for i, e in enumerate(SEXTIC_MONOMIALS)}


def monomial_values(points: np.ndarray, exps: np.ndarray = _EXP) -> np.ndarray:
    """(..., npts, nmon) table of monomial values at the given points."""
    P = np.asarray(points, dtype=np.intp)
    out = V.POW[P[..., None, 0], exps[:, 0]]
    out = V.MUL[out, V.POW[P[..., None, 1], exps[:, 1]]]
    return V.MUL[out, V.POW[P[..., None, 2], exps[:, 2]]]


@lru_cache(maxsize=1)
def _interpolation():
    """28 points with an invertible evaluation matrix, and its inverse."""
    chosen: list = []
    for p in plane_points():
        trial = chosen + [p]
        if rank(monomial_values(np.array(trial))) == len(trial):
            chosen = trial
            if len(chosen) == len(SEXTIC_MONOMIALS):
                break
    pts = np.array(chosen, dtype=np.uint8)
    return pts, inverse(monomial_values(pts))


def pullback_batch(coeffs: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Coefficients of f(x A) for a batch (N, 3, 3) of matrices A."""
    pts, Einv = _interpolation()
    A = np.asarray(A, dtype=np.uint8)
    Q = V.gmatmul(pts[None, :, :], A)                       # (N, 28, 3)
    vals = V.gsum(V.MUL[monomial_values(Q), np.asarray(coeffs, dtype=np.uint8)], axis=-1)
    return V.gsum(V.MUL[Einv[None, :, :], vals[:, None, :]], axis=-1)


class NotReducedError(ArithmeticError):
    pass


class UnclassifiedSingularity(ArithmeticError):
    pass


@dataclass(frozen=True)
class SexticForm:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(SEXTIC_MONOMIALS):
            raise ValueError("a sextic form has 28 coefficients")

    # conversions --------------------------------------------------------
    @classmethod
    def from_poly(cls, p: Poly) -> "SexticForm":
        c = [0] * len(SEXTIC_MONOMIALS)
        for e, v in p.terms.items():
            if sum(e) != 6 or len(e) != 3:
                raise ValueError("not a ternary sextic form")
            c[_MPOS[e]] = v
        return cls(tuple(c))

    @classmethod
    def from_array(cls, a) -> "SexticForm":
        return cls(tuple(int(x) for x in a))

    @classmethod
    def parse(cls, text: str) -> "SexticForm":
        from ..gf.poly import parse_poly
        return cls.from_poly(parse_poly(text, PLANE))

    def poly(self) -> Poly:
        return Poly({SEXTIC_MONOMIALS[i]: c for i, c in enumerate(self.coeffs) if c}, PLANE)

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.uint8)

    def __str__(self):
        return self.poly().to_str()

    def affine_str(self) -> str:
        """Affine equation in x, y (z = 1)."""
        return self.poly().dehomogenize(2, ("x", "y")).to_str()

    # order and simple transformations -------------------------------------
    def key(self) -> tuple[int, ...]:
        return tuple(int(V.RANK[c]) for c in self.coeffs)

    def __lt__(self, other: "SexticForm") -> bool:
        return self.key() < other.key()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scaled(self, c: int) -> "SexticForm":
        return SexticForm(tuple(F.mul(c, x) for x in self.coeffs))

    def frob(self) -> "SexticForm":
        return SexticForm(tuple(F.frob(x) for x in self.coeffs))

    def is_gf5(self) -> bool:
        return all(x < 5 for x in self.coeffs)

    def pullback(self, A) -> "SexticForm":
        """f(x A)."""
        return SexticForm.from_array(pullback_batch(self.array(), np.asarray(A)[None])[0])

    def transform(self, T) -> "SexticForm":
        """f^T(x) = f(x T^{-1}): the image of the curve under P -> P T."""
        return self.pullback(inverse(np.asarray(T, dtype=np.uint8)))

    def ratio_to(self, other: "SexticForm") -> int | None:
        """c with self = c * other, or None."""
        return proportionality(self.array(), other.array())

    # evaluation ---------------------------------------------------------------
    def values(self, points) -> np.ndarray:
        return V.gsum(V.MUL[monomial_values(np.asarray(points)), self.array()], axis=-1)

    def gradient_values(self, points) -> np.ndarray:
        """(npts, 3) values of the partial derivatives."""
        pts = np.asarray(points)
        out = []
        for k in range(3):
            exps, coef = [], []
            for e, c in zip(SEXTIC_MONOMIALS, self.coeffs):
                if c and e[k] % 5:
                    ee = list(e)
                    ee[k] -= 1
                    exps.append(ee)
                    coef.append(F.mul(c, F.gf(e[k])))
            if not exps:
                out.append(np.zeros(len(pts), dtype=np.uint8))
                continue
            mv = monomial_values(pts, np.array(exps, dtype=np.intp))
            out.append(V.gsum(V.MUL[mv, np.array(coef, dtype=np.uint8)], axis=-1))
        return np.stack(out, axis=-1)


def proportionality(a: np.ndarray, b: np.ndarray) -> int | None:
    """c with a = c * b (both nonzero), or None."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    nz = np.nonzero(b)[0]
    if not len(nz) or not np.array_equal(a == 0, b == 0):
        return None
    c = int(V.MUL[a[nz[0]], V.INV[b[nz[0]]]])
    return c if np.array_equal(V.MUL[c, b], a) else None


# --- singular points ---------------------------------------------------------------

@lru_cache(maxsize=1)
def _all_points() -> np.ndarray:
    return np.array(plane_points(), dtype=np.uint8)


def singular_locus(s: SexticForm) -> list[tuple[int, int, int]]:
    """GF(25)-rational points where s and all partials vanish."""
    pts = _all_points()
    g = s.gradient_values(pts)
    mask = np.all(g == 0, axis=1) & (s.values(pts) == 0)
    return [tuple(int(x) for x in p) for p in pts[mask]]


def _frame_at(p) -> np.ndarray:
    """Invertible A whose last row is p."""
    p = list(normalize(p))
    rows = []
    for k in range(3):
        e = [0, 0, 0]
        e[k] = F.ONE
        rows.append(e)
    for drop in range(3):
        A = [r for i, r in enumerate(rows) if i != drop] + [p]
        if rank(np.array(A, dtype=np.uint8)) == 3:
            return np.array(A, dtype=np.uint8)
    raise AssertionError("unreachable")


def _local_terms(s: SexticForm, p) -> dict[tuple[int, int], int]:
    """f(u, v) = s((u, v, 1) A) with A sending [0:0:1] to p."""
    g = s.pullback(_frame_at(p)).poly()
    return {(e[0], e[1]): c for e, c in g.terms.items()}


def _series_mul(a, b, N):
    out = [0] * N
    for i, x in enumerate(a):
        if x:
            row = F._MUL[x]
            for j in range(N - i):
                y = b[j]
                if y:
                    out[i + j] = F._ADD[out[i + j]][row[y]]
    return out


def _subs_series(f: dict, phi, N):
    """f(phi(v), v) mod v^N for f given as {(i, j): c}."""
    du = max(i for i, _ in f)
    powers = [[F.ONE] + [0] * (N - 1)]
    for _ in range(du):
        powers.append(_series_mul(powers[-1], phi, N))
    out = [0] * N
    for (i, j), c in f.items():
        if j >= N:
            continue
        for k in range(N - j):
            y = powers[i][k]
            if y:
                out[k + j] = F._ADD[out[k + j]][F._MUL[c][y]]
    return out


def _linear_change(f: dict, a: int, b: int) -> dict:
    """Substitute u -> u + a v and v -> b v."""
    p = Poly({(i, j, 0): c for (i, j), c in f.items()}, PLANE)
    q = p.subs([Poly({(1, 0, 0): F.ONE, (0, 1, 0): a}, PLANE),
                Poly({(0, 1, 0): b}, PLANE), Poly.const(F.ONE, PLANE)])
    return {(e[0], e[1]): c for e, c in q.terms.items()}


def local_type(s: SexticForm, p, depth: int = 24) -> tuple[str, int]:
    """ADE type of the singular point p of s = 0."""
    f = _local_terms(s, p)
    q = {k: f.get(k, 0) for k in ((2, 0), (1, 1), (0, 2))}
    alpha, beta, gamma = q[(2, 0)], q[(1, 1)], q[(0, 2)]
    disc = F.sub(F.mul(beta, beta), F.mul(F.gf(4), F.mul(alpha, gamma)))
    if any(q.values()) and disc:
        return ("A", 1)
    if any(q.values()):
        if alpha == 0:
            f = {(j, i): c for (i, j), c in f.items()}
            alpha, gamma = gamma, alpha
        # complete the square: u -> u - beta/(2 alpha) v
        shift = F.neg(F.div(beta, F.mul(F.gf(2), alpha)))
        f = _linear_change(f, shift, F.ONE)
        fu = {(i - 1, j): F.mul(c, F.gf(i)) for (i, j), c in f.items() if i % 5}
        inv2a = F.inv(F.mul(F.gf(2), alpha))
        phi = [0] * depth
        for _ in range(depth):
            r = _subs_series(fu, phi, depth)
            phi = [F.sub(x, F.mul(inv2a, y)) for x, y in zip(phi, r)]
        res = _subs_series(f, phi, depth)
        order = next((k for k, c in enumerate(res) if c), None)
        if order is None:
            raise NotReducedError(f"non-isolated singularity at {p}")
        return ("A", order - 1)
    cubic = [f.get((3 - k, k), 0) for k in range(4)]
    if not any(cubic):
        raise UnclassifiedSingularity(f"point of multiplicity > 3 at {p}")
    if _binary_cubic_discriminant(cubic):
        return ("D", 4)
    raise UnclassifiedSingularity(f"triple point with degenerate tangent cone at {p}")


def _binary_cubic_discriminant(c) -> int:
    """Discriminant of a u^3 + b u^2 v + c u v^2 + d v^3 (zero iff a repeated root)."""
    a, b, cc, d = c
    m = F.mul
    terms = [
        (1, m(m(b, b), m(cc, cc))),
        (-4, m(a, m(cc, m(cc, cc)))),
        (-4, m(m(b, m(b, b)), d)),
        (-27, m(m(a, a), m(d, d))),
        (18, m(a, m(b, m(cc, d)))),
    ]
    out = 0
    for k, t in terms:
        out = F.add(out, m(F.gf(k), t))
    return out


def singularity_type(s: SexticForm, points=None) -> tuple[ADEType, list]:
    """ADE type of all GF(25)-rational singular points, with per-point data."""
    pts = singular_locus(s) if points is None else points
    data = [(p, local_type(s, p)) for p in pts]
    parts = tuple(sorted((t for _, t in data), key=lambda t: ("ADE".index(t[0]), t[1])))
    return ADEType(parts), data
