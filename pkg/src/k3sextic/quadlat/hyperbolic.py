"""Fixed-norm vectors on affine slices of a hyperbolic lattice, and roots
separating two positive vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .intlin import _col_hermite, lll_gram, solve_integer
from .kernel import MODE_EQ, MODE_LE, IntegerTriple
from .triple import QuadTriple


@dataclass(frozen=True)
class LatticeData:
    gram: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=np.int64)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or not np.array_equal(g, g.T):
            raise ValueError("Gram matrix must be square and symmetric")
        if round(np.linalg.det(g.astype(float))) == 0:
            raise ValueError("Gram matrix is degenerate")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    def signature(self) -> tuple[int, int]:
        ev = np.linalg.eigvalsh(self.gram.astype(float))
        return int((ev > 0).sum()), int((ev < 0).sum())

    def pair(self, x, y) -> int:
        return int(np.asarray(x, dtype=np.int64) @ self.gram @ np.asarray(y, dtype=np.int64))

    def norm(self, x) -> int:
        return self.pair(x, x)


@dataclass
class AffineSlice:
    """{c0 + t B} = {x : <x, v_i> = a_i}; ``empty`` if no integer point."""

    constraints: list[tuple[np.ndarray, int]]
    origin: np.ndarray | None = None
    basis: np.ndarray | None = None
    empty: bool = False

    @classmethod
    def build(cls, lat: LatticeData, constraints, reduce: bool = True) -> "AffineSlice":
        cons = [(np.asarray(v, dtype=np.int64), int(a)) for v, a in constraints]
        A = np.array([v @ lat.gram for v, _ in cons], dtype=np.int64)
        b = [a for _, a in cons]
        sol = solve_integer(A, b)
        if sol is None:
            return cls(cons, empty=True)
        x0, K = sol
        x0 = np.array(x0, dtype=np.int64)
        K = np.array(K, dtype=np.int64).reshape(-1, lat.rank)
        sl = cls(cons, x0, K)
        if reduce and len(K):
            sl._reduce(lat)
        return sl

    def _reduce(self, lat: LatticeData):
        K = self.basis
        Q = -(K @ lat.gram @ K.T)
        if all(m > 0 for m in QuadTriple(Q.tolist(), [0] * len(Q), 0).leading_minors()):
            U = np.array(lll_gram(Q), dtype=np.int64)
            K = U @ K
            # move the origin near the centre of the ellipsoid
            Q = -(K @ lat.gram @ K.T)
            L = -(K @ lat.gram @ self.origin)
            shift = np.rint(np.linalg.solve(Q.astype(float), -L.astype(float))).astype(np.int64)
            self.origin = self.origin + shift @ K
            self.basis = K

    @property
    def dim(self) -> int:
        return 0 if self.basis is None else len(self.basis)

    def points(self, t: np.ndarray) -> np.ndarray:
        return self.origin + np.asarray(t, dtype=np.int64) @ self.basis

    def contains(self, lat: LatticeData, x) -> bool:
        x = np.asarray(x, dtype=np.int64)
        return all(lat.pair(x, v) == a for v, a in self.constraints)


@dataclass
class FixedNormResult:
    vectors: np.ndarray | None
    count: int
    empty_slice: bool = False


def norm_triple(lat: LatticeData, sl: AffineSlice, d: int) -> IntegerTriple:
    """q(t) = d - <x, x> for x = origin + t basis (positive definite)."""
    K, x0, G = sl.basis, sl.origin, lat.gram
    Q = -(K @ G @ K.T)
    L = -(K @ G @ x0)
    c = d - int(x0 @ G @ x0)
    return IntegerTriple(Q, L, c)


def solve_fixed_norm(lat: LatticeData, constraints, d: int, mode: str = "array",
                     prefix_len: int = 1):
    """{x : <x, v_i> = a_i, <x, x> = d}.

    mode ``"array"`` -> FixedNormResult with an (N, n) array, ``"count"`` ->
    FixedNormResult with only the count, ``"chunks"`` -> generator of arrays
    partitioned by leading slice coordinates, ``"set"`` -> set of tuples.
    """
    sl = constraints if isinstance(constraints, AffineSlice) else AffineSlice.build(lat, constraints)
    if sl.empty:
        if mode == "chunks":
            return iter(())
        if mode == "set":
            return set()
        return FixedNormResult(np.zeros((0, lat.rank), np.int64), 0, empty_slice=True)
    if sl.dim == 0:
        ok = lat.norm(sl.origin) == d
        arr = sl.origin[None, :] if ok else np.zeros((0, lat.rank), np.int64)
        if mode == "chunks":
            return iter([arr] if ok else [])
        if mode == "set":
            return {tuple(int(v) for v in r) for r in arr}
        return FixedNormResult(arr if mode != "count" else None, int(ok))
    it = norm_triple(lat, sl, d)
    if mode == "count":
        return FixedNormResult(None, it.count(MODE_EQ))
    if mode == "chunks":
        return (sl.points(t) for t in it.iter_chunks(MODE_EQ, prefix_len))
    arr = sl.points(it.solutions(MODE_EQ))
    if mode == "set":
        return {tuple(int(v) for v in r) for r in arr}
    if mode == "array":
        return FixedNormResult(arr, len(arr))
    raise ValueError(f"unknown mode {mode!r}")


# --- roots separating h and v ------------------------------------------------

@dataclass
class _WData:
    basis_num: np.ndarray   # integer rows; W basis = basis_num / denom
    denom: int


def _projected_lattice(lat: LatticeData, h: np.ndarray) -> _WData:
    """A basis of W = pr_2(N), the image of N in h^perp."""
    G = lat.gram
    hv = h @ G
    g = 0
    for v in hv:
        g = gcd(g, int(v))
    ch = int(h @ G @ h)
    ker = solve_integer([hv.tolist()], [0])
    K = np.array(ker[1], dtype=object)
    a = ch // g
    u = np.array(solve_integer([hv.tolist()], [g])[0], dtype=object)
    kappa = h.astype(object) - a * u
    # kappa in K-coordinates (K has full row rank)
    kc = solve_integer(K.T.tolist(), kappa.tolist())
    if kc is None:
        raise ArithmeticError("kappa not in the kernel lattice")
    kcoord = np.array(kc[0], dtype=object)
    m = len(K)
    gens = [[a * int(i == j) for j in range(m)] for i in range(m)] + [[int(v) for v in kcoord]]
    # row lattice of gens: column Hermite form of the transpose
    H, _, piv = _col_hermite([list(col) for col in zip(*gens)])
    rows = [[H[i][j] for i in range(m)] for j in range(len(piv))]
    Wc = np.array(rows, dtype=object)            # a * (basis in K-coords)
    num = (Wc @ K)                                 # a * basis in N-coords
    return _WData(np.array(num, dtype=np.int64), a)


def separating_roots(lat: LatticeData, h, v, d: int, limit: int | None = None) -> list[np.ndarray]:
    """S = {r : <r,h> > 0, <r,v> < 0, <r,r> = d} via the projection to h^perp.

    ``limit`` stops after that many elements (a witness search).
    """
    G = lat.gram
    h = np.asarray(h, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    ch, cv, vv = int(h @ G @ h), int(h @ G @ v), int(v @ G @ v)
    if not (ch > 0 and vv > 0 and cv > 0):
        raise ValueError("need <h,h> > 0, <v,v> > 0 and <h,v> > 0")
    W = _projected_lattice(lat, h)
    Bn, a = W.basis_num, W.denom
    Bn = np.array(lll_gram(-(Bn @ G @ Bn.T)), dtype=np.int64) @ Bn
    GW = Bn @ G @ Bn.T                      # a^2 <y, y>_W
    w = Bn @ G @ v                          # a <y, v>
    # f(t) = (t GW t + ch/cv^2 (t w)^2) / a^2 ; condition f >= d
    # scaled: q(t) = -(cv^2 GW + ch w w^t) t.t + a^2 cv^2 d <= 0
    Q = -(cv * cv * GW + ch * np.outer(w, w))
    it = IntegerTriple(Q, np.zeros(len(Q), dtype=np.int64), a * a * cv * cv * d)
    T = it.solutions(MODE_LE)
    Y = T @ Bn                               # a * r'
    yy = np.einsum("ij,jk,ik->i", Y, G, Y)   # a^2 <r', r'>
    num = a * a * d - yy                     # a^2 c_h rho^2 ... times c_h below
    out = []
    for k in np.nonzero(num > 0)[0]:
        s2 = int(num[k]) * ch
        s = isqrt(s2)
        if s * s != s2:
            continue
        vec = s * h + ch * Y[k]
        den = a * ch
        if np.any(vec % den):
            continue
        r = vec // den
        if int(r @ G @ h) > 0 and int(r @ G @ v) < 0 and int(r @ G @ r) == d:
            out.append(r)
            if limit is not None and len(out) >= limit:
                break
    return out
