"""Projective equivalence of plane sextics over GF(25): canonical forms via
normalised singular quadruples, isomorphism sets, the Hermitian criterion
and descent to GF(5)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from ..gf import field as F
from ..gf import vec as V
from ..gf.linalg import inverse, matmul, rank
from ..gf.poly import PLANE, Poly
from .sextic import SEXTIC_MONOMIALS, SexticForm, pullback_batch, singular_locus

FERMAT = SexticForm.from_poly(Poly({(6, 0, 0): F.ONE, (0, 6, 0): F.ONE, (0, 0, 6): F.ONE}, PLANE))

REFERENCE_POINTS = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], dtype=np.uint8)


class NoQuadrupleError(ValueError):
    pass


# --- quadruples ------------------------------------------------------------------------

def quadruples(points) -> np.ndarray:
    """All ordered 4-tuples of distinct points, no three colinear: (N, 4, 3)."""
    pts = np.asarray(points, dtype=np.uint8).reshape(-1, 3)
    if len(pts) < 4:
        return np.zeros((0, 4, 3), dtype=np.uint8)
    idx = np.array(list(permutations(range(len(pts)), 4)), dtype=np.intp)
    Q = pts[idx]
    ok = np.ones(len(Q), dtype=bool)
    for tri in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        ok &= V.gdet3(Q[:, tri, :]) != 0
    return Q[ok]


def frame_matrices(Q: np.ndarray) -> np.ndarray:
    """A_Q with P_i A_Q proportional to Q_i for the reference points P."""
    Q = np.asarray(Q, dtype=np.uint8)
    M = Q[:, :3, :]
    lam = V.gmatmul(Q[:, 3:4, :], V.ginv3(M))[:, 0, :]        # Q3 = lam M
    return V.MUL[lam[:, :, None], M]


# --- canonical forms ------------------------------------------------------------------------

def _best_square_table() -> np.ndarray:
    sq = np.array(F.SQUARES, dtype=np.uint8)
    out = np.zeros(F.Q, dtype=np.uint8)
    for c in range(1, F.Q):
        out[c] = sq[np.argmin(V.RANK[V.MUL[sq, c]])]
    return out


_BEST_SQ = _best_square_table()


def _normalize_rows(G: np.ndarray) -> np.ndarray:
    """Scale each row by the square making its first nonzero entry minimal."""
    first = G[np.arange(len(G)), np.argmax(G != 0, axis=1)]
    return V.MUL[_BEST_SQ[first][:, None], G]


def _lexmin(rows: np.ndarray) -> int:
    R = V.RANK[rows]
    return int(np.lexsort(R.T[::-1])[0])


@dataclass
class CanonicalForm:
    form: SexticForm
    frame: np.ndarray          # A with form = lambda^2 * s(x A)
    scale: int                 # lambda^2
    quadruple: np.ndarray | None


def canonical_sextic(s: SexticForm, sing=None) -> CanonicalForm:
    """The minimum of lambda^2 s(x A_Q) over quadruples Q of singular points."""
    sing = singular_locus(s) if sing is None else sing
    Q = quadruples(sing)
    if not len(Q):
        ok, H, lam = hermitian_test(s)
        if ok:
            M = hermitian_factor(H)
            return CanonicalForm(FERMAT, inverse(M), F.inv(F.mul(lam, lam)), None)
        raise NoQuadrupleError("no quadruple of singular points in general position")
    A = frame_matrices(Q)
    G = pullback_batch(s.array(), A)
    N = _normalize_rows(G)
    k = _lexmin(N)
    first = G[k][np.argmax(G[k] != 0)]
    return CanonicalForm(SexticForm.from_array(N[k]), A[k], int(_BEST_SQ[first]), Q[k])


# --- isomorphisms ---------------------------------------------------------------------------

@dataclass
class Isomorphism:
    T: np.ndarray              # f2 = c * f1^T with f^T(x) = f(x T^{-1})
    c: int


def isom_sextics(s1: SexticForm, s2: SexticForm, sing1=None, sing2=None) -> list[Isomorphism]:
    """All tau with B1^tau = B2, via a fixed base quadruple of B1."""
    sing1 = singular_locus(s1) if sing1 is None else sing1
    sing2 = singular_locus(s2) if sing2 is None else sing2
    Q1 = quadruples(sing1)
    Q2 = quadruples(sing2)
    if not len(Q1) or not len(Q2):
        if not len(Q1) and not len(Q2):
            raise NoQuadrupleError("no quadruple of singular points in general position")
        return []
    AR = frame_matrices(Q1[:1])[0]
    g1 = pullback_batch(s1.array(), AR[None])[0]
    A2 = frame_matrices(Q2)
    G2 = pullback_batch(s2.array(), A2)
    nz = int(np.argmax(g1 != 0))
    c = V.MUL[G2[:, nz], V.INV[g1[nz]]]
    ok = np.all(V.MUL[c[:, None], g1[None, :]] == G2, axis=1) & (c != 0)
    ARinv = inverse(AR)
    out = []
    for k in np.nonzero(ok)[0]:
        out.append(Isomorphism(matmul(ARinv, A2[k]), int(c[k])))
    return out


def aut_order(s: SexticForm, sing=None) -> int:
    return len(isom_sextics(s, s, sing, sing))


# --- Hermitian sextics ----------------------------------------------------------------------

def hermitian_test(s: SexticForm):
    """(True, H, lambda) if s = lambda^2 sum H_ij x_i x_j^5 with H = conj(H)^t."""
    pos = {e: i for i, e in enumerate(SEXTIC_MONOMIALS)}
    allowed = {}
    for i in range(3):
        for j in range(3):
            e = [0, 0, 0]
            e[i] += 1
            e[j] += 5
            allowed[(i, j)] = pos[tuple(e)]
    support = {k for k, c in enumerate(s.coeffs) if c}
    if not support <= set(allowed.values()):
        return False, None, None
    for sq in F.SQUARES:
        inv = F.inv(sq)
        H = np.zeros((3, 3), dtype=np.uint8)
        for (i, j), k in allowed.items():
            H[i, j] = F.mul(inv, s.coeffs[k])
        if np.array_equal(H, V.FROB[H].T) and rank(H) == 3:
            return True, H, F.sqrt(sq)
    return False, None, None


def _hform(H, u, v) -> int:
    """u H conj(v)^t."""
    return int(V.gsum(V.MUL[V.gsum(V.MUL[np.asarray(u, np.uint8)[:, None], H], axis=0), V.FROB[np.asarray(v, np.uint8)]]))


def hermitian_factor(H) -> np.ndarray:
    """M with H = M conj(M)^t, by Gram-Schmidt for the Hermitian form H."""
    H = np.asarray(H, dtype=np.uint8)
    if not np.array_equal(H, V.FROB[H].T) or rank(H) != 3:
        raise ValueError("H must be a nondegenerate Hermitian matrix")
    E: list[np.ndarray] = []
    basis = [np.eye(3, dtype=np.uint8)[k] for k in range(3)]
    while len(E) < 3:
        # the orthogonal complement of E, spanned by projections of basis vectors
        comp = []
        for b in basis:
            v = b.copy()
            for e in E:
                v = V.SUB[v, V.MUL[_hform(H, v, e), e]]
            if rank(np.array(comp + [v])) > len(comp):
                comp.append(v)
        found = None
        for coeffs in product(range(F.Q), repeat=len(comp)):
            if not any(coeffs):
                continue
            u = np.zeros(3, dtype=np.uint8)
            for a, w in zip(coeffs, comp):
                u = V.ADD[u, V.MUL[a, w]]
            n = _hform(H, u, u)
            if n:
                found = (u, n)
                break
        if found is None:  # pragma: no cover - impossible for nondegenerate H
            raise AssertionError("no anisotropic vector in a nondegenerate Hermitian space")
        u, n = found
        c = next(x for x in range(1, F.Q) if F.mul(F.power(x, 6), n) == F.ONE)
        E.append(V.MUL[c, u])
    Emat = np.array(E, dtype=np.uint8)
    M = inverse(Emat)
    if not np.array_equal(matmul(M, V.FROB[M].T), H):
        raise AssertionError("Hermitian factorisation failed")
    return M


# --- descent to GF(5) ---------------------------------------------------------------------

@dataclass
class Descent:
    T: np.ndarray
    lam: int
    form: SexticForm           # lambda^2 s^T, all coefficients in GF(5)


def _descent_matrix(M: np.ndarray) -> np.ndarray:
    """T with M = T conj(T)^{-1}, given M conj(M) = Id."""
    rows = []
    for x in product(range(F.Q), repeat=3):
        x = np.array(x, dtype=np.uint8)
        m = V.ADD[x, V.gsum(V.MUL[V.FROB[x][:, None], M], axis=0)]
        if rank(np.array([r[1] for r in rows] + [m])) > len(rows):
            rows.append((x, m))
            if len(rows) == 3:
                break
    C = np.array([r[0] for r in rows], dtype=np.uint8)
    S = V.ADD[C, matmul(V.FROB[C], M)]
    return inverse(V.FROB[S])


def f5_descent(s: SexticForm, sing=None) -> Descent | None:
    """(T, lambda) with lambda^2 s^T defined over GF(5), or None."""
    if s.is_gf5():
        return Descent(np.eye(3, dtype=np.uint8), F.ONE, s)
    sing = singular_locus(s) if sing is None else sing
    if len(quadruples(sing)) == 0:
        ok, H, lam = hermitian_test(s)
        if not ok:
            return None
        M = hermitian_factor(H)
        out = s.transform(M).scaled(F.inv(F.mul(lam, lam)))
        if not out.is_gf5():
            raise AssertionError("Hermitian descent did not reach GF(5)")
        return Descent(M, F.inv(lam), out)
    sbar = s.frob()
    for iso in isom_sextics(s, sbar, sing, singular_locus(sbar)):
        # sbar = c s^T  =>  s^T = c^{-1} sbar
        M0, c0 = iso.T, F.inv(iso.c)
        MM = matmul(M0, V.FROB[M0])
        kappa = int(MM[0, 0])
        if kappa == 0 or not np.array_equal(MM, V.MUL[kappa, np.eye(3, dtype=np.uint8)]):
            continue
        for mu in range(1, F.Q):
            if F.mul(F.power(mu, 6), kappa) != F.ONE:
                continue
            c = F.mul(F.power(mu, -6), c0)
            if F.power(c, 3) != F.ONE:
                continue
            M = V.MUL[mu, M0]
            T = _descent_matrix(M)
            for lam in range(1, F.Q):
                if F.power(lam, 8) != c:
                    continue
                out = s.transform(T).scaled(F.mul(lam, lam))
                if out.is_gf5():
                    return Descent(T, lam, out)
                raise AssertionError("descent matrix failed to produce a GF(5) form")
    return None
