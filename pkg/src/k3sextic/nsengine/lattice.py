"""Polarization tests, exceptional classes, h-lines and ADE types in NS(X)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..quadlat.hyperbolic import LatticeData, separating_roots, solve_fixed_norm


def order_key(x) -> tuple:
    """Sort key of the total order: sum of |x_i|, then lexicographic."""
    x = [int(v) for v in x]
    return (sum(abs(v) for v in x), tuple(x))


def total_order_cmp(x, y) -> int:
    kx, ky = order_key(x), order_key(y)
    return (kx > ky) - (kx < ky)


def order_argmin(arr: np.ndarray) -> int:
    """Index of the order-minimal row of an integer array."""
    arr = np.asarray(arr)
    s = np.abs(arr).sum(axis=1)
    cand = np.nonzero(s == s.min())[0]
    sub = arr[cand]
    best = np.lexsort(sub.T[::-1])[0]
    return int(cand[best])


class PreconditionError(ValueError):
    pass


@dataclass
class NSLattice:
    """NS(X) with its Gram matrix and the Fermat polarization."""

    gram: np.ndarray
    h_f: np.ndarray

    def __post_init__(self):
        self.gram = np.asarray(self.gram, dtype=np.int64)
        self.h_f = np.asarray(self.h_f, dtype=np.int64)
        self.lat = LatticeData(self.gram)

    def pair(self, x, y) -> int:
        return self.lat.pair(x, y)

    def norm(self, x) -> int:
        return self.lat.norm(x)

    def degree(self, x) -> int:
        return self.pair(x, self.h_f)

    # --- polarizations -----------------------------------------------------
    def _check(self, v):
        if self.norm(v) <= 0 or self.degree(v) <= 0:
            raise PreconditionError("need <v,v> > 0 and <v,h_F> > 0")

    def is_nef(self, v) -> tuple[bool, np.ndarray | None]:
        """(nef?, a (-2)-vector separating h_F from v if not)."""
        v = np.asarray(v, dtype=np.int64)
        self._check(v)
        S1 = separating_roots(self.lat, self.h_f, v, -2, limit=1)
        return (not S1, S1[0] if S1 else None)

    def isotropic_unit(self, v) -> np.ndarray | None:
        """An element of {e : e^2 = 0, <e,v> = 1}, or None."""
        res = solve_fixed_norm(self.lat, [(v, 1)], 0)
        return res.vectors[0] if res.count else None

    def is_polarization(self, v) -> bool:
        nef, _ = self.is_nef(v)
        return nef and self.isotropic_unit(v) is None

    # --- curves contracted or mapped to lines -------------------------------
    def roots_orthogonal(self, h) -> np.ndarray:
        """R = {r : r^2 = -2, <r,h> = 0}."""
        return solve_fixed_norm(self.lat, [(h, 0)], -2).vectors

    def exc_set(self, h) -> np.ndarray:
        """Indecomposable positive roots orthogonal to h, sorted by the total order."""
        R = self.roots_orthogonal(h)
        deg = R @ self.gram @ self.h_f
        if np.any(deg == 0):
            raise ArithmeticError("a root orthogonal to h_F: h_F is not ample?")
        Rp = R[deg > 0]
        dp = deg[deg > 0]
        members = {tuple(r) for r in Rp.tolist()}
        keep = []
        for i in np.argsort(dp, kind="stable"):
            r = Rp[i]
            lower = Rp[dp < dp[i]]
            diff = r[None, :] - lower
            if not any(tuple(d) in members for d in diff.tolist()):
                keep.append(r)
        return _sorted_rows(keep, self.gram.shape[0])

    def line_candidates(self, h) -> np.ndarray:
        return solve_fixed_norm(self.lat, [(h, 1)], -2).vectors

    def lin_set(self, h, exc: np.ndarray | None = None) -> np.ndarray:
        """Classes of h-lines."""
        exc = self.exc_set(h) if exc is None else exc
        L = self.line_candidates(h)
        deg = L @ self.gram @ self.h_f
        Lp, dp = L[deg > 0], deg[deg > 0]
        keep = []
        solver = _NonnegCombination(exc, self.gram) if len(exc) else None
        for i in range(len(Lp)):
            lower = Lp[dp < dp[i]]
            if solver is None or not len(lower):
                keep.append(Lp[i])
                continue
            if not solver.any_member(Lp[i][None, :] - lower):
                keep.append(Lp[i])
        return _sorted_rows(keep, self.gram.shape[0])

    def spans_lattice(self, vectors) -> bool:
        """True if the integer span of the rows is all of Z^22."""
        from ..quadlat.intlin import _col_hermite
        V = [[int(x) for x in row] for row in np.asarray(vectors)]
        n = self.gram.shape[0]
        H, _, piv = _col_hermite([list(col) for col in zip(*V)])
        if len(piv) != n:
            return False
        d = 1
        for j, r in enumerate(piv):
            d *= H[r][j]
        return abs(d) == 1


class _NonnegCombination:
    """Decide whether vectors are nonzero nonnegative integer combinations of
    the (linearly independent) rows of E."""

    def __init__(self, E: np.ndarray, gram: np.ndarray):
        self.E = np.asarray(E, dtype=np.int64)
        C = self.E @ gram @ self.E.T
        self.P = (gram @ self.E.T) @ np.linalg.inv(C.astype(float))

    def coefficients(self, D: np.ndarray):
        c = np.rint(D @ self.P).astype(np.int64)
        ok = np.all(c @ self.E == D, axis=1)
        return c, ok

    def any_member(self, D: np.ndarray) -> bool:
        c, ok = self.coefficients(D)
        good = ok & np.all(c >= 0, axis=1) & np.any(c > 0, axis=1)
        return bool(good.any())


def _sorted_rows(rows, n) -> np.ndarray:
    if not len(rows):
        return np.zeros((0, n), dtype=np.int64)
    rows = sorted((np.asarray(r, dtype=np.int64) for r in rows), key=order_key)
    return np.array(rows, dtype=np.int64)


# --- ADE types ------------------------------------------------------------------

@dataclass(frozen=True)
class ADEType:
    parts: tuple[tuple[str, int], ...]

    @property
    def rank(self) -> int:
        return sum(k for _, k in self.parts)

    def __str__(self):
        if not self.parts:
            return "0"
        counts: dict = {}
        for p in self.parts:
            counts[p] = counts.get(p, 0) + 1
        out = []
        for (letter, k), m in sorted(counts.items(), key=lambda t: ("ADE".index(t[0][0]), t[0][1])):
            out.append(f"{m if m > 1 else ''}{letter}{k}")
        return "+".join(out)

    @classmethod
    def parse(cls, s: str) -> "ADEType":
        if s.strip() == "0":
            return cls(())
        parts = []
        import re
        for tok in s.split("+"):
            m = re.fullmatch(r"(\d*)([ADE])(\d+)", tok.strip())
            if not m:
                raise ValueError(f"bad ADE token {tok!r}")
            parts += [(m.group(2), int(m.group(3)))] * int(m.group(1) or 1)
        return cls(tuple(sorted(parts, key=lambda t: ("ADE".index(t[0]), t[1]))))


class NotDynkinError(ValueError):
    pass


def ade_type(exc, gram) -> ADEType:
    exc = np.asarray(exc, dtype=np.int64).reshape(-1, np.asarray(gram).shape[0])
    k = len(exc)
    if k == 0:
        return ADEType(())
    C = exc @ np.asarray(gram, dtype=np.int64) @ exc.T
    if np.any(np.diag(C) != -2):
        raise NotDynkinError("not all classes are (-2)-vectors")
    off = C - np.diag(np.diag(C))
    if np.any((off != 0) & (off != 1)):
        raise NotDynkinError("pairings outside {0, 1}")
    adj = off == 1
    seen = np.zeros(k, dtype=bool)
    parts = []
    for s in range(k):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in np.nonzero(adj[u])[0]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
        parts.append(_classify_component(adj[np.ix_(comp, comp)]))
    return ADEType(tuple(sorted(parts, key=lambda t: ("ADE".index(t[0]), t[1]))))


def _classify_component(adj: np.ndarray) -> tuple[str, int]:
    n = len(adj)
    edges = int(adj.sum()) // 2
    if edges != n - 1:
        raise NotDynkinError("component contains a cycle")
    deg = adj.sum(axis=1)
    if deg.max(initial=0) <= 2:
        return ("A", n)
    branch = np.nonzero(deg >= 3)[0]
    if len(branch) != 1 or deg[branch[0]] != 3:
        raise NotDynkinError("not a Dynkin shape")
    b = int(branch[0])
    legs = []
    for start in np.nonzero(adj[b])[0]:
        length, prev, cur = 1, b, int(start)
        while True:
            nxt = [int(w) for w in np.nonzero(adj[cur])[0] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[0] == 1 and legs[1] == 1:
        return ("D", n)
    if legs[0] == 1 and legs[1] == 2 and legs[2] in (2, 3, 4):
        return ("E", n)
    raise NotDynkinError(f"branch legs {legs} do not form an ADE diagram")
