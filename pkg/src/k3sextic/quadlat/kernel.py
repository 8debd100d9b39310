"""Compiled enumeration of {t in Z^n : t Q t^t + 2 t L + c <= 0 (or == 0)}
for integer Q, L, c with Q positive definite.

Same recursion as :func:`triple.iter_nonpositive` (outermost coordinate is
the first one, ranges come from the projected triples).  Inner levels prune
in floating point with a safety margin, so they can only over-approximate;
the innermost coordinate is solved exactly from the integer quadratic
a t^2 + 2 b t + V, whose coefficients are carried along in int64.
"""

from __future__ import annotations

from fractions import Fraction

import numba as nb
import numpy as np

from .triple import NotPositiveError, QuadTriple, leading_minors, project_qt

MODE_LE = 0
MODE_EQ = 1
_TOL = 1e-6


@nb.njit(cache=True, inline="always")
def _isqrt(v):
    s = np.int64(np.sqrt(np.float64(v)))
    while s * s > v:
        s -= 1
    while (s + 1) * (s + 1) <= v:
        s += 1
    return s


@nb.njit(cache=True, inline="always")
def _q1(a, b, v, t):
    return a * t * t + 2 * b * t + v


@nb.njit(cache=True)
def _last_level(a, b, v, mode):
    """Integer solutions of a t^2 + 2 b t + v <= 0 (mode 0) or == 0 (mode 1).

    Returns (lo, hi, r1, r2, k): an interval for mode 0, up to two roots
    r1, r2 (k of them) for mode 1.
    """
    disc = b * b - a * v
    if disc < 0:
        return 1, 0, 0, 0, 0
    s = _isqrt(disc)
    if mode == 1:
        if s * s != disc:
            return 1, 0, 0, 0, 0
        k = 0
        r1 = 0
        r2 = 0
        if (-b - s) % a == 0:
            r1 = (-b - s) // a
            k = 1
        if s != 0 and (-b + s) % a == 0:
            if k == 0:
                r1 = (-b + s) // a
            else:
                r2 = (-b + s) // a
            k += 1
        return 1, 0, r1, r2, k
    lo = (-b - s) // a - 1
    hi = (-b + s) // a + 1
    while lo <= hi and _q1(a, b, v, lo) > 0:
        lo += 1
    while _q1(a, b, v, lo - 1) <= 0:
        lo -= 1
    while hi >= lo and _q1(a, b, v, hi) > 0:
        hi -= 1
    while _q1(a, b, v, hi + 1) <= 0:
        hi += 1
    return lo, hi, 0, 0, 0


@nb.njit(cache=True)
def _enumerate(Qi, Li, ci, r, P, mr, c0, prefix, depth, mode, out, cap):
    """DFS; returns the number of solutions (rows written to ``out`` <= cap).

    depth < n stops at partial vectors of that length (float test only).
    """
    n = Qi.shape[0]
    x = np.zeros(n, dtype=np.int64)
    hi_arr = np.zeros(n, dtype=np.int64)
    S = np.zeros(n + 1)
    V = np.zeros(n + 1, dtype=np.int64)
    B = np.zeros((n + 1, n), dtype=np.int64)
    ctr = np.zeros(n)
    count = 0
    S[0] = c0
    V[0] = ci
    for j in range(n):
        B[0, j] = Li[j]
    p = prefix.shape[0]
    # pin the prefix
    for k in range(p):
        xk = prefix[k]
        c = -mr[k]
        for j in range(k):
            c -= P[k, j] * x[j]
        d = xk - c
        S[k + 1] = S[k] + r[k] * d * d
        if S[k + 1] > _TOL * (1.0 + abs(c0)):
            return 0
        x[k] = xk
        V[k + 1] = V[k] + Qi[k, k] * xk * xk + 2 * xk * B[k, k]
        for j in range(k + 1, n):
            B[k + 1, j] = B[k, j] + Qi[j, k] * xk
    tol = _TOL * (1.0 + abs(c0))
    if p == depth:
        if depth < n:
            if cap > count:
                for j in range(depth):
                    out[count, j] = x[j]
            return 1
        ok = V[n] <= 0 if mode == 0 else V[n] == 0
        if ok:
            if cap > 0:
                for j in range(n):
                    out[0, j] = x[j]
            return 1
        return 0
    k = p
    # initialise level k
    entering = True
    while k >= p:
        if entering:
            if k == n - 1 and depth == n:
                a = Qi[k, k]
                b = B[k, k]
                lo, hi, r1, r2, kk = _last_level(a, b, V[k], mode)
                if mode == 1:
                    for t in range(kk):
                        val = r1 if t == 0 else r2
                        if count < cap:
                            for j in range(k):
                                out[count, j] = x[j]
                            out[count, k] = val
                        count += 1
                else:
                    for val in range(lo, hi + 1):
                        if count < cap:
                            for j in range(k):
                                out[count, j] = x[j]
                            out[count, k] = val
                        count += 1
                k -= 1
                entering = False
                continue
            c = -mr[k]
            for j in range(k):
                c -= P[k, j] * x[j]
            ctr[k] = c
            rem = -S[k]
            if rem < 0.0:
                rem = 0.0
            rad = np.sqrt(rem / r[k]) + 1e-6
            x[k] = np.int64(np.ceil(c - rad))
            hi_arr[k] = np.int64(np.floor(c + rad))
            x[k] -= 1  # pre-decrement, advanced below
        # advance level k
        x[k] += 1
        if x[k] > hi_arr[k]:
            k -= 1
            entering = False
            continue
        d = x[k] - ctr[k]
        S[k + 1] = S[k] + r[k] * d * d
        if S[k + 1] > tol:
            entering = False
            continue
        xk = x[k]
        V[k + 1] = V[k] + Qi[k, k] * xk * xk + 2 * xk * B[k, k]
        for j in range(k + 1, n):
            B[k + 1, j] = B[k, j] + Qi[j, k] * xk
        if k + 1 == depth:
            if depth == n:
                ok = V[n] <= 0 if mode == 0 else V[n] == 0
                if ok:
                    if count < cap:
                        for j in range(n):
                            out[count, j] = x[j]
                    count += 1
            else:
                if count < cap:
                    for j in range(depth):
                        out[count, j] = x[j]
                count += 1
            entering = False
            continue
        k += 1
        entering = True
    return count


class IntegerTriple:
    """An integer triple with its exact projection data, ready for the kernel."""

    def __init__(self, Q, L, c):
        self.Q = np.asarray(Q, dtype=np.int64)
        self.L = np.asarray(L, dtype=np.int64).reshape(-1)
        self.c = int(c)
        n = self.n = self.Q.shape[0]
        if not np.array_equal(self.Q, self.Q.T):
            raise ValueError("Q must be symmetric")
        qt = QuadTriple(self.Q.tolist(), self.L.tolist(), self.c)
        if any(m <= 0 for m in leading_minors(qt.Q)):
            raise NotPositiveError("triple is not positive definite")
        r = np.zeros(n)
        P = np.zeros((n, n))
        mr = np.zeros(n)
        t = qt
        for k in range(n - 1, -1, -1):
            rk = t.Q[k][k]
            r[k] = float(rk)
            for j in range(k):
                P[k, j] = float(t.Q[k][j] / rk)
            mr[k] = float(t.L[k] / rk)
            if k:
                t = project_qt(t)
            else:
                t = QuadTriple([], [], t.c - t.L[0] * t.L[0] / rk)
        self.c0 = float(t.c)
        self.min_value = t.c
        self.r, self.P, self.mr = r, P, mr

    @classmethod
    def from_triple(cls, qt: QuadTriple) -> "IntegerTriple":
        """Scale a rational triple by the common denominator."""
        den = 1
        for v in [x for row in qt.Q for x in row] + list(qt.L) + [qt.c]:
            den = den * v.denominator // np.gcd(den, v.denominator)
        Q = [[int(v * den) for v in row] for row in qt.Q]
        L = [int(v * den) for v in qt.L]
        return cls(Q, L, int(qt.c * den))

    def run(self, mode: int = MODE_LE, prefix=(), depth: int | None = None,
            collect: bool = True, cap: int | None = None):
        """Count (and optionally collect) solutions below ``prefix``."""
        depth = self.n if depth is None else depth
        pre = np.asarray(prefix, dtype=np.int64).reshape(-1)
        if not collect:
            out = np.zeros((0, max(depth, 1)), dtype=np.int64)
            return _enumerate(self.Q, self.L, self.c, self.r, self.P, self.mr, self.c0,
                              pre, depth, mode, out, 0), None
        if cap is None:
            cnt, _ = self.run(mode, prefix, depth, collect=False)
            cap = cnt
        out = np.zeros((max(cap, 1), max(depth, 1)), dtype=np.int64)
        cnt = _enumerate(self.Q, self.L, self.c, self.r, self.P, self.mr, self.c0,
                         pre, depth, mode, out, cap)
        if cnt > cap:
            raise RuntimeError("output buffer overflow")
        return cnt, out[:cnt, :depth]

    def count(self, mode: int = MODE_LE) -> int:
        return self.run(mode, collect=False)[0]

    def solutions(self, mode: int = MODE_LE) -> np.ndarray:
        return self.run(mode)[1]

    def prefixes(self, length: int) -> np.ndarray:
        """Partial vectors of the given length that survive float pruning."""
        return self.run(MODE_LE, depth=length)[1]

    def iter_chunks(self, mode: int = MODE_LE, prefix_len: int = 1):
        """Yield solution arrays partitioned by their first coordinates."""
        if prefix_len >= self.n:
            prefix_len = self.n
        for pre in self.prefixes(prefix_len):
            cnt, arr = self.run(mode, prefix=pre)
            if cnt:
                yield arr
