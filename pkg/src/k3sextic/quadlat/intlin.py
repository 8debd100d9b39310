"""Integer linear algebra: column Hermite reduction for solving A x = b over
Z, and exact LLL reduction with respect to a positive definite Gram matrix."""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def _col_hermite(A: list[list[int]]):
    """Unimodular U with A U in column echelon form.

    Returns (H, U, pivots) where pivots[k] is the row of the k-th pivot
    column; columns past len(pivots) of H are zero.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [row[:] for row in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for M in (H, U):
            for row in M:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + d * y

    pivots: list[int] = []
    col = 0
    for r in range(m):
        if col >= n:
            break
        # gcd-combine entries of row r in columns col..n-1 into column col
        for j in range(col + 1, n):
            x, y = H[r][col], H[r][j]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            colop(col, j, s, t, -y // g, x // g)
        if H[r][col] == 0:
            continue
        if H[r][col] < 0:
            for M in (H, U):
                for row in M:
                    row[col] = -row[col]
        pivots.append(r)
        col += 1
    return H, U, pivots


def _xgcd(a: int, b: int):
    """(g, s, t) with s a + t b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def solve_integer(A, b):
    """All integer solutions of A x = b as (x0, K) with x = x0 + t K.

    Returns None if no integer solution exists.  K has one row per free
    direction.
    """
    A = [[int(v) for v in row] for row in np.asarray(A, dtype=object)]
    b = [int(v) for v in b]
    m = len(A)
    n = len(A[0])
    H, U, pivots = _col_hermite(A)
    k = len(pivots)
    y = [0] * n
    # forward substitution through the pivot rows
    for idx, r in enumerate(pivots):
        s = b[r] - sum(H[r][j] * y[j] for j in range(idx))
        if s % H[r][idx]:
            return None
        y[idx] = s // H[r][idx]
    for r in range(m):
        if sum(H[r][j] * y[j] for j in range(k)) != b[r]:
            return None
    x0 = [sum(U[i][j] * y[j] for j in range(k)) for i in range(n)]
    K = [[U[i][j] for i in range(n)] for j in range(k, n)]
    return np.array(x0, dtype=object), np.array(K, dtype=object).reshape(n - k, n)


def lll_gram(G, delta: Fraction = Fraction(99, 100)):
    """LLL-reduce w.r.t. the positive definite integer Gram matrix G.

    Returns a unimodular integer matrix U (rows = new basis in terms of the
    old one).  Exact rational arithmetic throughout.
    """
    G = [[Fraction(int(v)) for v in row] for row in np.asarray(G, dtype=object)]
    n = len(G)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return np.array(U, dtype=object)

    def recompute():
        mu = [[Fraction(0)] * n for _ in range(n)]
        Bn = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = G[i][j] - sum(mu[j][k] * mu[i][k] * Bn[k] for k in range(j))
                mu[i][j] = s / Bn[j]
            Bn[i] = G[i][i] - sum(mu[i][k] ** 2 * Bn[k] for k in range(i))
        return mu, Bn

    mu, Bn = recompute()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                _reduce(G, U, k, j, q)
                for i in range(j):
                    mu[k][i] -= q * mu[j][i]
                mu[k][j] -= q
        m = mu[k][k - 1]
        if Bn[k] >= (delta - m * m) * Bn[k - 1]:
            k += 1
            continue
        U[k], U[k - 1] = U[k - 1], U[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        B = Bn[k] + m * m * Bn[k - 1]
        mu[k][k - 1] = m * Bn[k - 1] / B
        Bn[k] = Bn[k - 1] * Bn[k] / B
        Bn[k - 1] = B
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        for i in range(k + 1, n):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
        k = max(k - 1, 1)
    return np.array(U, dtype=object)


def _reduce(G, U, i, j, q):
    """b_i <- b_i - q b_j, updating the Gram matrix in place."""
    n = len(G)
    U[i] = [a - q * c for a, c in zip(U[i], U[j])]
    gij = G[i][j]
    gjj = G[j][j]
    for t in range(n):
        if t != i:
            G[i][t] -= q * G[j][t]
            G[t][i] = G[i][t]
    G[i][i] = G[i][i] - 2 * q * gij + q * q * gjj
