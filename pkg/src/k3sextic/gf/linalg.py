"""Dense linear algebra over GF(25) on uint8 arrays (table lookups)."""

from __future__ import annotations

import numpy as np

from . import field as F


class InconsistentSystem(ValueError):
    pass


def as_matrix(rows) -> np.ndarray:
    return np.asarray(rows, dtype=np.uint8).reshape(len(rows), -1) if len(rows) else np.zeros((0, 0), np.uint8)


def rref(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduced echelon form and pivot columns (leftmost pivots first)."""
    A = np.array(A, dtype=np.uint8, copy=True)
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, col])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = F.MUL[F.INV[A[r, col]], A[r]]
        others = np.nonzero(A[:, col])[0]
        others = others[others != r]
        if others.size:
            factors = A[others, col]
            A[others] = F.SUB[A[others], F.MUL[factors[:, None], A[r][None, :]]]
        pivots.append(col)
        r += 1
    return A, pivots


def rank(A) -> int:
    A = np.asarray(A, dtype=np.uint8)
    if A.size == 0:
        return 0
    return len(rref(A)[1])


def kernel(A: np.ndarray) -> np.ndarray:
    """Basis of {u : A u = 0} as rows; deterministic (one row per free column)."""
    A = np.asarray(A, dtype=np.uint8)
    m, n = A.shape
    if m == 0:
        return np.eye(n, dtype=np.uint8)
    R, piv = rref(A)
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.uint8)
    for k, fcol in enumerate(free):
        K[k, fcol] = F.ONE
        for i, pc in enumerate(piv):
            K[k, pc] = F.NEG[R[i, fcol]]
    return K


def solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One particular solution of A u = b; raises InconsistentSystem."""
    A = np.asarray(A, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8).reshape(-1, 1)
    m, n = A.shape
    R, piv = rref(np.hstack([A, b]))
    if n in piv:
        raise InconsistentSystem("no solution")
    u = np.zeros(n, dtype=np.uint8)
    for i, pc in enumerate(piv):
        u[pc] = R[i, n]
    return u


def solve_linear_gf(A, mode: str = "kernel", b=None):
    """Front door: ``mode='kernel'`` or ``'particular'`` (needs ``b``)."""
    if mode == "kernel":
        return kernel(A)
    if mode == "particular":
        return solve(A, b)
    raise ValueError(f"unknown mode {mode!r}")


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.uint8)
    B = np.asarray(B, dtype=np.uint8)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.uint8)
    for k in range(A.shape[1]):
        out = F.ADD[out, F.MUL[A[:, k][:, None], B[k][None, :]]]
    return out


def inverse(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.uint8)
    n = A.shape[0]
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.uint8)]))
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return R[:, n:]


def det3(A) -> int:
    a = [[int(v) for v in row] for row in A]
    m, s, ad = F.mul, F.sub, F.add
    t1 = m(a[0][0], s(m(a[1][1], a[2][2]), m(a[1][2], a[2][1])))
    t2 = m(a[0][1], s(m(a[1][0], a[2][2]), m(a[1][2], a[2][0])))
    t3 = m(a[0][2], s(m(a[1][0], a[2][1]), m(a[1][1], a[2][0])))
    return ad(s(t1, t2), t3)


def frob_matrix(A) -> np.ndarray:
    return F.FROB[np.asarray(A, dtype=np.uint8)]
