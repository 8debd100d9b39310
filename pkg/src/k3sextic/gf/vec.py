"""Batched GF(25) arithmetic on numpy arrays.

Elements are encoded as a + 5b, so addition is componentwise mod 5 and a
sum along an axis reduces to two integer sums.
"""

from __future__ import annotations

import numpy as np

from . import field as F

MUL = F.MUL
ADD = F.ADD
SUB = F.SUB
INV = F.INV
NEG = F.NEG
FROB = F.FROB

#: POW[x, k] = x^k for 0 <= k < 32
POW = np.array([[F.power(x, k) if (x or k) else F.ONE for k in range(32)] for x in range(F.Q)],
               dtype=np.uint8)

#: rank of an element in the (a, b) order
RANK = np.array([5 * (x % 5) + x // 5 for x in range(F.Q)], dtype=np.uint8)


def gsum(arr: np.ndarray, axis: int = -1) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.int64)
    a = (arr % 5).sum(axis=axis) % 5
    b = (arr // 5).sum(axis=axis) % 5
    return (a + 5 * b).astype(np.uint8)


def gmatmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Batched matrix product over GF(25) (broadcasts leading axes)."""
    A = np.asarray(A, dtype=np.uint8)
    B = np.asarray(B, dtype=np.uint8)
    return gsum(MUL[A[..., :, :, None], B[..., None, :, :]], axis=-2)


def gdet3(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.uint8)

    def m(i, j):
        return A[..., i, j]

    def minor(r1, r2, c1, c2):
        return SUB[MUL[m(r1, c1), m(r2, c2)], MUL[m(r1, c2), m(r2, c1)]]

    t1 = MUL[m(0, 0), minor(1, 2, 1, 2)]
    t2 = MUL[m(0, 1), minor(1, 2, 0, 2)]
    t3 = MUL[m(0, 2), minor(1, 2, 0, 1)]
    return ADD[SUB[t1, t2], t3]


def ginv3(A: np.ndarray) -> np.ndarray:
    """Batched inverse of 3x3 matrices; raises if any is singular."""
    A = np.asarray(A, dtype=np.uint8)
    d = gdet3(A)
    if np.any(d == 0):
        raise ZeroDivisionError("singular matrix in batch")
    adj = np.zeros_like(A)
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != j]
            c = [k for k in range(3) if k != i]
            mnr = SUB[MUL[A[..., r[0], c[0]], A[..., r[1], c[1]]],
                      MUL[A[..., r[0], c[1]], A[..., r[1], c[0]]]]
            adj[..., i, j] = mnr if (i + j) % 2 == 0 else NEG[mnr]
    return MUL[INV[d][..., None, None], adj]
