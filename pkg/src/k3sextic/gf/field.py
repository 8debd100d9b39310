"""Arithmetic in GF(25) = F_5[t]/(t^2 - 2).

An element a + b*sqrt(2) (a, b residues mod 5) is encoded as the small
integer ``a + 5*b`` so that elements can live in numpy uint8 arrays and be
used as table indices.  All operations go through precomputed tables.
"""

from __future__ import annotations

import re

import numpy as np

P = 5
Q = 25

ZERO = 0
ONE = 1
R2 = 5  # sqrt(2)


class NonSquareError(ArithmeticError):
    pass


def gf(a: int, b: int = 0) -> int:
    """The element a + b*sqrt(2)."""
    return (a % P) + P * (b % P)


def parts(e: int) -> tuple[int, int]:
    return e % P, e // P


def _build_tables():
    add = np.zeros((Q, Q), dtype=np.uint8)
    mul = np.zeros((Q, Q), dtype=np.uint8)
    for e1 in range(Q):
        a1, b1 = parts(e1)
        for e2 in range(Q):
            a2, b2 = parts(e2)
            add[e1, e2] = gf(a1 + a2, b1 + b2)
            mul[e1, e2] = gf(a1 * a2 + 2 * b1 * b2, a1 * b2 + a2 * b1)
    neg = np.array([gf(-parts(e)[0], -parts(e)[1]) for e in range(Q)], dtype=np.uint8)
    sub = add[:, neg]
    inv = np.zeros(Q, dtype=np.uint8)
    for e in range(1, Q):
        inv[e] = int(np.nonzero(mul[e] == ONE)[0][0])
    frob = np.array([gf(parts(e)[0], -parts(e)[1]) for e in range(Q)], dtype=np.uint8)
    return add, sub, mul, neg, inv, frob


ADD, SUB, MUL, NEG, INV, FROB = _build_tables()

# python-level copies; indexing lists of lists is much faster than numpy scalars
_ADD = ADD.tolist()
_SUB = SUB.tolist()
_MUL = MUL.tolist()
_NEG = NEG.tolist()
_INV = INV.tolist()
_FROB = FROB.tolist()


def add(x: int, y: int) -> int:
    return _ADD[x][y]


def sub(x: int, y: int) -> int:
    return _SUB[x][y]


def mul(x: int, y: int) -> int:
    return _MUL[x][y]


def neg(x: int) -> int:
    return _NEG[x]


def inv(x: int) -> int:
    if x == 0:
        raise ZeroDivisionError("inverse of 0 in GF(25)")
    return _INV[x]


def div(x: int, y: int) -> int:
    return _MUL[x][inv(y)]


def frob(x: int) -> int:
    """x -> x^5, i.e. sqrt(2) -> -sqrt(2)."""
    return _FROB[x]


def power(x: int, n: int) -> int:
    if n < 0:
        x, n = inv(x), -n
    r = ONE
    while n:
        if n & 1:
            r = _MUL[r][x]
        x = _MUL[x][x]
        n >>= 1
    return r


def order_key(x: int) -> tuple[int, int]:
    """Sort key ordering elements by (a, b)."""
    return x % P, x // P


def is_square(x: int) -> bool:
    return x == 0 or power(x, 12) == ONE


def sqrt(x: int) -> int:
    """The square root with the smaller (a, b) encoding."""
    roots = [r for r in range(Q) if _MUL[r][r] == x]
    if not roots:
        raise NonSquareError(f"{to_str(x)} is not a square in GF(25)")
    return min(roots, key=order_key)


def nth_roots(x: int, n: int) -> list[int]:
    return [r for r in range(1, Q) if power(r, n) == x] if x else [0]


NONZERO = list(range(1, Q))
SQUARES = sorted({_MUL[x][x] for x in NONZERO})
F5 = [gf(a) for a in range(P)]


def to_str(x: int) -> str:
    """Render as ``p+q*r2`` (``r2`` standing for sqrt(2))."""
    a, b = parts(x)
    if b == 0:
        return str(a)
    if a == 0:
        return "r2" if b == 1 else f"{b}*r2"
    return f"{a}+r2" if b == 1 else f"{a}+{b}*r2"


_ELEM_RE = re.compile(r"^\s*(?:(\d+)\s*)?(?:([+-])?\s*(?:(\d+)\s*\*?\s*)?(r2|sqrt\(2\)|√2))?\s*$")


def parse(s: str) -> int:
    """Inverse of :func:`to_str`; also accepts ``sqrt(2)`` and ``√2``."""
    s = s.strip().replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:]
    m = _ELEM_RE.match(s)
    if not m or not s:
        raise ValueError(f"cannot parse GF(25) element {s!r}")
    a = int(m.group(1)) if m.group(1) else 0
    b = 0
    if m.group(4) and m.group(1) and not m.group(2) and not m.group(3):
        a, b = 0, a  # "3√2": a bare coefficient of the root
    elif m.group(4):
        b = int(m.group(3)) if m.group(3) else 1
        if m.group(2) == "-":
            b = -b
    return gf(sign * a, sign * b)
