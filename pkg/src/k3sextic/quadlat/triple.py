"""Quadratic triples [Q, L, c] and the exact recursive enumeration of
E(QT) = {x in Z^n : x Q x^t + 2 x L + c <= 0}."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterator, Sequence


def _frac_matrix(Q) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(v) for v in row) for row in Q)


@dataclass(frozen=True)
class QuadTriple:
    """q(x) = x Q x^t + 2 x L + c with exact rational entries."""

    Q: tuple[tuple[Fraction, ...], ...]
    L: tuple[Fraction, ...]
    c: Fraction

    def __init__(self, Q, L, c):
        Qf = _frac_matrix(Q)
        n = len(Qf)
        if any(len(row) != n for row in Qf):
            raise ValueError("Q must be square")
        if any(Qf[i][j] != Qf[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Q must be symmetric")
        Lf = tuple(Fraction(v) for v in L)
        if len(Lf) != n:
            raise ValueError("L has the wrong length")
        object.__setattr__(self, "Q", Qf)
        object.__setattr__(self, "L", Lf)
        object.__setattr__(self, "c", Fraction(c))

    @property
    def n(self) -> int:
        return len(self.Q)

    def leading_minors(self) -> list[Fraction]:
        return leading_minors(self.Q)

    def is_positive(self) -> bool:
        return all(m > 0 for m in self.leading_minors())

    def negate(self) -> "QuadTriple":
        return QuadTriple([[-v for v in row] for row in self.Q], [-v for v in self.L], -self.c)

    def __call__(self, x) -> Fraction:
        return eval_qt(self, x)


def leading_minors(Q) -> list[Fraction]:
    """Leading principal minors via fraction-exact elimination."""
    A = [list(map(Fraction, row)) for row in Q]
    n = len(A)
    minors, det = [], Fraction(1)
    for k in range(n):
        piv = A[k][k]
        det *= piv
        minors.append(det)
        if piv == 0:
            minors.extend([Fraction(0)] * (n - k - 1))
            break
        for i in range(k + 1, n):
            f = A[i][k] / piv
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return minors


def eval_qt(qt: QuadTriple, x: Sequence[int]) -> Fraction:
    if len(x) != qt.n:
        raise ValueError(f"expected a vector of length {qt.n}, got {len(x)}")
    x = [Fraction(v) for v in x]
    quad = sum(x[i] * qt.Q[i][j] * x[j] for i in range(qt.n) for j in range(qt.n))
    lin = sum(xi * li for xi, li in zip(x, qt.L))
    return quad + 2 * lin + qt.c


class NotPositiveError(ValueError):
    pass


def project_qt(qt: QuadTriple) -> QuadTriple:
    """Minimize out the last coordinate."""
    n = qt.n
    if n < 2:
        raise ValueError("projection needs at least two variables")
    r = qt.Q[n - 1][n - 1]
    if r <= 0:
        raise NotPositiveError("last diagonal entry is not positive")
    p = qt.Q[n - 1][: n - 1]
    m = qt.L[n - 1]
    Q2 = [[qt.Q[i][j] - p[i] * p[j] / r for j in range(n - 1)] for i in range(n - 1)]
    L2 = [qt.L[i] - m / r * p[i] for i in range(n - 1)]
    return QuadTriple(Q2, L2, qt.c - m * m / r)


def restrict_qt(a, qt: QuadTriple) -> QuadTriple:
    """Pin the first coordinate to ``a``."""
    n = qt.n
    if n < 2:
        raise ValueError("restriction needs at least two variables")
    a = Fraction(a)
    r = qt.Q[0][0]
    p = [qt.Q[0][j] for j in range(1, n)]
    m = qt.L[0]
    Q2 = [row[1:] for row in qt.Q[1:]]
    L2 = [a * p[j - 1] + qt.L[j] for j in range(1, n)]
    return QuadTriple(Q2, L2, a * a * r + 2 * a * m + qt.c)


def _floor_div(num: Fraction) -> int:
    return num.numerator // num.denominator


def _isqrt_frac_floor(x: Fraction) -> int:
    """floor(sqrt(x)) for x >= 0."""
    return isqrt(_floor_div(x)) if x >= 0 else -1


def integer_interval(r: Fraction, m: Fraction, c: Fraction) -> tuple[int, int] | None:
    """Integer range of r x^2 + 2 m x + c <= 0 (r > 0), exactly."""
    disc = m * m - r * c
    if disc < 0:
        return None
    def q(x):
        return r * x * x + 2 * m * x + c
    centre = -m / r
    half = _isqrt_frac_floor(disc / (r * r))
    lo = _floor_div(centre) - half - 1
    hi = _floor_div(centre) + half + 2
    while q(lo) > 0 and lo <= hi:
        lo += 1
    while q(lo - 1) <= 0:
        lo -= 1
    while q(hi) > 0 and hi >= lo:
        hi -= 1
    while q(hi + 1) <= 0:
        hi += 1
    if lo > hi:
        return None
    return lo, hi


def projection_chain(qt: QuadTriple) -> list[QuadTriple]:
    """[QT^0_1, ..., QT^0_n]: the k-th entry has the first k variables."""
    if not qt.is_positive():
        raise NotPositiveError("triple is not positive definite")
    chain = [qt]
    while chain[-1].n > 1:
        chain.append(project_qt(chain[-1]))
    return chain[::-1]


def iter_nonpositive(qt: QuadTriple) -> Iterator[tuple[int, ...]]:
    """Yield E(QT) by the recursion Q(nu, a)."""
    chain = projection_chain(qt)
    n = qt.n

    def rec(nu: int, prefix: tuple[int, ...], current: QuadTriple):
        # current has nu variables; pinning the prefix leaves one
        t = current
        for a in prefix:
            t = restrict_qt(a, t)
        iv = integer_interval(t.Q[0][0], t.L[0], t.c)
        if iv is None:
            return
        for a in range(iv[0], iv[1] + 1):
            nxt = prefix + (a,)
            if nu == n:
                yield nxt
            else:
                yield from rec(nu + 1, nxt, chain[nu])

    yield from rec(1, (), chain[0])


def enumerate_nonpositive(qt: QuadTriple, mode: str = "set",
                          callback: Callable[[tuple[int, ...]], None] | None = None):
    """E(QT) exactly.

    ``mode``: ``"set"`` returns a set, ``"count"`` an int, ``"stream"`` calls
    ``callback`` on each vector and returns the count.
    """
    if qt.n == 0:
        return {()} if qt.c <= 0 else set()
    it = iter_nonpositive(qt)
    if mode == "set":
        return set(it)
    if mode == "count":
        return sum(1 for _ in it)
    if mode == "stream":
        if callback is None:
            raise ValueError("stream mode needs a callback")
        k = 0
        for x in it:
            callback(x)
            k += 1
        return k
    raise ValueError(f"unknown mode {mode!r}")
