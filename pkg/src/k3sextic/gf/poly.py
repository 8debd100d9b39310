"""Sparse multivariate polynomials over GF(25).

A :class:`Poly` is an immutable mapping from exponent tuples to nonzero
field elements (int-encoded, see :mod:`.field`).  The variable names are
carried along only for printing and parsing; arithmetic requires equal
arity.  Two variable sets are used throughout the package:

* ``AFFINE = ("w", "x", "y")`` -- the chart z = 1 of P(3,1,1,1);
* ``HOMOG = ("w", "x", "y", "z")`` -- weighted homogeneous coordinates,
  w of weight 3.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Mapping

from . import field as F

AFFINE = ("w", "x", "y")
HOMOG = ("w", "x", "y", "z")
PLANE = ("x", "y", "z")


@lru_cache(maxsize=None)
def grevlex_key(exp: tuple[int, ...]) -> tuple:
    """Sort key: larger key means larger monomial in grevlex."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


class Poly:
    __slots__ = ("terms", "vars", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], int] | None = None,
                 vars: tuple[str, ...] = AFFINE):
        self.vars = vars
        self.terms = {e: c for e, c in (terms or {}).items() if c}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c: int, vars=AFFINE) -> "Poly":
        return cls({(0,) * len(vars): c}, vars)

    @classmethod
    def var(cls, name: str, vars=AFFINE) -> "Poly":
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls({tuple(e): F.ONE}, vars)

    @classmethod
    def monomial(cls, exp: Iterable[int], c: int = F.ONE, vars=AFFINE) -> "Poly":
        return cls({tuple(exp): c}, vars)

    # basic protocol -----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other, self.vars)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Poly({self.to_str()!r})"

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.const(other, self.vars)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        add = F._ADD
        for e, c in other.terms.items():
            t[e] = add[t.get(e, 0)][c]
        return Poly(t, self.vars)

    __radd__ = __add__

    def __neg__(self):
        neg = F._NEG
        return Poly({e: neg[c] for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: int) -> "Poly":
        if c == 0:
            return Poly({}, self.vars)
        row = F._MUL[c]
        return Poly({e: row[v] for e, v in self.terms.items()}, self.vars)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        return Poly(mul_terms(self.terms, other.terms), self.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly.const(F.ONE, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frob(self) -> "Poly":
        """Raise every coefficient to the 5th power."""
        fr = F._FROB
        return Poly({e: fr[c] for e, c in self.terms.items()}, self.vars)

    # inspection -----------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def weighted_degree(self, weights: tuple[int, ...]) -> int:
        return max((sum(a * w for a, w in zip(e, weights)) for e in self.terms), default=-1)

    def is_homogeneous(self, weights: tuple[int, ...]) -> bool:
        return len({sum(a * w for a, w in zip(e, weights)) for e in self.terms}) <= 1

    def leading(self) -> tuple[tuple[int, ...], int]:
        """(exponent, coefficient) of the grevlex-leading term."""
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(F.inv(self.leading()[1]))

    def coeff(self, exp: tuple[int, ...]) -> int:
        return self.terms.get(tuple(exp), 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    # evaluation and substitution -----------------------------------------
    def __call__(self, *point: int) -> int:
        """Evaluate at a point with GF(25) coordinates."""
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        mul, add = F._MUL, F._ADD
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = mul[v][F.power(x, k)]
            total = add[total][v]
        return total

    def subs(self, images: list["Poly"]) -> "Poly":
        """Compose: replace variable i by images[i] (all in one ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        out_vars = images[0].vars
        powers: list[dict[int, Poly]] = [{0: Poly.const(F.ONE, out_vars)} for _ in images]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * images[i]
            return cache[k]

        acc: dict = {}
        add = F._ADD
        for e, c in self.terms.items():
            term = Poly.const(c, out_vars)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            for ee, cc in term.terms.items():
                acc[ee] = add[acc.get(ee, 0)][cc]
        return Poly(acc, out_vars)

    def dehomogenize(self, index: int, vars: tuple[str, ...] | None = None) -> "Poly":
        """Set variable ``index`` to 1 (drop it)."""
        add = F._ADD
        t: dict = {}
        for e, c in self.terms.items():
            ee = e[:index] + e[index + 1:]
            t[ee] = add[t.get(ee, 0)][c]
        if vars is None:
            vars = self.vars[:index] + self.vars[index + 1:]
        return Poly(t, vars)

    def homogenize(self, weights: tuple[int, ...], degree: int, vars: tuple[str, ...]) -> "Poly":
        """Append a weight-1 variable making every term of weighted ``degree``."""
        t = {}
        for e, c in self.terms.items():
            d = sum(a * w for a, w in zip(e, weights))
            if d > degree:
                raise ValueError("term exceeds target degree")
            t[e + (degree - d,)] = c
        return Poly(t, vars)

    def rename(self, vars: tuple[str, ...]) -> "Poly":
        if len(vars) != self.nvars:
            raise ValueError("arity mismatch")
        return Poly(self.terms, vars)

    # text format ------------------------------------------------------------
    def to_str(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            factors = [f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k]
            cs = F.to_str(c)
            if factors:
                wrapped = f"({cs})" if "+" in cs else cs
                piece = "*".join(factors) if c == F.ONE else wrapped + "*" + "*".join(factors)
            else:
                piece = f"({cs})" if "+" in cs else cs
            out.append(piece)
        return " + ".join(out)

    __str__ = to_str


def mul_terms(a: Mapping, b: Mapping) -> dict:
    mul, add = F._MUL, F._ADD
    out: dict = {}
    for e1, c1 in a.items():
        row = mul[c1]
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = add[out.get(e, 0)][row[c2]]
    return {e: c for e, c in out.items() if c}


_TERM_SPLIT = re.compile(r"\s*([+-])\s*(?![^()]*\))")


def parse_poly(text: str, vars: tuple[str, ...] = AFFINE) -> Poly:
    """Parse the format written by :meth:`Poly.to_str`.

    Grammar: terms joined by ``+``/``-``; a term is ``coeff*var^k*...``
    where the coefficient is an integer, ``r2``, or a parenthesised
    ``p+q*r2``.
    """
    s = text.strip()
    if s == "0":
        return Poly({}, vars)
    # split on top-level signs
    pieces, depth, cur, sign = [], 0, "", "+"
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("*", "^")):
            pieces.append((sign, cur))
            sign, cur = ch, ""
            continue
        if depth == 0 and ch in "+-" and not cur.strip():
            sign = "-" if (sign == "-") != (ch == "-") else "+"
            continue
        cur += ch
    pieces.append((sign, cur))
    terms: dict = {}
    for sign, body in pieces:
        c, e = _parse_term(body.strip(), vars)
        if sign == "-":
            c = F.neg(c)
        terms[e] = F.add(terms.get(e, 0), c)
    return Poly(terms, vars)


def _parse_term(body: str, vars):
    c = F.ONE
    e = [0] * len(vars)
    factors, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            factors.append(cur)
            cur = ""
        else:
            cur += ch
    factors.append(cur)
    for f in factors:
        f = f.strip()
        if not f:
            continue
        name, _, k = f.partition("^")
        if name in vars:
            e[vars.index(name)] += int(k) if k else 1
        elif name == "r2" and k:
            c = F.mul(c, F.power(F.R2, int(k)))
        else:
            c = F.mul(c, F.parse(f))
    return c, tuple(e)
