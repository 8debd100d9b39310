"""Buchberger's algorithm in grevlex over GF(25), normal forms modulo the
surface relation, and quotient dimensions."""

from __future__ import annotations

import heapq
import math
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from . import field as F
from .poly import AFFINE, HOMOG, Poly, grevlex_key

INFINITE = math.inf


def surface_equation(vars: tuple[str, ...] = AFFINE) -> Poly:
    """F = w^2 - x^6 - y^6 - 1 (affine) or w^2 - x^6 - y^6 - z^6."""
    n = len(vars)
    t = {(2,) + (0,) * (n - 1): F.ONE}
    for i in range(1, n):
        e = [0] * n
        e[i] = 6
        t[tuple(e)] = F.neg(F.ONE)
    if n == 3:
        t[(0, 0, 0)] = F.neg(F.ONE)
    return Poly(t, vars)


@lru_cache(maxsize=None)
def _sextic_power(k: int, n: int) -> tuple:
    """Terms of (x^6 + y^6 [+ z^6 | + 1])^k as a tuple of (exp-without-w, coeff)."""
    vars = AFFINE if n == 3 else HOMOG
    base = surface_equation(vars) - Poly.var("w", vars) ** 2
    base = -base
    p = base ** k
    return tuple((e[1:], c) for e, c in p.terms.items())


def normal_form_F(g: Poly) -> Poly:
    """Unique representative ``w*f + h`` of g modulo (F); f, h free of w."""
    n = g.nvars
    add, mul = F._ADD, F._MUL
    out: dict = {}
    for e, c in g.terms.items():
        a = e[0]
        if a < 2:
            out[e] = add[out.get(e, 0)][c]
            continue
        rest = e[1:]
        for pe, pc in _sextic_power(a // 2, n):
            ee = (a % 2,) + tuple(x + y for x, y in zip(rest, pe))
            out[ee] = add[out.get(ee, 0)][mul[c][pc]]
    return Poly(out, g.vars)


# --- reduction ---------------------------------------------------------------

def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reduce_terms(terms: dict, basis: list[tuple[tuple, dict]]) -> dict:
    """Full remainder of ``terms`` by monic ``basis`` [(lead_exp, terms)]."""
    add, sub, mul = F._ADD, F._SUB, F._MUL
    p = dict(terms)
    heap = [(_neg_key(e), e) for e in p]
    heapq.heapify(heap)
    rem: dict = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = p.pop(e, 0)
        if not c:
            continue
        for lead, g in basis:
            if _divides(lead, e):
                shift = tuple(x - y for x, y in zip(e, lead))
                row = mul[c]
                for ge, gc in g.items():
                    te = tuple(x + y for x, y in zip(ge, shift))
                    if te == e:
                        continue
                    old = p.get(te)
                    if old is None:
                        p[te] = sub[0][row[gc]]
                        heapq.heappush(heap, (_neg_key(te), te))
                    else:
                        p[te] = sub[old][row[gc]]
                break
        else:
            rem[e] = c
    return {e: c for e, c in rem.items() if c}


@lru_cache(maxsize=1 << 20)
def _neg_key(e):
    k = grevlex_key(e)
    return (-k[0], tuple(-x for x in k[1]))


def _lead(terms: dict):
    e = max(terms, key=grevlex_key)
    return e, terms[e]


def _monic(terms: dict) -> dict:
    _, c = _lead(terms)
    ic = F.inv(c)
    row = F._MUL[ic]
    return {e: row[v] for e, v in terms.items()}


def _spoly(f: dict, fl, g: dict, gl) -> dict:
    lcm = tuple(max(a, b) for a, b in zip(fl, gl))
    sf = tuple(a - b for a, b in zip(lcm, fl))
    sg = tuple(a - b for a, b in zip(lcm, gl))
    out: dict = {}
    add, sub = F._ADD, F._SUB
    for e, c in f.items():
        ee = tuple(a + b for a, b in zip(e, sf))
        out[ee] = add[out.get(ee, 0)][c]
    for e, c in g.items():
        ee = tuple(a + b for a, b in zip(e, sg))
        out[ee] = sub[out.get(ee, 0)][c]
    return {e: c for e, c in out.items() if c}


class IdealGB:
    """Reduced Groebner basis (grevlex) of the ideal generated by ``gens``."""

    order = "grevlex"

    def __init__(self, gens: list[Poly], basis: list[Poly]):
        self.gens = gens
        self.basis = basis
        self.vars = gens[0].vars
        self._red = [(b.leading()[0], b.terms) for b in basis]

    def __repr__(self):
        return f"IdealGB({[str(b) for b in self.basis]})"

    def __eq__(self, other):
        return isinstance(other, IdealGB) and set(self.basis) == set(other.basis)

    def __hash__(self):
        return hash(frozenset(self.basis))

    @property
    def leads(self) -> list[tuple]:
        return [r[0] for r in self._red]

    def reduce(self, f: Poly) -> Poly:
        return Poly(reduce_terms(f.terms, self._red), f.vars)

    def reduce_terms(self, terms: dict) -> dict:
        return reduce_terms(terms, self._red)

    def contains(self, f: Poly) -> bool:
        return not reduce_terms(f.terms, self._red)

    def is_unit(self) -> bool:
        return any(sum(l) == 0 for l in self.leads)

    def quotient_dimension(self):
        return quotient_dimension(self)


def buchberger(gens: list[Poly]) -> IdealGB:
    """Reduced Groebner basis of ``gens`` in grevlex(w, x, y)."""
    if not gens:
        raise ValueError("empty generator list")
    vars = gens[0].vars
    G: list[tuple[tuple, dict]] = []
    for g in gens:
        if g.terms:
            r = reduce_terms(g.terms, G)
            if r:
                r = _monic(r)
                G.append((_lead(r)[0], r))
    pairs = [(i, j) for i, j in combinations(range(len(G)), 2)]
    while pairs:
        # normal selection strategy: smallest lcm first
        pairs.sort(key=lambda ij: grevlex_key(tuple(max(a, b) for a, b in zip(G[ij[0]][0], G[ij[1]][0]))))
        i, j = pairs.pop(0)
        li, lj = G[i][0], G[j][0]
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading terms
        lcm = tuple(max(a, b) for a, b in zip(li, lj))
        if _chain_skip(G, pairs, i, j, lcm):
            continue
        r = reduce_terms(_spoly(G[i][1], li, G[j][1], lj), G)
        if r:
            r = _monic(r)
            G.append((_lead(r)[0], r))
            k = len(G) - 1
            pairs.extend((m, k) for m in range(k))
    return IdealGB(list(gens), _interreduce(G, vars))


def _chain_skip(G, pairs, i, j, lcm) -> bool:
    pending = set(pairs)
    for k in range(len(G)):
        if k in (i, j):
            continue
        if not _divides(G[k][0], lcm):
            continue
        a, b = min(i, k), max(i, k)
        c, d = min(j, k), max(j, k)
        if (a, b) not in pending and (c, d) not in pending:
            return True
    return False


def _interreduce(G, vars) -> list[Poly]:
    leads = [g[0] for g in G]
    keep = []
    for idx, l in enumerate(leads):
        dominated = any(
            k != idx and _divides(leads[k], l) and (leads[k] != l or k < idx)
            for k in range(len(leads))
        )
        if not dominated:
            keep.append(G[idx])
    out = []
    for idx, (l, t) in enumerate(keep):
        others = [g for k, g in enumerate(keep) if k != idx]
        lead_term = {l: t[l]}
        tail = {e: c for e, c in t.items() if e != l}
        r = reduce_terms(tail, others)
        r.update(lead_term)
        out.append(Poly(_monic(r), vars))
    out.sort(key=lambda p: grevlex_key(p.leading()[0]))
    return out


def ideal_power_plus_F(gens: list[Poly], nu: int) -> IdealGB:
    """Groebner basis of I^nu + (F) for I = (gens)."""
    if nu < 1:
        raise ValueError("nu must be positive")
    vars = gens[0].vars
    prods = []
    for combo in combinations_with_replacement(range(len(gens)), nu):
        p = Poly.const(F.ONE, vars)
        for k in combo:
            p = p * gens[k]
        prods.append(p)
    return buchberger(prods + [surface_equation(vars)])


def quotient_dimension(gb: IdealGB):
    """Number of standard monomials, or INFINITE if the staircase is unbounded."""
    leads = gb.leads
    n = len(gb.vars)
    if any(sum(l) == 0 for l in leads):
        return 0
    bounds = []
    for i in range(n):
        pure = [l[i] for l in leads if all(l[k] == 0 for k in range(n) if k != i)]
        if not pure:
            return INFINITE
        bounds.append(min(pure))
    count = 0

    def rec(prefix):
        nonlocal count
        k = len(prefix)
        if k == n:
            if not any(_divides(l, prefix) for l in leads):
                count += 1
            return
        for a in range(bounds[k]):
            rec(prefix + (a,))

    rec(())
    return count
