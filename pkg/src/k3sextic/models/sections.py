"""Global sections of line bundles on X_F as subspaces of V_m."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fermat.lines import LineConfiguration
from ..gf import field as F
from ..gf.groebner import IdealGB, ideal_power_plus_F, normal_form_F
from ..gf.linalg import kernel, rank
from ..gf.poly import AFFINE, Poly
from .divisor import DivisorExpression, express_divisor

DEFAULT_MAX_D = 12


class TractabilityError(RuntimeError):
    pass


def monomial_basis(m: int) -> list[tuple[int, int, int]]:
    """Exponents (w, x, y) of V_m: w*M with deg M <= m-3 and N with deg N <= m."""
    out = []
    for k in range(m, -1, -1):
        for i in range(k, -1, -1):
            out.append((0, i, k - i))
    for k in range(m - 3, -1, -1):
        for i in range(k, -1, -1):
            out.append((1, i, k - i))
    return out


def vm_dimension(m: int) -> int:
    return len(monomial_basis(m))


class CoordinateMap:
    """Coefficient vectors of polynomials with respect to a monomial list."""

    def __init__(self, monomials):
        self.monomials = list(monomials)
        self.pos = {e: i for i, e in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)

    def vector(self, p: Poly) -> np.ndarray:
        v = np.zeros(len(self.monomials), dtype=np.uint8)
        for e, c in p.terms.items():
            try:
                v[self.pos[e]] = c
            except KeyError:
                raise ValueError(f"monomial {e} outside the coordinate space") from None
        return v

    def poly(self, v) -> Poly:
        return Poly({self.monomials[i]: int(c) for i, c in enumerate(v) if c}, AFFINE)


def line_ideal(conf: LineConfiguration, j: int) -> list[Poly]:
    """Affine (z = 1) generators of the ideal of line j (1-based)."""
    return [p.dehomogenize(3, AFFINE) for p in conf.lines[j - 1].generators()]


def power_gb(conf: LineConfiguration, j: int, nu: int) -> IdealGB:
    """Groebner basis of I_j^nu + (F), memoised on the configuration."""
    cache = conf.__dict__.setdefault("_power_gb", {})
    if (j, nu) not in cache:
        cache[(j, nu)] = ideal_power_plus_F(line_ideal(conf, j), nu)
    return cache[(j, nu)]


def _reduced_monomials(gb: IdealGB, monomials) -> list[dict]:
    """Normal forms of all monomials, reusing x*NF(m/x) = NF(m)."""
    cache: dict = {}
    out = []
    for e in sorted(monomials, key=sum):
        if e in cache:
            continue
        src = None
        for k in range(3):
            if e[k]:
                prev = e[:k] + (e[k] - 1,) + e[k + 1:]
                if prev in cache:
                    src = (prev, k)
                    break
        if src is None:
            terms = {e: F.ONE}
        else:
            prev, k = src
            terms = {}
            for ee, c in cache[prev].items():
                t = ee[:k] + (ee[k] + 1,) + ee[k + 1:]
                terms[t] = c
        cache[e] = gb.reduce_terms(terms)
    return [cache[e] for e in monomials]


@dataclass
class SectionBasis:
    polys: list[Poly]
    expression: DivisorExpression

    @property
    def dim(self) -> int:
        return len(self.polys)


def section_space(v_or_expr, conf: LineConfiguration, max_d: int = DEFAULT_MAX_D) -> SectionBasis:
    """Basis of V_d intersected with all I_j^(c_j)."""
    expr = v_or_expr if isinstance(v_or_expr, DivisorExpression) else express_divisor(v_or_expr, conf)
    if expr.d > max_d:
        raise TractabilityError(f"d = {expr.d} exceeds the bound {max_d}")
    if expr.d < 0:
        return SectionBasis([], expr)
    monos = monomial_basis(expr.d)
    blocks = []
    for j, c in expr.terms:
        red = _reduced_monomials(power_gb(conf, j, c), monos)
        support = sorted({e for r in red for e in r})
        if not support:
            continue
        pos = {e: i for i, e in enumerate(support)}
        B = np.zeros((len(support), len(monos)), dtype=np.uint8)
        for a, r in enumerate(red):
            for e, cc in r.items():
                B[pos[e], a] = cc
        blocks.append(B)
    if blocks:
        K = kernel(np.vstack(blocks))
    else:
        K = np.eye(len(monos), dtype=np.uint8)
    cm = CoordinateMap(monos)
    return SectionBasis([cm.poly(row) for row in K], expr)


def product_nf(polys) -> Poly:
    """Normal form modulo F of a product."""
    p = Poly.const(F.ONE, AFFINE)
    for q in polys:
        p = normal_form_F(p * q)
    return p


def span_rank(polys) -> int:
    monos = sorted({e for p in polys for e in p.terms})
    cm = CoordinateMap(monos)
    return rank(np.array([cm.vector(p) for p in polys], dtype=np.uint8)) if polys else 0
