"""Double-plane models w^2 = s_h(x, y, z) of degree-2 polarizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from ..fermat.lines import LineConfiguration
from ..gf import field as F
from ..gf.groebner import normal_form_F
from ..gf.linalg import kernel, rank
from ..gf.poly import PLANE, Poly, parse_poly
from .divisor import DivisorExpression, express_divisor
from .sections import DEFAULT_MAX_D, CoordinateMap, monomial_basis, section_space
from .sextic import SexticForm, singular_locus, singularity_type


class ModelError(ArithmeticError):
    pass


def _ternary_monomials(deg: int) -> list[tuple[int, int, int]]:
    return [(a, b, deg - a - b) for a in range(deg, -1, -1) for b in range(deg - a, -1, -1)]


CUBIC_MONOMIALS = _ternary_monomials(3)
SEXTIC_MONOMIALS = _ternary_monomials(6)


@dataclass
class ModelRecord:
    h: np.ndarray
    expression: DivisorExpression
    xi: list[Poly]
    omega: Poly
    sextic: SexticForm
    dims: tuple[int, int, int | None]
    singular_points: list = field(default_factory=list)
    local_types: list = field(default_factory=list)
    rt: str = ""
    canonical: SexticForm | None = None
    aut_order: int | None = None

    @property
    def d(self) -> int:
        return self.expression.d

    def to_text(self) -> str:
        lines = [
            "h " + " ".join(str(int(x)) for x in self.h),
            f"d {self.d}",
            "J " + " ".join(f"{j}:{c}" for j, c in self.expression.terms),
            f"dims {' '.join(str(x) for x in self.dims)}",
            f"omega {self.omega.to_str()}",
        ]
        lines += [f"xi{i} {p.to_str()}" for i, p in enumerate(self.xi)]
        lines.append(f"sextic {self.sextic}")
        lines.append("singular " + " ; ".join(
            f"{' '.join(F.to_str(c) for c in p)} {t[0]}{t[1]}" for p, t in zip(self.singular_points, self.local_types)))
        lines.append(f"rt {self.rt}")
        if self.canonical is not None:
            lines.append("canonical " + " ".join(F.to_str(c) for c in self.canonical.coeffs))
            lines.append(f"canonical_poly {self.canonical}")
        if self.aut_order is not None:
            lines.append(f"aut {self.aut_order}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ModelRecord":
        """Inverse of :meth:`to_text`."""
        kv = {}
        for line in text.splitlines():
            if line and not line.startswith("#"):
                key, _, rest = line.partition(" ")
                kv[key] = rest.strip()
        h = np.array([int(x) for x in kv["h"].split()], dtype=np.int64)
        terms = tuple((int(j), int(c)) for j, c in (t.split(":") for t in kv["J"].split()))
        expr = DivisorExpression(int(kv["d"]), terms)
        dims = tuple(None if x == "None" else int(x) for x in kv["dims"].split())
        pts, types = [], []
        for chunk in filter(None, (c.strip() for c in kv.get("singular", "").split(";"))):
            *coords, t = chunk.split()
            pts.append(tuple(F.parse(c) for c in coords))
            types.append((t[0], int(t[1:])))
        rec = cls(h, expr, [parse_poly(kv[f"xi{i}"]) for i in range(3)], parse_poly(kv["omega"]),
                  SexticForm.parse(kv["sextic"]), dims, pts, types, kv.get("rt", ""))
        if "canonical" in kv:
            rec.canonical = SexticForm(tuple(F.parse(c) for c in kv["canonical"].split()))
        if "aut" in kv:
            rec.aut_order = int(kv["aut"])
        return rec


def _monomial_products(xi: list[Poly], monomials) -> dict[tuple, Poly]:
    """Normal forms of xi^e for each exponent triple, sharing sub-products."""
    cache: dict[tuple, Poly] = {(0, 0, 0): Poly.const(F.ONE, xi[0].vars)}

    def get(e):
        if e not in cache:
            k = next(i for i in range(3) if e[i])
            prev = e[:k] + (e[k] - 1,) + e[k + 1:]
            cache[e] = normal_form_F(get(prev) * xi[k])
        return cache[e]

    return {e: get(e) for e in monomials}


def _combination(products: dict, coeffs: dict) -> Poly:
    out = Poly({}, next(iter(products.values())).vars)
    for e, c in coeffs.items():
        if c:
            out = out + products[e].scale(c)
    return out


def build_model(h, conf: LineConfiguration, verify_dims: bool = True,
                max_d: int = DEFAULT_MAX_D, classify: bool = True) -> ModelRecord:
    """xi_0..2, omega and the branch sextic s_h for a degree-2 polarization h."""
    h = np.asarray(h, dtype=np.int64)
    expr = express_divisor(h, conf)
    g1 = section_space(expr, conf, max_d)
    if g1.dim != 3:
        raise ModelError(f"dim Gamma(h) = {g1.dim}, expected 3")
    xi = g1.polys
    g3 = section_space(expr.scaled(3), conf, 3 * max_d)
    if g3.dim != 11:
        raise ModelError(f"dim Gamma(3h) = {g3.dim}, expected 11")
    dim6 = None
    if verify_dims:
        dim6 = section_space(expr.scaled(6), conf, 6 * max_d).dim
        if dim6 != 38:
            raise ModelError(f"dim Gamma(6h) = {dim6}, expected 38")

    cub = _monomial_products(xi, CUBIC_MONOMIALS)
    cm3 = CoordinateMap(monomial_basis(3 * expr.d))
    span = [cm3.vector(cub[e]) for e in CUBIC_MONOMIALS]
    if rank(np.array(span)) != 10:
        raise ModelError("cubic products of the xi are dependent")
    omega = None
    for cand in g3.polys:
        if rank(np.array(span + [cm3.vector(cand)])) == 11:
            omega = cand
            break
    if omega is None:
        raise ModelError("Gamma(3h) is spanned by cubic products")

    sex = _monomial_products(xi, SEXTIC_MONOMIALS)
    polys = [normal_form_F(omega * omega)]
    polys += [normal_form_F(omega * cub[e]) for e in CUBIC_MONOMIALS]
    polys += [sex[e] for e in SEXTIC_MONOMIALS]
    cm6 = CoordinateMap(monomial_basis(6 * expr.d))
    A = np.array([cm6.vector(p) for p in polys], dtype=np.uint8).T
    rel = kernel(A)
    if len(rel) != 1:
        raise ModelError(f"relation space has dimension {len(rel)}")
    r = rel[0]
    if r[0] == 0:
        raise ModelError("relation without an omega^2 term")
    r = F.MUL[F.INV[r[0]], r]
    b = {e: int(r[1 + k]) for k, e in enumerate(CUBIC_MONOMIALS)}
    c = {e: int(r[11 + k]) for k, e in enumerate(SEXTIC_MONOMIALS)}
    omega = omega - _combination(cub, b).scale(F.gf(2))
    bpoly = Poly(b, PLANE)
    spoly = -(bpoly * bpoly) - Poly(c, PLANE)
    s = SexticForm.from_poly(spoly)
    lhs = normal_form_F(omega * omega)
    rhs = _combination(sex, {e: spoly.coeff(e) for e in SEXTIC_MONOMIALS})
    if lhs != rhs:
        raise ModelError("omega^2 differs from s_h(xi) modulo F")
    rec = ModelRecord(h, expr, xi, omega, s, (g1.dim, g3.dim, dim6))
    if classify:
        ade, data = singularity_type(s)
        rec.singular_points = [p for p, _ in data]
        rec.local_types = [t for _, t in data]
        rec.rt = str(ade)
    return rec


def check_model(rec: ModelRecord) -> bool:
    """Re-verify omega^2 = s_h(xi) modulo F."""
    sex = _monomial_products(rec.xi, SEXTIC_MONOMIALS)
    sp = rec.sextic.poly()
    rhs = _combination(sex, {e: sp.coeff(e) for e in SEXTIC_MONOMIALS})
    return normal_form_F(rec.omega * rec.omega) == rhs


__all__ = ["ModelError", "ModelRecord", "build_model", "check_model", "singular_locus"]
