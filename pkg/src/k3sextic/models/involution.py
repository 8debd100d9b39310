"""Action of explicit automorphisms of X_F on NS(X), and the non-projective
involution obtained from the smooth model of h_F'.

A map is given by affine polynomials (omega, xi_0, xi_1, xi_2) in (w, x, y),
defining (w, x, y) -> [omega : xi_0 : xi_1 : xi_2] in P(3, 1, 1, 1).  The
image of an h_F-line is found by substituting a parametrization of the line;
its intersection number with a basis line l_k = {L = 0, w = g} is the degree
of the gcd of the binary forms L(Xi) and Omega - g(Xi) along the probe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fermat.geometry import line_points
from ..fermat.group import Group, lift_permutation, unitary_scalar
from ..fermat.lines import H_F, RANK, HLine, LineConfiguration, class_from_numbers
from ..gf import field as F
from ..gf.groebner import normal_form_F
from ..gf.linalg import inverse, matmul, rank
from ..gf.poly import AFFINE, HOMOG, PLANE, Poly
from .equivalence import frame_matrices, hermitian_factor, hermitian_test
from .model import ModelRecord

BINARY = ("s", "t")
_WEIGHTS = (3, 1, 1)


class IndeterminacyError(ArithmeticError):
    """All coordinates of the map vanish identically along a probe line."""


class InvolutionError(RuntimeError):
    pass


# --- binary forms over GF(25) ------------------------------------------------------
# A binary form of degree n is handled through its dehomogenization f(1, t),
# a coefficient list (low degree first); the multiplicity of [0:1] is n - deg.

def _uni(p: Poly) -> list[int]:
    out: list[int] = []
    for (_, b), c in p.terms.items():
        if b >= len(out):
            out.extend([0] * (b + 1 - len(out)))
        out[b] = F.add(out[b], c)
    return _trim(out)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _binary(coeffs: list[int], n: int) -> Poly:
    return Poly({(n - b, b): c for b, c in enumerate(coeffs) if c}, BINARY)


def _divmod(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    a = list(a)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    inv = F.inv(b[-1])
    q = [0] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = F.mul(a[k + len(b) - 1], inv)
        q[k] = c
        if c:
            for i, x in enumerate(b):
                a[k + i] = F.sub(a[k + i], F.mul(c, x))
    return _trim(q), _trim(a[:len(b) - 1])


def _gcd(a: list[int], b: list[int]) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b)[1]
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(inv, x) for x in a]


def binary_gcd(forms: list[tuple[Poly, int]]) -> tuple[list[int], int]:
    """gcd of binary forms (p, degree) as (dehomogenized coefficients, degree).

    Zero forms are ignored; if every form is zero the result is ([], -1).
    """
    g: list[int] | None = None
    smult = None
    for p, n in forms:
        u = _uni(p)
        if not u:
            continue
        g = u if g is None else _gcd(g, u)
        m = n - (len(u) - 1)
        smult = m if smult is None else min(smult, m)
    if g is None:
        return [], -1
    g = _gcd(g, [])  # monic
    return g, len(g) - 1 + smult


def binary_divide(p: Poly, n: int, d: list[int], nd: int) -> Poly:
    """Exact quotient of the degree-n form p by the degree-nd form d."""
    q, r = _divmod(_uni(p), d)
    if r or len(q) - 1 > n - nd:
        raise ArithmeticError("binary form division is not exact")
    return _binary(q, n - nd)


# --- line images -------------------------------------------------------------------------

def _linear_poly(coeffs) -> Poly:
    return Poly({tuple(1 if k == i else 0 for k in range(3)): c for i, c in enumerate(coeffs) if c}, PLANE)


def parametrize(line: HLine) -> list[Poly]:
    """Images of (w, x, y, z) along the line: p = s A + t B and w = g(p)."""
    A, B = line_points(line.linear)[:2]
    lin = [Poly({(1, 0): a, (0, 1): b}, BINARY) for a, b in zip(A, B)]
    return [line.g.subs(lin)] + lin


def map_degree(xi: list[Poly], omega: Poly) -> int:
    d = max(p.weighted_degree(_WEIGHTS) for p in xi if p)
    if omega.weighted_degree(_WEIGHTS) > 3 * d:
        raise ValueError("omega exceeds weighted degree 3d")
    return d


def image_numbers(polys, line: HLine, conf: LineConfiguration, d: int | None = None) -> np.ndarray:
    """Intersection numbers of the image of ``line`` with the 22 basis lines."""
    omega, *xi = polys
    d = map_degree(xi, omega) if d is None else d
    Xi = [p.homogenize(_WEIGHTS, d, HOMOG) for p in xi]
    Om = omega.homogenize(_WEIGHTS, 3 * d, HOMOG)
    par = parametrize(line)
    Xs = [p.subs(par) for p in Xi]
    Os = Om.subs(par)
    D, nd = binary_gcd([(p, d) for p in Xs])
    if nd < 0:
        raise IndeterminacyError("the map is undefined along a probe line")
    e = d - nd
    Xr = [binary_divide(p, d, D, nd) for p in Xs]
    D3 = _uni(_binary(D, nd) ** 3)
    Or = binary_divide(Os, 3 * d, D3, 3 * nd)
    out = np.zeros(RANK, dtype=np.int64)
    for k, ln in enumerate(conf.lines[:RANK]):
        a = _linear_poly(ln.linear).subs(Xr)
        b = Or - ln.g.subs(Xr)
        if a.is_zero() and b.is_zero():
            out[k] = -2
        else:
            out[k] = binary_gcd([(a, e), (b, 3 * e)])[1]
    return out


def choose_probe_lines(conf: LineConfiguration, exclude=()) -> list[int]:
    """Greedy: lines by index, skipping ``exclude``, keeping those that raise the rank."""
    chosen: list[int] = []
    rows: list[np.ndarray] = []
    bad = set(exclude)
    for i, c in enumerate(conf.classes):
        if i in bad:
            continue
        if np.linalg.matrix_rank(np.array(rows + [c], dtype=float)) > len(rows):
            chosen.append(i)
            rows.append(c)
            if len(chosen) == RANK:
                return chosen
    raise ValueError("probe lines do not span NS(X) over Q")


def ns_action_of_map(polys, conf: LineConfiguration, probe_lines=None, d: int | None = None) -> np.ndarray:
    """Gamma with v -> v Gamma the push-forward action of the map on NS(X)."""
    probe = choose_probe_lines(conf) if probe_lines is None else list(probe_lines)
    P = conf.classes[probe]
    if np.linalg.matrix_rank(P.astype(float)) != RANK:
        raise ValueError("probe lines do not span NS(X) over Q")
    Y = np.array([class_from_numbers(image_numbers(polys, conf.lines[i], conf, d), conf.gram)
                  for i in probe], dtype=np.int64)
    G = np.rint(np.linalg.solve(P.astype(float), Y.astype(float))).astype(np.int64)
    if not np.array_equal(P @ G, Y):
        raise ArithmeticError("action matrix is not integral")
    if not np.array_equal(G @ conf.gram @ G.T, conf.gram):
        raise ArithmeticError("action matrix is not an isometry")
    return G


def unitary_map_polys(T, sigma: int) -> list[Poly]:
    """(sigma w, (x, y, 1) T) as affine polynomials."""
    T = np.asarray(T, dtype=np.uint8)
    coords = [Poly.var("x"), Poly.var("y"), Poly.const(F.ONE)]
    xi = []
    for k in range(3):
        p = Poly({}, AFFINE)
        for i in range(3):
            p = p + coords[i].scale(int(T[i, k]))
        xi.append(p)
    return [Poly.var("w").scale(sigma)] + xi


# --- the involution -----------------------------------------------------------------------

def _general_position(points) -> list[int]:
    """Indices of four points with no three colinear."""
    pts = [np.array(p, dtype=np.uint8) for p in points]
    n = len(pts)
    for a in range(n):
        for b in range(a + 1, n):
            if rank(np.array([pts[a], pts[b]])) < 2:
                continue
            for c in range(b + 1, n):
                if rank(np.array([pts[a], pts[b], pts[c]])) < 3:
                    continue
                for e in range(c + 1, n):
                    if all(rank(np.array([pts[i], pts[j], pts[e]])) == 3
                           for i, j in ((a, b), (a, c), (b, c))):
                        return [a, b, c, e]
    raise ValueError("no four points in general position")


def element_lift(group: Group, index: int) -> tuple[np.ndarray, int]:
    """(T, sigma) realizing group element ``index`` as (w, p) -> (sigma w, p T)."""
    conf = group.conf
    key = group.keys[index].astype(np.int64)
    src = [conf.lines[i].point for i in range(RANK)]
    dst = [conf.lines[j].point for j in key]
    sel = _general_position(src)
    AP = frame_matrices(np.array([[src[i] for i in sel]], dtype=np.uint8))[0]
    AQ = frame_matrices(np.array([[dst[i] for i in sel]], dtype=np.uint8))[0]
    T = matmul(inverse(AP), AQ)
    mu = unitary_scalar(T)
    for sigma in range(1, F.Q):
        if F.mul(sigma, sigma) != mu:
            continue
        if np.array_equal(lift_permutation(T, conf, sigma)[:RANK], key):
            return T, sigma
    raise AssertionError("group element is not induced by a unitary map")


def find_tau(Gamma: np.ndarray, group: Group, chunk: int = 20_000) -> int | None:
    """First group index with (Gamma N)^2 = Id."""
    ident = np.eye(RANK, dtype=np.int64)
    a = H_F @ Gamma
    for s in range(0, len(group), chunk):
        N = group.matrices(s, s + chunk)
        b = np.einsum("i,nij->nj", a, N)
        c = b @ Gamma
        d = np.einsum("ni,nij->nj", c, N)
        for k in np.nonzero(np.all(d == H_F, axis=1))[0]:
            G = Gamma @ N[k]
            if np.array_equal(G @ G, ident):
                return s + int(k)
    return None


@dataclass
class InvolutionResult:
    omega: Poly
    xi: list[Poly]
    G: np.ndarray
    Gamma: np.ndarray
    tau: int
    T: np.ndarray
    sigma: int
    probe: list[int]

    def polys(self) -> list[Poly]:
        return [self.omega] + list(self.xi)

    def to_text(self) -> str:
        lines = [f"omega {self.omega.to_str()}"]
        lines += [f"xi{i} {p.to_str()}" for i, p in enumerate(self.xi)]
        lines.append("G")
        lines += [" ".join(str(int(x)) for x in row) for row in self.G]
        return "\n".join(lines) + "\n"


def _fermat_identity(omega: Poly, xi: list[Poly]) -> bool:
    rhs = Poly({}, AFFINE)
    for p in xi:
        rhs = rhs + normal_form_F(p ** 6)
    return normal_form_F(omega * omega) == normal_form_F(rhs)


def nonprojective_involution(model: ModelRecord, group: Group, verify: bool = True) -> InvolutionResult:
    """An involution of X_F moving h_F to a class of degree 4 against h_F."""
    conf = group.conf
    ok, H, lam = hermitian_test(model.sextic)
    if not ok:
        raise InvolutionError("branch sextic is not Hermitian")
    M = hermitian_factor(H)
    omega1 = model.omega.scale(F.inv(lam))
    xi1 = [Poly({}, AFFINE) for _ in range(3)]
    for k in range(3):
        for i in range(3):
            xi1[k] = xi1[k] + model.xi[i].scale(int(M[i, k]))
    if verify and not _fermat_identity(omega1, xi1):
        raise InvolutionError("rescaled map does not land on X_F")
    exclude = [j - 1 for j in model.expression.indices]
    probe = choose_probe_lines(conf, exclude)
    d = model.d
    Gamma = ns_action_of_map([omega1] + xi1, conf, probe, d)
    tau = find_tau(Gamma, group)
    if tau is None:
        raise InvolutionError("no tau with (Gamma N_tau)^2 = Id")
    T, sigma = element_lift(group, tau)
    omega2 = omega1.scale(sigma)
    xi2 = [Poly({}, AFFINE) for _ in range(3)]
    for k in range(3):
        for i in range(3):
            xi2[k] = xi2[k] + xi1[i].scale(int(T[i, k]))
    G = Gamma @ group.matrix(tau)
    if verify:
        G2 = ns_action_of_map([omega2] + xi2, conf, probe, d)
        if not np.array_equal(G2, G):
            raise InvolutionError("composed map acts differently than Gamma N_tau")
    res = InvolutionResult(omega2, xi2, G, Gamma, tau, T, sigma, probe)
    check_involution(res.G, group)
    return res


def check_involution(G, group: Group) -> dict:
    """The acceptance checks for G; raises InvolutionError on failure."""
    conf = group.conf
    G = np.asarray(G, dtype=np.int64)
    checks = {
        "order2": bool(np.array_equal(G @ G, np.eye(RANK, dtype=np.int64))),
        "isometry": bool(np.array_equal(G @ conf.gram @ G.T, conf.gram)),
        "pairing": int(H_F @ G @ conf.gram @ H_F),
        "outside_group": not group.contains_matrix(G),
    }
    if not (checks["order2"] and checks["isometry"] and checks["pairing"] == 4 and checks["outside_group"]):
        raise InvolutionError(f"involution checks failed: {checks}")
    return checks


__all__ = [
    "IndeterminacyError", "InvolutionError", "InvolutionResult", "binary_gcd", "check_involution",
    "choose_probe_lines", "element_lift", "find_tau", "image_numbers", "nonprojective_involution",
    "ns_action_of_map", "unitary_map_polys",
]
