"""Aut(X, h_F) as permutations of the 252 lines and as 22x22 matrices.

An element is stored by the line indices of the images of the basis lines
(``key``, 22 bytes); row i of its matrix is the class of line key[i].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gf import field as F
from ..gf import linalg
from .geometry import dot, normalize, plane_points
from .lines import RANK, HLine, LineConfiguration

PGU_ORDER = 378_000
GROUP_ORDER = 2 * PGU_ORDER


def _mat(rows):
    return np.array(rows, dtype=np.uint8)


def unitary_scalar(T) -> int:
    """mu with T * conj(T)^t = mu * I, or raise if T is not unitary."""
    T = _mat(T)
    P = linalg.matmul(T, linalg.frob_matrix(T).T)
    mu = int(P[0, 0])
    if mu == 0 or not np.array_equal(P, F.MUL[mu, np.eye(3, dtype=np.uint8) * F.ONE]):
        raise ValueError("matrix is not unitary up to scalar")
    return mu


def unitary_generators() -> list[np.ndarray]:
    """Monomial maps and one non-monomial unitary reflection."""
    zeta6 = next(z for z in F.NONZERO if F.power(z, 6) == F.ONE
                 and all(F.power(z, k) != F.ONE for k in (1, 2, 3)))
    swap01 = _mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    cycle = _mat([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    diag = _mat([[1, 0, 0], [0, 1, 0], [0, 0, zeta6]])
    # reflection in v = (1,1,1): T = I - (1 - zeta) v^* v / <v,v> with zeta = -1
    refl = _mat([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
    gens = [swap01, cycle, diag, refl]
    for g in gens:
        unitary_scalar(g)
    return gens


def lift_permutation(T, conf: LineConfiguration, sigma: int | None = None) -> np.ndarray:
    """Line permutation of (w, p) -> (sigma w, p T) with sigma^2 = mu."""
    T = _mat(T)
    mu = unitary_scalar(T)
    if sigma is None:
        sigma = F.sqrt(mu)
    if F.mul(sigma, sigma) != mu:
        raise ValueError("sigma^2 must equal the unitary scalar")
    Tinv = linalg.inverse(T)
    perm = np.empty(len(conf.lines), dtype=np.int64)
    for i, ln in enumerate(conf.lines):
        perm[i] = _image_index(ln, T, Tinv, sigma, conf)
    if len(set(perm.tolist())) != len(perm):
        raise AssertionError("lifted map is not a permutation of the lines")
    return perm


def _apply(p, T):
    return tuple(int(v) for v in linalg.matmul(_mat([p]), T)[0])


def _image_index(ln: HLine, T, Tinv, sigma, conf) -> int:
    Pn = normalize(_apply(ln.point, T))
    # image of the plane line: coefficients transform by T^{-1} as columns
    lin_img = tuple(int(v) for v in linalg.matmul(Tinv, _mat([ln.linear]).T)[:, 0])
    y = _probe_point(lin_img, Pn)
    x = _apply(y, Tinv)
    target = F.mul(sigma, ln.g(*x))
    for sign in "+-":
        j = conf.index_of(Pn, sign)
        if conf.lines[j].g(*y) == target:
            return j
    raise AssertionError("image of a line is not an h_F-line")


def _probe_point(lin, avoid):
    """A rational point on the plane line ``lin`` different from ``avoid``."""
    for p in plane_points():
        if dot(lin, p) == 0 and p != avoid:
            return p
    raise AssertionError("line without rational points")


def deck_permutation(conf: LineConfiguration) -> np.ndarray:
    return np.array([conf.partner(i) for i in range(len(conf.lines))], dtype=np.int64)


@dataclass
class Group:
    keys: np.ndarray            # (N, 22) uint8, images of the basis lines
    generators: list            # line permutations (int64 arrays of length 252)
    conf: LineConfiguration

    def __len__(self):
        return len(self.keys)

    def matrices(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Integer matrices T (rows = classes of the image lines)."""
        return self.conf.classes[self.keys[start:stop].astype(np.int64)]

    def matrix(self, i: int) -> np.ndarray:
        return self.conf.classes[self.keys[i].astype(np.int64)]

    def generator_matrices(self) -> list[np.ndarray]:
        return [self.conf.classes[g[:RANK]] for g in self.generators]

    def key_index(self) -> dict:
        return {bytes(k): i for i, k in enumerate(self.keys)}

    def contains_matrix(self, T, index=None) -> bool:
        key = key_of_matrix(T, self.conf)
        if key is None:
            return False
        index = index if index is not None else self.key_index()
        return bytes(np.asarray(key, dtype=np.uint8)) in index


def key_of_matrix(T, conf: LineConfiguration):
    """Line indices of the rows of T, or None if some row is not a line class."""
    lookup = class_lookup(conf)
    out = []
    for row in np.asarray(T, dtype=np.int64):
        j = lookup.get(tuple(int(v) for v in row))
        if j is None:
            return None
        out.append(j)
    return out


def class_lookup(conf: LineConfiguration) -> dict:
    cache = getattr(conf, "_class_lookup", None)
    if cache is None:
        cache = {tuple(int(v) for v in c): i for i, c in enumerate(conf.classes)}
        conf._class_lookup = cache
    return cache


def closure(generators: list[np.ndarray], limit: int = GROUP_ORDER) -> np.ndarray:
    """All products of the generators (BFS); returns an (N, 252) uint8 array."""
    n = len(generators[0])
    ident = np.arange(n, dtype=np.uint8)
    gens = [np.asarray(g, dtype=np.uint8) for g in generators]
    seen = {ident.tobytes()}
    chunks = [ident[None, :]]
    frontier = ident[None, :]
    while len(frontier):
        fresh = []
        for g in gens:
            imgs = g[frontier]          # apply g after each element
            for row in imgs:
                b = row.tobytes()
                if b not in seen:
                    seen.add(b)
                    fresh.append(row)
            if len(seen) > limit:
                raise AssertionError("closure exceeded the expected order")
        frontier = np.array(fresh, dtype=np.uint8) if fresh else np.zeros((0, n), np.uint8)
        if len(frontier):
            chunks.append(frontier)
    return np.concatenate(chunks)


def build_group(conf: LineConfiguration, verify: bool = True) -> Group:
    perms = [lift_permutation(T, conf) for T in unitary_generators()]
    perms.append(deck_permutation(conf))
    elems = closure(perms)
    if len(elems) != GROUP_ORDER:
        raise AssertionError(f"group closure has order {len(elems)}, expected {GROUP_ORDER}")
    keys = np.ascontiguousarray(elems[:, :RANK])
    del elems
    group = Group(keys, perms, conf)
    if verify:
        verify_group(group)
    return group


def verify_group(group: Group, chunk: int = 50_000) -> None:
    """Faithfulness (distinct matrices) and T M T^t = M for every element."""
    keys = group.keys
    uniq = np.unique(keys.view(np.dtype((np.void, RANK))))
    if len(uniq) != len(keys):
        raise AssertionError("two group elements share a matrix")
    meet, gram = group.conf.meet, group.conf.gram
    for s in range(0, len(keys), chunk):
        k = keys[s:s + chunk].astype(np.intp)
        if not np.array_equal(meet[k[:, :, None], k[:, None, :]], np.broadcast_to(gram, (len(k), RANK, RANK))):
            raise AssertionError("a group element is not an isometry")


def frobenius_permutation(conf: LineConfiguration) -> np.ndarray:
    """Lines under the coefficientwise 5th power of their equations."""
    index = {(l.point, l.g): i for i, l in enumerate(conf.lines)}
    perm = np.empty(len(conf.lines), dtype=np.int64)
    for i, ln in enumerate(conf.lines):
        key = (normalize(tuple(F.frob(c) for c in ln.point)), ln.g.frob())
        if key not in index:
            raise AssertionError("Frobenius image is not an h_F-line")
        perm[i] = index[key]
    return perm


def frobenius_matrix(conf: LineConfiguration) -> np.ndarray:
    G = conf.classes[frobenius_permutation(conf)[:RANK]]
    if not np.array_equal(G @ G, np.eye(RANK, dtype=np.int64)):
        raise AssertionError("Frobenius matrix is not an involution")
    if not np.array_equal(G @ conf.gram @ G.T, conf.gram):
        raise AssertionError("Frobenius matrix is not an isometry")
    return G


def hermitian_check(T) -> bool:
    try:
        unitary_scalar(T)
        return True
    except ValueError:
        return False
