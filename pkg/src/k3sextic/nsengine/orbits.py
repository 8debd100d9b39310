"""Orbit decomposition of group-stable vector sets under Aut(X, h_F)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .lattice import order_key


@dataclass
class OrbitRecord:
    representative: np.ndarray
    size: int
    stabilizer_order: int
    degree: int
    is_polarization: bool | None = None
    galois_partner: int | None = None      # index into the orbit list
    rt: str | None = None
    failure: str | None = None              # why a non-polarization fails

    def rep_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.representative)


class OrbitEscapeError(RuntimeError):
    pass


class VectorIndex:
    """Sorted byte keys of integer rows for vectorised membership lookup."""

    def __init__(self, vectors: np.ndarray):
        self.vectors = np.asarray(vectors)
        self.n = self.vectors.shape[1]
        self.keys = _keys(self.vectors)
        self.order = np.argsort(self.keys, kind="stable")
        self.sorted = self.keys[self.order]

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Row indices of ``rows`` in the set, -1 where absent."""
        k = _keys(rows)
        pos = np.searchsorted(self.sorted, k)
        pos = np.minimum(pos, len(self.sorted) - 1)
        hit = self.sorted[pos] == k
        out = np.where(hit, self.order[pos], -1)
        return out


def _keys(rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows)
    if rows.size and np.abs(rows).max() > 127:
        a = np.ascontiguousarray(rows.astype(np.int16))
    else:
        a = np.ascontiguousarray(rows.astype(np.int8))
    return a.view(np.dtype((np.void, a.shape[1] * a.itemsize))).ravel()


def orbit_labels(vectors: np.ndarray, generators: list[np.ndarray],
                 index: VectorIndex | None = None, chunk: int = 250_000):
    """Connected components of the generator action graph on ``vectors``."""
    index = index or VectorIndex(vectors)
    N = len(vectors)
    rows, cols = [], []
    for T in generators:
        T = np.asarray(T, dtype=np.int64)
        for s in range(0, N, chunk):
            img = vectors[s:s + chunk].astype(np.int64) @ T
            j = index.lookup(img)
            if np.any(j < 0):
                raise OrbitEscapeError("the vector set is not stable under the group")
            rows.append(np.arange(s, s + len(img)))
            cols.append(j)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    A = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(N, N)).tocsr()
    ncomp, labels = connected_components(A, directed=True, connection="weak")
    return ncomp, labels


def representatives(vectors: np.ndarray, labels: np.ndarray, ncomp: int) -> np.ndarray:
    """Index of the order-minimal member of each component."""
    s = np.abs(vectors).sum(axis=1)
    keys = [vectors[:, j] for j in range(vectors.shape[1] - 1, -1, -1)] + [s, labels]
    perm = np.lexsort(keys)
    lab_sorted = labels[perm]
    first = np.ones(len(perm), dtype=bool)
    first[1:] = lab_sorted[1:] != lab_sorted[:-1]
    reps = np.empty(ncomp, dtype=np.int64)
    reps[lab_sorted[first]] = perm[first]
    return reps


def orbit_decompose(vectors: np.ndarray, generators: list[np.ndarray], group_order: int,
                    degree_of=None) -> tuple[list[OrbitRecord], np.ndarray, VectorIndex]:
    """Orbits with order-minimal representatives, sorted by representative."""
    vectors = np.asarray(vectors, dtype=np.int64)
    index = VectorIndex(vectors)
    ncomp, labels = orbit_labels(vectors, generators, index)
    reps = representatives(vectors, labels, ncomp)
    sizes = np.bincount(labels, minlength=ncomp)
    records = []
    for lab in range(ncomp):
        size = int(sizes[lab])
        if group_order % size:
            raise ArithmeticError("orbit size does not divide the group order")
        rep = vectors[reps[lab]].copy()
        deg = degree_of(rep) if degree_of else 0
        records.append((order_key(rep), lab, OrbitRecord(rep, size, group_order // size, deg)))
    records.sort(key=lambda t: t[0])
    relabel = np.empty(ncomp, dtype=np.int64)
    for new, (_, lab, _) in enumerate(records):
        relabel[lab] = new
    return [r for _, _, r in records], relabel[labels], index


def galois_partners(orbits: list[OrbitRecord], vectors: np.ndarray, labels: np.ndarray,
                    index: VectorIndex, gamma: np.ndarray) -> None:
    """Fill in ``galois_partner`` with the orbit index of rep * Gamma."""
    reps = np.array([o.representative for o in orbits], dtype=np.int64)
    j = index.lookup(reps @ np.asarray(gamma, dtype=np.int64))
    if np.any(j < 0):
        raise OrbitEscapeError("Galois conjugate of a representative is not in the set")
    for o, jj in zip(orbits, j):
        o.galois_partner = int(labels[jj])


def stabilizer_order(rep: np.ndarray, group, chunk: int = 20_000) -> int:
    """Direct count of group elements fixing ``rep``."""
    rep = np.asarray(rep, dtype=np.int64)
    classes = group.conf.classes.astype(np.int64)
    count = 0
    for s in range(0, len(group.keys), chunk):
        k = group.keys[s:s + chunk].astype(np.intp)
        img = np.einsum("i,nij->nj", rep, classes[k])
        count += int(np.all(img == rep, axis=1).sum())
    return count
