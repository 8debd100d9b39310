"""Disk-backed orbit decomposition for vector sets too large for memory.

Vectors are split into buckets by a hash of the sorted multiset of their
pairings with the 252 line classes.  The group and the Frobenius action both
permute the lines, so an orbit and its Galois conjugate always share a bucket
and each bucket can be decomposed on its own.  Finished buckets are written
as text checkpoints, so an interrupted run resumes where it stopped.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .lattice import order_key
from .orbits import OrbitRecord, galois_partners, orbit_decompose

_HASH_SEED = 0x5EED5


def _weights(n: int) -> np.ndarray:
    return np.random.default_rng(_HASH_SEED).integers(1, 2**31, size=n, dtype=np.int64)


def bucket_of(vectors: np.ndarray, line_pairing: np.ndarray, nbuckets: int) -> np.ndarray:
    """Group-invariant bucket ids; ``line_pairing`` = gram @ classes.T."""
    P = np.sort(np.asarray(vectors, dtype=np.int64) @ line_pairing, axis=1)
    h = (P * _weights(P.shape[1])).sum(axis=1)
    return (h % nbuckets).astype(np.int64)


def _bucket_path(directory: Path, k: int) -> Path:
    return directory / f"bucket-{k:04d}.bin"


def spill(chunks, line_pairing: np.ndarray, directory, nbuckets: int) -> int:
    """Write every chunk row into its bucket file as int8; returns the total count."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    handles = [open(_bucket_path(directory, k), "wb") for k in range(nbuckets)]
    total = 0
    try:
        for arr in chunks:
            arr = np.asarray(arr, dtype=np.int64)
            if not len(arr):
                continue
            if np.abs(arr).max() > 127:
                raise OverflowError("coordinate outside the int8 spill format")
            b = bucket_of(arr, line_pairing, nbuckets)
            for k in np.unique(b):
                handles[k].write(arr[b == k].astype(np.int8).tobytes())
            total += len(arr)
    finally:
        for f in handles:
            f.close()
    (directory / "DONE").write_text(f"{nbuckets} {total}\n")
    return total


def _load_bucket(directory: Path, k: int, n: int) -> np.ndarray:
    raw = np.fromfile(_bucket_path(directory, k), dtype=np.int8)
    return raw.reshape(-1, n).astype(np.int64)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _record_line(o: OrbitRecord, partner: np.ndarray) -> str:
    return " ".join([
        ",".join(str(int(x)) for x in o.representative),
        str(o.size), str(o.stabilizer_order), str(o.degree),
        ",".join(str(int(x)) for x in partner),
    ])


def _parse_record(line: str):
    rep, size, stab, deg, partner = line.split()
    rep = np.array([int(x) for x in rep.split(",")], dtype=np.int64)
    part = tuple(int(x) for x in partner.split(","))
    return OrbitRecord(rep, int(size), int(stab), int(deg)), part


def decompose_buckets(directory, n: int, generators, group_order: int, gamma,
                      degree_of=None, progress=None) -> list[OrbitRecord]:
    """Orbits of all spilled vectors, sorted by representative, with Galois partners."""
    directory = Path(directory)
    nbuckets, _ = (int(x) for x in (directory / "DONE").read_text().split())
    pairs: list[tuple[OrbitRecord, tuple]] = []
    for k in range(nbuckets):
        ck = directory / f"bucket-{k:04d}.orbits"
        if not ck.exists():
            vecs = _load_bucket(directory, k, n)
            text = ""
            if len(vecs):
                orbs, labels, index = orbit_decompose(vecs, generators, group_order, degree_of)
                galois_partners(orbs, vecs, labels, index, gamma)
                text = "".join(_record_line(o, orbs[o.galois_partner].representative) + "\n" for o in orbs)
            _write_atomic(ck, text)
        for line in ck.read_text().splitlines():
            pairs.append(_parse_record(line))
        if progress:
            progress(k, nbuckets)
    pairs.sort(key=lambda t: order_key(t[0].representative))
    where = {o.rep_tuple(): i for i, (o, _) in enumerate(pairs)}
    out = []
    for o, part in pairs:
        o.galois_partner = where[part]
        out.append(o)
    return out
