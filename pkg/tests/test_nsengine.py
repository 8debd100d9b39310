import numpy as np
import pytest

from k3sextic.fermat.lines import H_F
from k3sextic.nsengine.lattice import (ADEType, NotDynkinError, PreconditionError, ade_type, order_argmin,
                                       order_key, total_order_cmp)
from k3sextic.nsengine.orbits import OrbitEscapeError, galois_partners, orbit_decompose, stabilizer_order
from k3sextic.nsengine.spill import bucket_of, decompose_buckets, spill

GROUP_ORDER = 756_000


def _rowset(A):
    return {tuple(int(v) for v in r) for r in np.asarray(A)}


@pytest.fixture(scope="module")
def v4(pipeline):
    return pipeline.vectors(4)


# --- total order -----------------------------------------------------------------------------------

def _e(*entries):
    v = [0] * 22
    for i, a in entries:
        v[i] = a
    return v


def test_total_order_examples():
    x = _e((21, 1))
    assert total_order_cmp(x, x) == 0
    assert total_order_cmp(x, _e((0, 1), (1, 1))) == -1
    assert total_order_cmp(_e((1, 2)), _e((0, 1), (1, -1))) == -1


def test_order_argmin_agrees_with_key(rng):
    A = rng.integers(-2, 3, (200, 22))
    assert order_key(A[order_argmin(A)]) == min(order_key(r) for r in A)


# --- nef and polarizations ---------------------------------------------------------------------

def test_h_f_is_a_polarization(ns):
    assert ns.is_nef(H_F) == (True, None)
    assert ns.is_polarization(H_F)


def test_non_nef_witness(ns, conf):
    v = H_F + conf.classes[0]
    nef, r = ns.is_nef(v)
    assert not nef
    assert ns.norm(r) == -2 and ns.pair(r, H_F) > 0 and ns.pair(r, v) < 0


def test_precondition(ns, conf):
    with pytest.raises(PreconditionError):
        ns.is_nef(conf.classes[0])


def test_polarizations_at_degree_four(ns, orbits4):
    flags = [ns.is_polarization(o.representative) for o in orbits4]
    assert sum(flags) == 7
    assert flags == [bool(o.is_polarization) for o in orbits4]


def test_hp_is_nef(ns, hp):
    assert ns.is_nef(hp)[0]


def test_polarization_is_group_invariant(ns, orbits4, group, rng):
    for o in orbits4:
        T = group.matrix(int(rng.integers(len(group))))
        assert ns.is_polarization(o.representative @ T) == o.is_polarization


# --- Exc and Lin --------------------------------------------------------------------------------

def test_exc_and_lin_of_h_f(ns, conf):
    assert len(ns.exc_set(H_F)) == 0
    assert _rowset(ns.lin_set(H_F)) == _rowset(conf.classes)


def _stabilizer(rep, group):
    out = []
    for s in range(0, len(group), 50_000):
        M = group.matrices(s, s + 50_000)
        hit = np.nonzero(np.all(np.einsum("i,nij->nj", rep, M) == rep, axis=1))[0]
        out.extend(M[k] for k in hit)
    return out


def test_exc_of_a_six_a1_polarization(ns, orbits4, conf, group):
    o = next(o for o in orbits4 if o.rt == "6A1")
    h = o.representative
    exc = ns.exc_set(h)
    assert len(exc) == 6 and str(ade_type(exc, conf.gram)) == "6A1"
    for r in exc:
        assert ns.norm(r) == -2 and ns.pair(r, h) == 0 and ns.degree(r) > 0
    lin = ns.lin_set(h, exc)
    assert all(ns.pair(r, h) == 1 and ns.norm(r) == -2 for r in lin)
    stab = _stabilizer(h, group)
    assert len(stab) == o.stabilizer_order
    for T in stab:
        assert _rowset(exc @ T) == _rowset(exc)
        assert _rowset(lin @ T) == _rowset(lin)


def test_rt_rank_matches_exc_size(ns, orbits4, conf):
    for o in orbits4:
        if o.is_polarization:
            exc = ns.exc_set(o.representative)
            assert ade_type(exc, conf.gram).rank == len(exc)


def test_exc_and_lin_span_ns(pipeline):
    flags = pipeline.spans_flags(4)
    assert all(f for f in flags if f is not None)
    assert sum(f is not None for f in flags) == 7


# --- ADE types --------------------------------------------------------------------------------------

def _cartan(n, edges):
    G = -2 * np.eye(n, dtype=np.int64)
    for i, j in edges:
        G[i, j] = G[j, i] = 1
    return G


@pytest.mark.parametrize("n,edges,expected", [
    (0, [], "0"),
    (6, [], "6A1"),
    (3, [(0, 1), (1, 2)], "A3"),
    (4, [(0, 1), (0, 2), (0, 3)], "D4"),
    (6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)], "E6"),
    (8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)], "E8"),
    (5, [(0, 1), (2, 3), (3, 4)], "A2+A3"),
])
def test_ade_examples(n, edges, expected):
    if n == 0:
        assert str(ade_type(np.zeros((0, 1), dtype=np.int64), np.eye(1, dtype=np.int64))) == "0"
        return
    t = ade_type(np.eye(n, dtype=np.int64), _cartan(n, edges))
    assert str(t) == expected and t.rank == n
    assert ADEType.parse(expected) == t


def test_non_dynkin_graph_is_rejected():
    with pytest.raises(NotDynkinError):
        ade_type(np.eye(3, dtype=np.int64), _cartan(3, [(0, 1), (1, 2), (2, 0)]))


# --- orbits -------------------------------------------------------------------------------------------

def test_degree_four_orbits(orbits4, pipeline):
    assert len(orbits4) == 8
    assert sum(o.size for o in orbits4) == pipeline.count(4) == 1_020_600
    for o in orbits4:
        assert o.size * o.stabilizer_order == GROUP_ORDER
    assert 720 in [o.stabilizer_order for o in orbits4]
    assert next(o.size for o in orbits4 if o.stabilizer_order == 720) == 1050


def test_six_a1_orbits_have_stabilizers_3_and_12(orbits4):
    assert sorted(o.stabilizer_order for o in orbits4 if o.rt == "6A1") == [3, 12]


def test_stabilizers_by_direct_count(orbits4, group):
    for o in orbits4:
        assert stabilizer_order(o.representative, group) == o.stabilizer_order


def test_representatives_are_order_minimal(orbits4, group, rng):
    for o in orbits4:
        imgs = np.einsum("i,nij->nj", o.representative, group.matrices()[rng.integers(len(group), size=2000)])
        assert min(order_key(r) for r in imgs) >= order_key(o.representative)


def test_galois_partners(orbits4):
    partner = [o.galois_partner for o in orbits4]
    assert all(partner[p] == i for i, p in enumerate(partner))
    assert all(partner[i] == i for i, o in enumerate(orbits4) if o.is_polarization)


def test_low_degree_orbits(pipeline):
    (o2,) = pipeline.orbits(2)
    assert np.array_equal(o2.representative, H_F) and o2.galois_partner == 0
    (o3,) = pipeline.orbits(3)
    assert o3.size == 252 and o3.is_polarization is False


def test_orbit_escape(group, conf):
    with pytest.raises(OrbitEscapeError):
        orbit_decompose(conf.classes[:5], group.generator_matrices(), GROUP_ORDER)


# --- disk-backed decomposition ------------------------------------------------------------------------

def test_bucket_is_invariant(v4, group, gamma, conf, rng):
    P = conf.gram @ conf.classes.T
    V = v4[rng.integers(len(v4), size=500)]
    b = bucket_of(V, P, 97)
    for n in rng.integers(len(group), size=5):
        assert np.array_equal(bucket_of(V @ group.matrix(int(n)), P, 97), b)
    assert np.array_equal(bucket_of(V @ gamma, P, 97), b)


def test_spilled_decomposition_matches_memory(v4, group, gamma, conf, ns, orbits4, tmp_path):
    gens = group.generator_matrices()
    chunks = np.array_split(v4, 7)
    assert spill(chunks, conf.gram @ conf.classes.T, tmp_path, 8) == len(v4)
    disk = decompose_buckets(tmp_path, 22, gens, GROUP_ORDER, gamma, ns.degree)
    assert [o.rep_tuple() for o in disk] == [o.rep_tuple() for o in orbits4]
    assert [o.size for o in disk] == [o.size for o in orbits4]
    assert [o.galois_partner for o in disk] == [o.galois_partner for o in orbits4]
    # a second pass reads the per-bucket checkpoints
    again = decompose_buckets(tmp_path, 22, gens, GROUP_ORDER, gamma, ns.degree)
    assert [o.rep_tuple() for o in again] == [o.rep_tuple() for o in disk]


def test_in_memory_decomposition_matches_cache(v4, group, gamma, orbits4, ns):
    orbs, labels, index = orbit_decompose(v4, group.generator_matrices(), GROUP_ORDER, ns.degree)
    galois_partners(orbs, v4, labels, index, gamma)
    assert [(o.rep_tuple(), o.size, o.galois_partner) for o in orbs] == \
        [(o.rep_tuple(), o.size, o.galois_partner) for o in orbits4]
