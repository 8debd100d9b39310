from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3sextic.fermat.lines import H_F, RANK
from k3sextic.gf import field as F
from k3sextic.gf import vec as V
from k3sextic.gf.linalg import det3, inverse, matmul
from k3sextic.gf.poly import PLANE, Poly, parse_poly
from k3sextic.models.divisor import express_divisor
from k3sextic.models.equivalence import (FERMAT, NoQuadrupleError, aut_order, canonical_sextic, f5_descent,
                                         hermitian_factor, hermitian_test, isom_sextics)
from k3sextic.models.involution import (BINARY, binary_divide, binary_gcd, check_involution, element_lift,
                                        ns_action_of_map, unitary_map_polys)
from k3sextic.models.model import ModelRecord, build_model, check_model
from k3sextic.models.sections import TractabilityError, section_space, vm_dimension
from k3sextic.models.sextic import (NotReducedError, SexticForm, UnclassifiedSingularity, local_type,
                                    singular_locus)

from props import low_degree_members

AUT = {"6A1": 12, "7A1": 6, "8A1": 8, "9A1": 9, "10A1": 20}


def _sextic(text):
    return SexticForm.from_poly(parse_poly(text, PLANE))


def _is_scalar(T):
    T = np.asarray(T)
    return not np.any(T - np.diag(np.diag(T))) and len(set(np.diag(T).tolist())) == 1


@pytest.fixture(scope="module")
def fermat_model(conf):
    return build_model(H_F, conf)


# --- divisors and sections ---------------------------------------------------------------------

def test_express_divisor_examples(conf):
    e = express_divisor(-conf.classes[0], conf)
    assert (e.d, e.terms) == (0, ((1, 1),))
    e = express_divisor(conf.classes[0], conf)
    assert (e.d, e.terms) == (1, ((conf.partner(0) + 1, 1),))
    e = express_divisor(H_F, conf)
    assert np.array_equal(e.vector(conf), H_F) and e.d == 1


def test_express_divisor_reproduces_vectors(pipeline, conf, rng):
    V4 = pipeline.vectors(4)
    for v in V4[rng.integers(len(V4), size=300)]:
        e = express_divisor(v, conf)
        assert np.array_equal(e.vector(conf), v)
        assert all(c > 0 for _, c in e.terms) and e.d >= 0


def test_vm_dimension():
    assert [vm_dimension(m) for m in range(1, 9)] == [2 + m * m for m in range(1, 9)]


def test_sections_of_h_f(conf):
    sb = section_space(H_F, conf)
    assert sb.dim == 3
    assert all(e[0] == 0 and sum(e) <= 1 for p in sb.polys for e in p.terms)


def test_tractability_guard(conf):
    with pytest.raises(TractabilityError):
        section_space(7 * H_F, conf, max_d=5)


# --- the models --------------------------------------------------------------------------------------

def test_fermat_model(fermat_model):
    rec = fermat_model
    assert rec.dims == (3, 11, 38)
    assert check_model(rec)
    assert rec.singular_points == [] and rec.rt == "0"
    ok, H, lam = hermitian_test(rec.sextic)
    assert ok
    assert canonical_sextic(rec.sextic).form == FERMAT


def test_models_satisfy_the_double_cover_relation(models4):
    for rec in models4.values():
        assert rec.dims == (3, 11, 38)
        assert check_model(rec)


def test_geometric_rt_matches_lattice_rt(models4, orbits4):
    for i, rec in models4.items():
        assert rec.rt == orbits4[i].rt
        assert len(rec.singular_points) == sum(k for _, k in rec.local_types) or rec.rt == "0"
    assert Counter(rec.rt for rec in models4.values()) == Counter(
        {"0": 1, "6A1": 2, "7A1": 1, "8A1": 1, "9A1": 1, "10A1": 1})


def test_canonical_classes(models4):
    forms = {i: rec.canonical for i, rec in models4.items()}
    assert len(set(f.coeffs for f in forms.values())) == 6
    six = [rec.canonical for rec in models4.values() if rec.rt == "6A1"]
    assert six[0] == six[1]
    smooth = next(rec for rec in models4.values() if rec.rt == "0")
    assert smooth.canonical == FERMAT


def test_aut_orders(models4, group):
    for rec in models4.values():
        expected = AUT.get(rec.rt, len(group) // 2)
        assert rec.aut_order == expected


def test_model_text_round_trip(models4):
    for rec in models4.values():
        again = ModelRecord.from_text(rec.to_text())
        assert again.to_text() == rec.to_text()


def test_canonical_is_constant_on_a_few_orbit_members(models4, orbits4, group, conf):
    i = next(i for i, r in models4.items() if r.rt == "7A1")
    for h in low_degree_members(orbits4[i].representative, group, conf, 3, 60, seed=1):
        rec = build_model(h, conf, verify_dims=False, classify=False)
        assert canonical_sextic(rec.sextic).form == models4[i].canonical


# --- equivalence ------------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def nodal(models4):
    rec = next(r for r in models4.values() if r.rt == "8A1")
    return rec.sextic, rec.singular_points


def test_canonical_is_idempotent(nodal):
    s, _ = nodal
    c = canonical_sextic(s).form
    assert canonical_sextic(c).form == c


def test_isom_contains_identity_and_is_base_independent(nodal):
    s, sing = nodal
    auts = isom_sextics(s, s, sing, sing)
    assert any(_is_scalar(a.T) for a in auts)
    for shift in (1, 3):
        rolled = sing[shift:] + sing[:shift]
        assert len(isom_sextics(s, s, rolled, rolled)) == len(auts) == aut_order(s, sing)


def test_isom_transports_along_a_projectivity(nodal, rng):
    s, sing = nodal
    while True:
        tau = rng.integers(0, 25, (3, 3)).astype(np.uint8)
        if det3(tau):
            break
    s2 = s.transform(tau)
    found = isom_sextics(s, s2)
    assert found
    assert any(_is_scalar(matmul(a.T, inverse(tau))) for a in found)
    assert canonical_sextic(s2).form == canonical_sextic(s).form


def test_no_quadruple_on_a_smooth_non_hermitian_curve():
    s = _sextic("x^6+y^6+z^6+x^4*y^2")
    if singular_locus(s):
        pytest.skip("curve happens to be singular")
    assert hermitian_test(s)[0] is False
    with pytest.raises(NoQuadrupleError):
        canonical_sextic(s)


def test_hermitian_test_examples():
    ok, H, lam = hermitian_test(FERMAT)
    assert ok and np.array_equal(H, np.eye(3, dtype=np.uint8)) and lam == F.ONE


def _hermitian_sextic(H, lam):
    terms = {}
    for i in range(3):
        for j in range(3):
            e = [0, 0, 0]
            e[i] += 1
            e[j] += 5
            terms[tuple(e)] = F.add(terms.get(tuple(e), 0), F.mul(F.mul(lam, lam), int(H[i, j])))
    return SexticForm.from_poly(Poly({e: c for e, c in terms.items() if c}, PLANE))


@settings(max_examples=40)
@given(st.lists(st.integers(0, 24), min_size=6, max_size=6), st.integers(1, 24))
def test_random_hermitian_forms(entries, lam):
    d0, d1, d2, a, b, c = entries
    H = np.zeros((3, 3), dtype=np.uint8)
    for k, d in enumerate((d0, d1, d2)):
        H[k, k] = d % 5  # Hermitian diagonal lies in GF(5)
    for (i, j), x in zip(((0, 1), (0, 2), (1, 2)), (a, b, c)):
        H[i, j], H[j, i] = x, F.frob(x)
    if det3(H) == 0:
        return
    M = hermitian_factor(H)
    assert np.array_equal(matmul(M, V.FROB[M].T), H)
    ok, H2, lam2 = hermitian_test(_hermitian_sextic(H, lam))
    assert ok
    assert F.mul(lam2, lam2) != 0
    assert np.array_equal(V.MUL[F.mul(lam2, lam2), H2], V.MUL[F.mul(lam, lam), H])


def test_f5_descent(models4):
    assert f5_descent(FERMAT).form == FERMAT
    for rec in models4.values():
        d = f5_descent(rec.sextic, rec.singular_points or None)
        if d is None:
            continue
        assert d.form.is_gf5()
        if rec.singular_points:
            assert canonical_sextic(d.form).form == rec.canonical


# --- local singularity types --------------------------------------------------------------------------

@pytest.mark.parametrize("text,expected", [
    ("x*y*z^4+x^6+y^6", ("A", 1)),
    ("y^2*z^4+x^3*z^3+x^6+y^6", ("A", 2)),
    ("y^2*z^4+x^4*z^2+x^6+y^6", ("A", 3)),
    ("x^3*z^3+y^3*z^3+x^6", ("D", 4)),
])
def test_local_type_examples(text, expected):
    s = _sextic(text)
    assert (0, 0, 1) in singular_locus(s)
    assert local_type(s, (0, 0, 1)) == expected


def test_local_type_refusals():
    with pytest.raises(UnclassifiedSingularity):
        local_type(_sextic("x^2*y^2*z^2+x^6+y^6"), (0, 0, 1))
    with pytest.raises(UnclassifiedSingularity):
        local_type(_sextic("x^2*y*z^3+y^4*z^2+x^6"), (0, 0, 1))
    with pytest.raises(NotReducedError):
        local_type(_sextic("y^2*z^4"), (0, 0, 1))


@settings(max_examples=40)
@given(st.lists(st.integers(0, 24), min_size=28, max_size=28),
       st.lists(st.integers(0, 24), min_size=9, max_size=9))
def test_pullback_matches_substitution(coeffs, entries):
    s = SexticForm(tuple(coeffs))
    A = np.array(entries, dtype=np.uint8).reshape(3, 3)
    x, y, z = (Poly.var(v, PLANE) for v in PLANE)
    images = [x.scale(int(A[0, k])) + y.scale(int(A[1, k])) + z.scale(int(A[2, k])) for k in range(3)]
    assert s.pullback(A) == SexticForm.from_poly(s.poly().subs(images))


# --- binary forms --------------------------------------------------------------------------------------

def test_binary_gcd():
    s, t = Poly.var("s", BINARY), Poly.var("t", BINARY)
    f1 = t * t * (s - t)
    f2 = t * (s * s - t * t)
    g, n = binary_gcd([(f1, 3), (f2, 3)])
    assert n == 2
    q = binary_divide(f1, 3, g, n)
    assert binary_gcd([(q, 1)])[1] == 1
    assert binary_gcd([(Poly({}, BINARY), 4)]) == ([], -1)
    # [0:1] as a common root: s divides both
    g, n = binary_gcd([(s * t, 2), (s * s, 2)])
    assert n == 1 and g == [1]


# --- action on NS and the involution ------------------------------------------------------------------

def test_identity_map_acts_trivially(conf):
    polys = [Poly.var("w"), Poly.var("x"), Poly.var("y"), Poly.const(F.ONE)]
    assert np.array_equal(ns_action_of_map(polys, conf), np.eye(RANK, dtype=np.int64))


def test_group_elements_act_by_their_matrices(group, conf, rng):
    for n in rng.integers(len(group), size=4):
        T, sigma = element_lift(group, int(n))
        G = ns_action_of_map(unitary_map_polys(T, sigma), conf)
        assert np.array_equal(G, group.matrix(int(n)))


def test_involution(pipeline, group, conf):
    G = pipeline.involution()
    checks = check_involution(G, group)
    assert checks == {"order2": True, "isometry": True, "pairing": 4, "outside_group": True}
    assert H_F @ G @ conf.gram @ H_F == 4
