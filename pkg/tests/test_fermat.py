import random

import numpy as np
import pytest

from k3sextic.fermat.geometry import (TangentCase, NotTangentError, classify_tangent, cross, fermat_value,
                                      frob625, hermitian_points, nonrational_fermat_points, normalize,
                                      plane_points, tangent_line, tangent_line625)
from k3sextic.fermat.group import (class_lookup, frobenius_permutation, lift_permutation,
                                   unitary_generators, unitary_scalar, verify_group)
from k3sextic.fermat.lines import (BASIS_TABLE, H_F, P0, RANK, class_of_line, parse_basis_row,
                                   split_line)
from k3sextic.gf import field as F
from k3sextic.gf.groebner import buchberger, quotient_dimension, surface_equation
from k3sextic.gf.poly import HOMOG
from k3sextic.cli.pipeline import EXAMPLE_CLASS, EXAMPLE_LINE

from props import check_line_pair

GROUP_ORDER = 756_000


# --- points and tangents ---------------------------------------------------------------------

def test_hermitian_points():
    pts = hermitian_points()
    assert len(pts) == 126
    assert P0 in pts
    assert all(fermat_value(p) == 0 for p in pts)
    assert len(plane_points()) == 25 ** 2 + 25 + 1


def test_tangent_at_rational_point_has_contact_six():
    case, residual = classify_tangent(tangent_line(P0), P0)
    assert case is TangentCase.MULT6_RATIONAL and residual == P0


def test_tangent_at_nonrational_point():
    for p in nonrational_fermat_points():
        case, residual = classify_tangent(tangent_line625(p), p)
        assert case is TangentCase.MULT5_NONRATIONAL
        q = frob625(p, 2)
        assert not any(c for c in (residual[1] * q[2] - residual[2] * q[1],
                                   residual[2] * q[0] - residual[0] * q[2],
                                   residual[0] * q[1] - residual[1] * q[0]))


def test_secant_is_rejected():
    tl = tangent_line(P0)
    other = next(q for q in hermitian_points()
                 if q != P0 and F.add(F.add(F.mul(tl[0], q[0]), F.mul(tl[1], q[1])), F.mul(tl[2], q[2])))
    with pytest.raises(NotTangentError):
        classify_tangent(cross(P0, other), P0)


# --- lines ----------------------------------------------------------------------------------------

def test_split_line_at_p0_matches_first_basis_row():
    a, b = split_line(P0)
    row = parse_basis_row(BASIS_TABLE[0])
    assert row.g in (a.g, b.g) and row.linear == a.linear == b.linear
    assert a.g == -b.g


def test_split_line_components_are_squares_of_the_branch_curve():
    for P in hermitian_points()[:20]:
        a, _ = split_line(P)
        lin = a.linear
        for q in plane_points():
            if F.add(F.add(F.mul(lin[0], q[0]), F.mul(lin[1], q[1])), F.mul(lin[2], q[2])) == 0:
                v = a.g(*q)
                assert F.mul(v, v) == fermat_value(q)


def test_line_count_and_structure(conf):
    assert len(conf.lines) == 252
    assert {ln.point for ln in conf.lines} == set(hermitian_points())
    assert [ln.index for ln in conf.lines] == list(range(1, 253))
    for i, row in enumerate(BASIS_TABLE):
        ln = parse_basis_row(row)
        assert conf.lines[i].key() == ln.key() and conf.lines[i].sign == row[0]


def test_lines_lie_on_the_surface(conf):
    Fh = surface_equation(HOMOG)
    for ln in random.Random(3).sample(conf.lines, 12):
        assert buchberger([g.dehomogenize(3, ("w", "x", "y")) for g in ln.generators()]).contains(
            Fh.dehomogenize(3, ("w", "x", "y")))


def test_sign_normalization(conf):
    ref = conf.index_of(P0, "+")
    assert conf.lines[ref].g.terms == {(3, 0, 0): F.ONE}
    for i, ln in enumerate(conf.lines):
        if ln.point == P0:
            continue
        assert conf.meet[i, ref] == (1 if ln.sign == "+" else 0)


def test_gram_matrix(conf):
    G = conf.gram
    assert round(np.linalg.det(G.astype(float))) == -25
    assert np.array_equal(G, G.T) and set(np.diag(G)) == {-2}
    assert G[0, 1] == 3
    assert np.array_equal(conf.classes[:RANK], np.eye(RANK, dtype=np.int64))
    assert H_F @ G @ H_F == 2


def test_example_class(conf):
    i = conf.index_of(*EXAMPLE_LINE)
    assert list(conf.classes[i]) == list(EXAMPLE_CLASS)
    assert np.array_equal(class_of_line(conf.lines[i], conf.basis, conf.gram), conf.classes[i])


def test_partner_classes_sum_to_h(conf):
    for i in range(len(conf.lines)):
        j = conf.partner(i)
        assert conf.partner(j) == i and j != i
        assert np.array_equal(conf.classes[i] + conf.classes[j], H_F)
        assert conf.meet[i, j] == 3


def test_classes_reproduce_all_intersections(conf):
    C = conf.classes
    assert np.array_equal(C @ conf.gram @ C.T, conf.meet)
    assert np.all(C @ conf.gram @ H_F == 1)


def test_scheme_lengths_on_random_pairs(conf):
    rnd = random.Random(11)
    pairs = [tuple(rnd.sample(range(252), 2)) for _ in range(12)]
    assert all(check_line_pair(conf, i, j) for i, j in pairs)


def test_scheme_length_of_a_split_pair():
    a, b = split_line(P0)
    gens = [g.dehomogenize(3, ("w", "x", "y")) for g in a.generators() + b.generators()]
    assert quotient_dimension(buchberger(gens + [surface_equation()])) == 3


# --- group ----------------------------------------------------------------------------------------

def test_unitary_generators():
    for T in unitary_generators():
        assert unitary_scalar(T) != 0
    with pytest.raises(ValueError):
        unitary_scalar(np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]], dtype=np.uint8))


def test_lift_permutation_rejects_wrong_sigma(conf):
    T = unitary_generators()[0]
    mu = unitary_scalar(T)
    bad = next(s for s in range(1, 25) if F.mul(s, s) != mu)
    with pytest.raises(ValueError):
        lift_permutation(T, conf, bad)


def test_group_order_and_isometries(group):
    assert len(group) == GROUP_ORDER
    verify_group(group)


def test_generators_act_compatibly_on_all_lines(group, conf):
    for perm, T in zip(group.generators, group.generator_matrices()):
        assert np.array_equal(conf.classes[perm], conf.classes @ T)
        assert np.array_equal(conf.meet[np.ix_(perm, perm)], conf.meet)


def test_deck_transformation_swaps_partners(group, conf):
    deck = group.generators[-1]
    assert deck[0] == 1 and deck[1] == 0
    T = conf.classes[deck[:RANK]]
    assert np.array_equal(conf.classes[0] @ T, conf.classes[1])


def test_random_elements_permute_line_classes(group, conf, rng):
    lookup = class_lookup(conf)
    for n in rng.integers(0, len(group), 25):
        T = group.matrix(int(n))
        images = conf.classes @ T
        idx = [lookup.get(tuple(int(v) for v in row)) for row in images]
        assert None not in idx and len(set(idx)) == 252
        assert np.array_equal(H_F @ T, H_F)


def test_frobenius(gamma, conf, group, rng):
    assert np.array_equal(gamma @ gamma, np.eye(RANK, dtype=np.int64))
    assert np.array_equal(gamma @ conf.gram @ gamma.T, conf.gram)
    assert np.array_equal(H_F @ gamma, H_F)
    perm = frobenius_permutation(conf)
    for i, ln in enumerate(conf.lines):
        rational = all(c < 5 for c in ln.point) and all(c < 5 for c in ln.g.terms.values())
        if rational:
            assert perm[i] == i
    index = group.key_index()
    for n in rng.integers(0, len(group), 25):
        assert group.contains_matrix(gamma @ group.matrix(int(n)) @ gamma, index)


def test_normalize():
    assert normalize((0, 2, 4)) == (0, 1, 2)
    with pytest.raises(ValueError):
        normalize((0, 0, 0))
