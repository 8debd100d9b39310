from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3sextic.gf import field as F
from k3sextic.gf import vec as V
from k3sextic.gf.groebner import (INFINITE, buchberger, ideal_power_plus_F, normal_form_F,
                                  quotient_dimension, surface_equation)
from k3sextic.gf.linalg import det3, inverse, kernel, matmul, rank, solve, solve_linear_gf
from k3sextic.gf.poly import AFFINE, Poly, parse_poly

from props import check_gb_shuffle

elem = st.integers(0, 24)
nonzero = st.integers(1, 24)


# --- field -----------------------------------------------------------------------------

def _naive_mul(x, y):
    a, b = F.parts(x)
    c, d = F.parts(y)
    return F.gf(a * c + 2 * b * d, a * d + b * c)


def test_multiplication_matches_sqrt2_arithmetic():
    for x, y in product(range(25), repeat=2):
        assert F.mul(x, y) == _naive_mul(x, y)


def test_sqrt2_squared_is_two():
    r2 = F.gf(0, 1)
    assert F.mul(r2, r2) == F.gf(2)


@given(elem, elem, elem)
def test_field_axioms(x, y, z):
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.add(x, F.neg(x)) == 0
    assert F.sub(F.add(x, y), y) == x


@given(nonzero)
def test_inverse(x):
    assert F.mul(x, F.inv(x)) == F.ONE


@given(elem, elem)
def test_frobenius_is_an_involutive_automorphism(x, y):
    assert F.frob(F.mul(x, y)) == F.mul(F.frob(x), F.frob(y))
    assert F.frob(F.add(x, y)) == F.add(F.frob(x), F.frob(y))
    assert F.frob(F.frob(x)) == x
    assert F.frob(x) == F.power(x, 5)


def test_frobenius_fixes_exactly_gf5():
    assert [x for x in range(25) if F.frob(x) == x] == list(range(5))


def test_squares_and_sqrt():
    assert len(F.SQUARES) == 12
    for s in F.SQUARES:
        r = F.sqrt(s)
        assert F.mul(r, r) == s
    with pytest.raises(F.NonSquareError):
        F.sqrt(next(x for x in range(1, 25) if x not in F.SQUARES))


def test_gf5_elements_are_squares():
    assert all(F.is_square(x) for x in range(5))


@given(elem)
def test_string_round_trip(x):
    assert F.parse(F.to_str(x)) == x


def test_parse_variants():
    assert F.parse("sqrt(2)") == F.gf(0, 1)
    assert F.parse("(4+4*r2)") == F.gf(4, 4)
    assert F.parse("3√2") == F.gf(0, 3)


# --- batched arithmetic ---------------------------------------------------------------------

@given(st.lists(elem, min_size=1, max_size=30))
def test_gsum_matches_scalar_sum(xs):
    acc = 0
    for x in xs:
        acc = F.add(acc, x)
    assert int(V.gsum(np.array(xs))) == acc


@given(st.lists(elem, min_size=9, max_size=9), st.lists(elem, min_size=9, max_size=9))
def test_gmatmul_matches_matmul(a, b):
    A = np.array(a, dtype=np.uint8).reshape(3, 3)
    B = np.array(b, dtype=np.uint8).reshape(3, 3)
    assert np.array_equal(V.gmatmul(A[None], B[None])[0], matmul(A, B))
    assert int(V.gdet3(A[None])[0]) == det3(A)


@given(st.lists(elem, min_size=9, max_size=9))
def test_ginv3(a):
    A = np.array(a, dtype=np.uint8).reshape(3, 3)
    if det3(A) == 0:
        with pytest.raises(ZeroDivisionError):
            V.ginv3(A[None])
    else:
        assert np.array_equal(V.ginv3(A[None])[0], inverse(A))


def test_rank_table_orders_by_parts():
    order = sorted(range(25), key=lambda x: V.RANK[x])
    assert order == sorted(range(25), key=F.order_key)


# --- linear algebra -----------------------------------------------------------------------------

@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_kernel_and_rank(m, n, data):
    A = np.array(data.draw(st.lists(elem, min_size=m * n, max_size=m * n)), dtype=np.uint8).reshape(m, n)
    K = kernel(A)
    assert len(K) == n - rank(A)
    for row in K:
        assert not matmul(A, row.reshape(-1, 1)).any()


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_particular_solution(m, n, data):
    A = np.array(data.draw(st.lists(elem, min_size=m * n, max_size=m * n)), dtype=np.uint8).reshape(m, n)
    u = np.array(data.draw(st.lists(elem, min_size=n, max_size=n)), dtype=np.uint8)
    b = matmul(A, u.reshape(-1, 1))[:, 0]
    sol = solve_linear_gf(A, "particular", b)
    assert np.array_equal(matmul(A, sol.reshape(-1, 1))[:, 0], b)


def test_inconsistent_system():
    from k3sextic.gf.linalg import InconsistentSystem
    with pytest.raises(InconsistentSystem):
        solve(np.array([[1, 0], [1, 0]], dtype=np.uint8), np.array([0, 1], dtype=np.uint8))


# --- polynomials -------------------------------------------------------------------------------

exps = st.tuples(st.integers(0, 3), st.integers(0, 4), st.integers(0, 4))
polys = st.dictionaries(exps, nonzero, max_size=6).map(lambda t: Poly(t, AFFINE))


@given(polys)
def test_poly_text_round_trip(p):
    assert parse_poly(p.to_str()) == p


@given(polys, polys, polys)
def test_poly_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly({}, AFFINE)


@given(polys, st.tuples(elem, elem, elem))
def test_evaluation_is_a_homomorphism(p, pt):
    q = p * p + p
    assert q(*pt) == F.add(F.mul(p(*pt), p(*pt)), p(*pt))


# --- Groebner bases -------------------------------------------------------------------------------

Fpoly = surface_equation()


def test_normal_form_of_F_is_zero():
    assert normal_form_F(Fpoly).is_zero()


@given(polys)
def test_normal_form_is_idempotent_and_w_linear(p):
    r = normal_form_F(p)
    assert normal_form_F(r) == r
    assert all(e[0] <= 1 for e in r.terms)
    assert normal_form_F(p - r).is_zero()


@settings(max_examples=50)
@given(st.integers(0, 10**9))
def test_reduced_basis_is_unique_under_generator_shuffles(seed):
    assert check_gb_shuffle(seed)


def test_quotient_dimension_examples():
    x, y, w = (Poly.var(v) for v in ("x", "y", "w"))
    assert quotient_dimension(buchberger([x, y, w])) == 1
    assert quotient_dimension(buchberger([x ** 2, y ** 3, w])) == 6
    assert quotient_dimension(buchberger([x, y])) == INFINITE
    assert quotient_dimension(buchberger([Poly.const(F.ONE)])) == 0


def test_ideal_power_plus_F_of_a_line():
    # {y = a, w = x^3} with a^6 = -1 lies on the surface
    a = next(t for t in range(25) if F.power(t, 6) == F.neg(F.ONE))
    x, y, w = (Poly.var(v) for v in ("x", "y", "w"))
    L, G = y - Poly.const(a), w - x ** 3
    assert buchberger([L, G]).contains(Fpoly)
    gb = ideal_power_plus_F([L, G], 2)
    assert gb.contains(L * L) and gb.contains(L * G)
    assert not gb.contains(L)
    assert not gb.is_unit()


def test_small_field_examples():
    a = F.gf(1, 1)
    assert F.mul(a, F.gf(1, -1)) == F.gf(4)
    assert F.frob(a) == F.gf(1, 4)
    assert all(F.power(x, 24) == F.ONE for x in range(1, 25))
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_normal_form_examples():
    x, y, w = (Poly.var(v) for v in ("x", "y", "w"))
    one = Poly.const(F.ONE)
    assert normal_form_F(w ** 2) == x ** 6 + y ** 6 + one
    assert normal_form_F(w ** 3) == w * (x ** 6 + y ** 6 + one)
    g = w * x + y ** 2
    assert normal_form_F(g) == g


@given(polys, polys)
def test_normal_form_is_multiplicative(a, b):
    assert normal_form_F(a * b) == normal_form_F(normal_form_F(a) * normal_form_F(b))


def test_linear_solver_examples():
    assert len(kernel(np.eye(4, dtype=np.uint8))) == 0
    assert len(kernel(np.zeros((3, 3), dtype=np.uint8))) == 3
    A = np.random.default_rng(5).integers(0, 25, (6, 4)).astype(np.uint8)
    assert rank(A) == rank(A.T.copy())


def test_monomial_ideal_basis():
    x, y = Poly.var("x"), Poly.var("y")
    gb = buchberger([y, x])
    assert sorted(map(str, gb.basis)) == sorted(map(str, [x, y]))
