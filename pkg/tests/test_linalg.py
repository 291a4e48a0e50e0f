"""Exact linear algebra: frozen oracles and algebraic properties."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infrasolv.linalg import (Poly, RationalMatrix, char_poly, in_span,
                              intersect_kernels, kernel, min_poly, poly_ext_gcd,
                              poly_gcd, poly_lcm, rank, rref_basis, solve,
                              squarefree_part)

F = Fraction


def M(rows):
    return RationalMatrix(rows)


# ---------------------------------------------------------------- matrices

def test_rank_frozen_examples():
    assert rank(M([[1, 2], [2, 4]])) == 1
    assert rank(RationalMatrix.identity(3)) == 3
    assert rank(RationalMatrix.zero(2, 2)) == 0
    assert rank(M([["1/2", "1/3"], [3, 2]])) == 1


def test_solve_underdetermined_frozen():
    sol, ker = solve(M([[1, 1]]), [2])
    assert sol == (F(2), F(0))
    assert ker == [(F(-1), F(1))] or ker == [(F(1), F(-1))]
    # the reported kernel really is the kernel
    assert M([[1, 1]]).apply(ker[0]) == (F(0),)


def test_solve_inconsistent_reports_kernel():
    a = M([[1, 1], [1, 1]])
    sol, ker = solve(a, [0, 1])
    assert sol is None
    assert len(ker) == 1
    assert a.apply(ker[0]) == (F(0), F(0))


def test_solve_exact_fractions():
    a = M([["1/3", "1/7"], [0, "2/5"]])
    sol, ker = solve(a, ["1/2", "1/10"])
    assert ker == []
    assert a.apply(sol) == (F(1, 2), F(1, 10))


def test_inverse_and_det():
    a = M([[2, 1], [1, 1]])
    assert a * a.inverse() == RationalMatrix.identity(2)
    assert a.det() == F(1)
    assert M([[1, 2], [2, 4]]).det() == F(0)
    assert M([["1/2", 0], [0, 3]]).det() == F(3, 2)
    with pytest.raises(ValueError):
        M([[1, 2], [2, 4]]).inverse()


def test_kernel_dimension():
    a = M([[1, 2, 3], [2, 4, 6]])
    ker = kernel(a)
    assert len(ker) == 2
    for v in ker:
        assert a.apply(v) == (F(0), F(0))


def test_matrix_power_and_hash():
    a = M([[1, 1], [0, 1]])
    assert a ** 3 == M([[1, 3], [0, 1]])
    assert a ** 0 == RationalMatrix.identity(2)
    assert a ** -1 == M([[1, -1], [0, 1]])
    assert hash(a) == hash(M([[1, 1], [0, 1]]))


def test_span_helpers():
    vs = [(F(1), F(0)), (F(1), F(1))]
    assert in_span(vs, (F(3), F(2)))
    assert rref_basis(vs) == [(F(1), F(0)), (F(0), F(1))]
    a = M([[1, 0], [0, 0]])
    b = M([[0, 0], [0, 1]])
    assert intersect_kernels([a, b]) == []
    assert intersect_kernels([a]) == [(F(0), F(1))]


def test_json_round_trip():
    a = M([["-3/4", 2], [0, "5"]])
    assert RationalMatrix.from_json(a.to_json()) == a
    assert a.to_json() == [["-3/4", "2"], ["0", "5"]]


# ------------------------------------------------------------- polynomials

def test_min_poly_frozen_examples():
    p = min_poly(M([[2, 1], [0, 2]]))
    # (x-2)^2 = x^2 - 4x + 4
    assert p == Poly([4, -4, 1])
    assert min_poly(RationalMatrix.identity(3)) == Poly([-1, 1])
    assert min_poly(M([[1, 0], [0, 2]])) == Poly([2, -3, 1])


def test_min_poly_annihilates_and_is_minimal():
    m = M([[0, -1], [1, 0]])
    p = min_poly(m)
    assert p == Poly([1, 0, 1])  # x^2 + 1
    assert p.eval_matrix(m).is_zero()


def test_char_poly_frozen():
    m = M([[2, 1], [0, 2]])
    assert char_poly(m) == Poly([4, -4, 1])
    assert char_poly(M([[0, -1], [1, 0]])) == Poly([1, 0, 1])


def test_squarefree_part_frozen():
    # x^3 - x^2 -> x^2 - x
    assert squarefree_part(Poly([0, 0, -1, 1])) == Poly([0, -1, 1])
    assert squarefree_part(Poly([4, -4, 1])) == Poly([-2, 1])
    assert squarefree_part(Poly([0, 1])) == Poly([0, 1])
    with pytest.raises(ValueError):
        squarefree_part(Poly.zero())


def test_poly_gcd_lcm():
    a = Poly([-1, 1]) * Poly([-2, 1])
    b = Poly([-2, 1]) * Poly([-3, 1])
    assert poly_gcd(a, b) == Poly([-2, 1])
    assert poly_lcm(a, b) == (Poly([-1, 1]) * Poly([-2, 1]) * Poly([-3, 1])).monic()
    g, s, t = poly_ext_gcd(a, b)
    assert s * a + t * b == g


small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def square_matrices(draw, max_dim=4):
    n = draw(st.integers(min_value=1, max_value=max_dim))
    rows = draw(st.lists(st.lists(small_fracs, min_size=n, max_size=n),
                         min_size=n, max_size=n))
    return RationalMatrix(rows)


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_property_min_poly_annihilates(m):
    p = min_poly(m)
    assert p.eval_matrix(m).is_zero()
    assert p.coeffs[-1] == 1
    assert p.degree() <= m.rows


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_property_char_poly_annihilates(m):
    # Cayley-Hamilton, and min_poly divides char_poly
    cp = char_poly(m)
    assert cp.eval_matrix(m).is_zero()
    assert (cp % min_poly(m)).is_zero()


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_property_rank_nullity(m):
    assert rank(m) + len(kernel(m)) == m.cols


@settings(max_examples=40, deadline=None)
@given(square_matrices(), st.lists(small_fracs, min_size=1, max_size=4))
def test_property_solve_is_exact(m, b):
    b = (b * m.rows)[: m.rows]
    sol, ker = solve(m, b)
    if sol is not None:
        assert m.apply(sol) == tuple(b)
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_property_squarefree(m):
    q = squarefree_part(char_poly(m))
    assert poly_gcd(q, q.derivative()).degree() == 0
    # q has the same roots: q divides char_poly, and char_poly divides q^dim
    assert (char_poly(m) % q).is_zero()
    qn = Poly.one()
    for _ in range(m.rows):
        qn = qn * q
    assert (qn % char_poly(m)).is_zero()
