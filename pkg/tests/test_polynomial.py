from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infrasolv.polynomial import MPoly, PolynomialMap


def test_mpoly_constant_and_variable():
    c = MPoly.constant(2, F(3, 4))
    assert c.is_constant() and c.constant_term() == F(3, 4)
    x0 = MPoly.variable(2, 0)
    assert x0.eval((F(5), F(7))) == F(5)
    assert x0.degree() == 1
    assert MPoly.zero(3).degree() == -1


def test_mpoly_arithmetic_exact():
    x = MPoly.variable(2, 0)
    y = MPoly.variable(2, 1)
    p = (x + y) * (x - y)
    q = x * x - y * y
    assert p == q
    assert p.eval((F(7, 3), F(2))) == F(49, 9) - F(4)
    assert (p - q).is_zero()
    # scalars mix in from either side, including strings
    assert ("1/2" * x + x * F(1, 2)) == x
    assert (x * 0).is_zero()


def test_mpoly_substitute_is_composition():
    x = MPoly.variable(1, 0)
    p = x * x + x + 1
    inner = MPoly.variable(2, 1) + MPoly.constant(2, F(2))
    composed = p.substitute([inner])
    for v in [F(0), F(1), F(-3, 2)]:
        assert composed.eval((F(99), v)) == p.eval((v + 2,))


def test_mpoly_linear_decomposition():
    x = MPoly.variable(2, 0)
    y = MPoly.variable(2, 1)
    p = x * y + 3 * x - 2 * y + F(5)
    const, lin, higher = p.linear_decomposition()
    assert const == F(5)
    assert lin == [F(3), F(-2)]
    assert higher == x * y


def test_mpoly_json_round_trip():
    x = MPoly.variable(2, 0)
    y = MPoly.variable(2, 1)
    p = x * y * y - F(7, 2) * x + 1
    assert MPoly.from_json(2, p.to_json()) == p
    assert MPoly.from_json(2, MPoly.zero(2).to_json()).is_zero()


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4),
                min_size=2, max_size=2))
@settings(max_examples=30, deadline=None)
def test_mpoly_eval_homomorphism(point):
    x = MPoly.variable(2, 0)
    y = MPoly.variable(2, 1)
    p = x * x - y + 2
    q = y * x + F(1, 3)
    pt = tuple(point)
    assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)
    assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)


def test_polynomial_map_identity_and_composition():
    ident = PolynomialMap.identity(2)
    assert ident.is_identity()
    x = MPoly.variable(2, 0)
    y = MPoly.variable(2, 1)
    f = PolynomialMap((x + 1, y))
    g = PolynomialMap((x, y * y))
    fg = f.after(g)            # apply g first
    assert fg.eval((F(2), F(3))) == f.eval(g.eval((F(2), F(3)))) == (F(3), F(9))
    assert f.after(ident) == ident.after(f) == f
    assert fg.degree() == 2


def test_polynomial_map_json_round_trip():
    x = MPoly.variable(3, 0)
    z = MPoly.variable(3, 2)
    f = PolynomialMap((x + z * z, MPoly.constant(3, F(-1, 2)), z))
    assert PolynomialMap.from_json(f.to_json()) == f


def test_polynomial_map_arity_mismatch():
    x = MPoly.variable(2, 0)
    f = PolynomialMap((x, x))
    with pytest.raises(ValueError):
        f.eval((F(1),))
