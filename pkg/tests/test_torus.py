import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exponents, scalars, skew_matrices
from tetracluster.errors import ShapeMismatch
from tetracluster.scalar import ScalarQ, q
from tetracluster.torus import (TorusElement, basis_to_product, check_center,
                                commutation_exponent, product_to_basis)


def mono(B, a, c=1):
    return TorusElement.monomial(B, a, c)


@given(skew_matrices(), st.data())
def test_basis_commutation(B, data):
    a = data.draw(exponents(B.n))
    b = data.draw(exponents(B.n))
    c = commutation_exponent(B, a, b)
    assert mono(B, a) * mono(B, b) == mono(B, b) * mono(B, a) * q(2 * c)


@given(skew_matrices(), st.data())
def test_associativity(B, data):
    xs = []
    for _ in range(3):
        x = mono(B, data.draw(exponents(B.n)), data.draw(scalars()))
        xs.append(x + mono(B, data.draw(exponents(B.n))))
    a, b, c = xs
    assert (a * b) * c == a * (b * c)


@given(skew_matrices(), st.data())
def test_monomial_inverse(B, data):
    x = mono(B, data.draw(exponents(B.n)), q(3))
    assert x * x.inverse() == TorusElement.one(B)


@given(skew_matrices(), st.data())
def test_product_form_round_trip(B, data):
    alpha = np.array(data.draw(exponents(B.n)))
    s, factors = basis_to_product(B, alpha)
    beta, t = product_to_basis(B, factors)
    assert np.array_equal(alpha, beta) and s == -t
    assert TorusElement.product(B, factors, q(s)) == mono(B, alpha)


def test_basis_is_q_symmetric():
    from tetracluster.cluster import ExchangeMatrix

    B = ExchangeMatrix([[0, 1], [-1, 0]])
    y1, y2 = TorusElement.generator(B, 1), TorusElement.generator(B, 2)
    # Y^(1,1) = q^{-1} Y1 Y2
    assert mono(B, (1, 1)) == y1 * y2 * q(-1)
    assert y1 * y2 == y2 * y1 * q(2)


def test_center():
    from tetracluster.quivers import nine_vertex_quiver

    B = nine_vertex_quiver("left").matrix
    z = np.zeros(9, dtype=np.int64)
    z[[1, 3, 6]] = 1
    assert check_center(B, z)
    x = mono(B, z)
    for i in range(1, 10):
        y = TorusElement.generator(B, i)
        assert x * y == y * x


def test_mismatched_matrices():
    from tetracluster.cluster import ExchangeMatrix

    a = TorusElement.one(ExchangeMatrix([[0, 1], [-1, 0]]))
    b = TorusElement.one(ExchangeMatrix([[0, 2], [-2, 0]]))
    with pytest.raises(ShapeMismatch):
        a + b


def test_zero_coefficients_are_dropped():
    from tetracluster.cluster import ExchangeMatrix

    B = ExchangeMatrix([[0, 1], [-1, 0]])
    x = mono(B, (1, 0)) - mono(B, (1, 0))
    assert x.terms == {}
    assert ScalarQ(0) * mono(B, (1, 1)) == TorusElement(B)
