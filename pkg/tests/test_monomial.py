import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import skew_matrices
from tetracluster.errors import InadmissibleSign
from tetracluster.goldens import torus_monomial
from tetracluster.monomial import (SIGNS, compose_steps, parse_sign, sign_str, tau_inverse,
                                   tau_step)
from tetracluster.quivers import nine_vertex_quiver, nine_vertex_steps
from tetracluster.rhat import (monomial_te_check, tau_composite, tau_ijk_consistent,
                               tau_table_check)
from tetracluster.torus import TorusElement


@given(skew_matrices(), st.data())
def test_tau_step_is_a_morphism(B, data):
    k = data.draw(st.integers(1, B.n))
    eps = data.draw(st.sampled_from((1, -1)))
    assert tau_step(B, k, eps).is_morphism()


@given(skew_matrices(), st.data())
def test_tau_inverse_composes_to_identity(B, data):
    k = data.draw(st.integers(1, B.n))
    m = tau_step(B, k, data.draw(st.sampled_from((1, -1))))
    assert np.array_equal((m @ tau_inverse(m)).M, np.eye(B.n, dtype=np.int64))


@given(skew_matrices(), st.data())
def test_tau_maps_respect_products(B, data):
    k = data.draw(st.integers(1, B.n))
    m = tau_step(B, k, 1)
    a = TorusElement.generator(m.src, data.draw(st.integers(1, B.n)))
    b = TorusElement.generator(m.src, data.draw(st.integers(1, B.n)))
    assert m.apply(a * b) == m.apply(a) * m.apply(b)


def test_sign_round_trip():
    for s in SIGNS:
        assert parse_sign(sign_str(s)) == s
    assert parse_sign("--++") == (-1, -1, 1, 1)


def test_composite_inverse_examples():
    inv = tau_inverse(tau_composite("--++"))
    assert inv.image(2) == torus_monomial(inv.dst, "q Y2 Y8")
    inv = tau_inverse(tau_composite("+-+-"))
    assert inv.image(9) == torus_monomial(inv.dst, "Y4 Y5 Y9")


@pytest.mark.parametrize("sign", ["+-++", "+-+-", "--++", "--+-"])
def test_composites_match_tables(sign):
    assert tau_table_check(sign) == []


def test_composite_reaches_the_right_quiver():
    for s in SIGNS:
        m = tau_composite(s)
        assert m.src == nine_vertex_quiver("right").matrix
        assert m.is_morphism()


def test_dilogarithm_arguments_have_the_mutation_signs():
    B = nine_vertex_quiver("left").matrix
    _, _, args = compose_steps(B, nine_vertex_steps(), [1, -1, 1, -1])
    assert [e for _, e in args] == [1, -1, 1, -1]
    assert np.array_equal(args[0][0], np.eye(9, dtype=np.int64)[7])


def test_monomial_te_set():
    holds = {sign_str(s) for s in SIGNS if monomial_te_check(s)}
    assert holds == {"+-++", "+-+-", "--++", "--+-"}


@pytest.mark.parametrize("label,side", [("456", "left"), ("124", "right"), ("236", "left")])
def test_blocks_embed_the_nine_vertex_composite(label, side):
    assert tau_ijk_consistent(label, side, "--++")
