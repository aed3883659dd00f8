import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import skew_matrices
from tetracluster.cluster import ExchangeMatrix
from tetracluster.dilog import (ADMISSIBLE, PneSystem, build_Z_lists, functional_check,
                                pentagon_check, psi_coeff, psi_series, thm38_check,
                                z_exponents)
from tetracluster.errors import InadmissibleSign, NonConvergent
from tetracluster.factored import FactoredElement, ad_psi, to_series
from tetracluster.scalar import ScalarQ, q
from tetracluster.series import Series


def test_pentagon():
    assert pentagon_check(8)


def test_recursion():
    assert functional_check(12)


def test_psi_times_inverse_is_one():
    B = ExchangeMatrix([[0]])
    a = psi_series(B, (1,), 1, (1,), 10)
    b = psi_series(B, (1,), -1, (1,), 10)
    assert a.mul(b, cap=10).agrees(Series.one(B, (1,)), upto=10)


def test_low_coefficients():
    assert psi_coeff(0, 1) == ScalarQ(1)
    assert psi_coeff(1, 1) == -q(1) / (ScalarQ(1) - q(2))
    assert psi_coeff(1, -1) == q(1) / (ScalarQ(1) - q(2))


def test_argument_needs_positive_degree():
    B = ExchangeMatrix([[0, 1], [-1, 0]])
    with pytest.raises(NonConvergent):
        psi_series(B, (1, -1), 1, (1, 1), 5)


@given(skew_matrices(n_max=3), st.data())
def test_conjugation_formula_against_series(B, data):
    """Psi(U)^e X Psi(U)^-e expanded as series equals the factored image."""
    n = B.n
    beta = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    if not beta.any():
        beta[0] = 1
    alpha = np.array(data.draw(st.lists(st.integers(-1, 1), min_size=n, max_size=n)))
    e = data.draw(st.sampled_from((1, -1)))
    g = np.full(n, 2) + np.arange(n)
    target = 8
    x = FactoredElement.monomial(B, alpha)
    lo = int(g @ alpha)
    P = psi_series(B, beta, e, g, target - lo)
    Pi = psi_series(B, beta, -e, g, target - lo)
    X = Series(B, g, {tuple(alpha): 1})
    lhs = P.mul(X, cap=target).mul(Pi, cap=target)
    rhs = to_series(ad_psi(B, beta, 1, e, x), g, target)
    assert lhs.agrees(rhs, upto=target)


def test_z_lists_have_sixteen_entries():
    for s in ADMISSIBLE:
        Z, Zp = build_Z_lists(s)
        assert len(Z) == len(Zp) == 16


def test_inadmissible_sign():
    with pytest.raises(InadmissibleSign):
        z_exponents("++++")
    with pytest.raises(InadmissibleSign):
        thm38_check("+-++")


def test_pne_solution_sets_are_finite():
    B, zl, zr = z_exponents("--++")
    for zs in (zl, zr):
        sysm = PneSystem.from_betas([z for z, _ in zs], range(1, 17))
        sysm = PneSystem.from_betas([z for z, _ in zs], [v for v in range(1, 17) if sysm.A[v - 1].any()])
        assert all(b is not None for b in sysm.n_bounds(2))


@pytest.mark.parametrize("sign", ["+-+-", "--++"])
def test_identity_in_a_small_box(sign):
    r = thm38_check(sign, P=1)
    assert r.finite and not r.mismatches
    assert r.constant_left == ScalarQ(1) and r.constant_right == ScalarQ(1)


def test_exploratory_tuples_are_reported():
    r = thm38_check("+-++", P=1, strict=False)
    assert r.sign == "+-++"
