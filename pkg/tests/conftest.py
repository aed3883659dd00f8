import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tetracluster.cluster import ExchangeMatrix
from tetracluster.scalar import PolyQ, ScalarQ

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def laurent(draw, max_terms=4, span=5, coeff=6):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = draw(st.integers(-span, span))
        terms[e] = terms.get(e, 0) + draw(st.integers(-coeff, coeff))
    return PolyQ(terms)


@st.composite
def scalars(draw, nonzero=False):
    num = draw(laurent())
    den = draw(laurent(max_terms=3, span=3, coeff=3).filter(lambda p: not p.is_zero()))
    x = ScalarQ(num, den)
    if nonzero and x.is_zero():
        x = ScalarQ(1)
    return x


@st.composite
def skew_matrices(draw, n_min=2, n_max=5, entry=2):
    n = draw(st.integers(n_min, n_max))
    b = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.integers(-entry, entry))
            b[i, j], b[j, i] = v, -v
    return ExchangeMatrix(b)


def exponents(n, lo=-3, hi=3):
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
