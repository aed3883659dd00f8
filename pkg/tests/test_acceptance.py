"""Acceptance criteria, one test each, with their tolerances and time limits.

Each test prints a single PASS/FAIL line; the lines are repeated in the
pytest terminal summary. Run directly with ``python tests/test_acceptance.py``.
"""
import time

import pytest

from tetracluster.monomial import SIGNS, sign_str

RESULTS = {}


def report(n, title, ok, elapsed, limit, detail=""):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {n:2d} {status}  {title}: {detail} [{elapsed:.1f}s / limit {limit:.0f}s]"
    RESULTS[n] = line
    print(line)
    assert ok, line
    assert within, line


def test_criterion_01_monomial_te_set():
    from tetracluster.rhat import monomial_te_check

    t = time.perf_counter()
    holds = {sign_str(s) for s in SIGNS if monomial_te_check(s)}
    ok = holds == {"+-++", "+-+-", "--++", "--+-"}
    report(1, "monomial tetrahedron equation holds for exactly four sign tuples", ok,
           time.perf_counter() - t, 10, f"holds for {sorted(holds)}")


def test_criterion_02_inhomogeneous_te():
    from tetracluster.rhat import inhomogeneous_te_check

    t = time.perf_counter()
    ok = inhomogeneous_te_check()
    report(2, "mixed-sign monomial tetrahedron equation and golden images", ok,
           time.perf_counter() - t, 5, "16 generators")


def test_criterion_03_dilogarithm_identity():
    from tetracluster.dilog import IDENTITY_SIGNS, thm38_check

    t = time.perf_counter()
    parts, ok = [], True
    for s in IDENTITY_SIGNS:
        r = thm38_check(s, P=3)
        ok = ok and r.passed
        parts.append(f"{s}: {r.targets} targets, {len(r.mismatches)} mismatches, finite={r.finite}")
    report(3, "16-fold dilogarithm identities on |p_i| <= 3", ok,
           time.perf_counter() - t, 300, "; ".join(parts))


def test_criterion_04_pentagon_and_recursion():
    from tetracluster.dilog import functional_check, pentagon_check

    t = time.perf_counter()
    a, b = pentagon_check(12), functional_check(20)
    report(4, "pentagon to order 12 and recursion to order 20", a and b,
           time.perf_counter() - t, 30, f"pentagon={a} recursion={b}")


def test_criterion_05_p_table_and_search():
    from tetracluster.weyl import (TABLE_SIGNS, ad_p, p_element, search_xl_realization, tau_uw,
                                   tau_uw_golden)

    t = time.perf_counter()
    rows = all(ad_p(p_element(s)) == tau_uw(s) == tau_uw_golden(s) for s in TABLE_SIGNS)
    found = {sign_str(s) for s in SIGNS if search_xl_realization(s) is not None}
    ok = rows and found == set(TABLE_SIGNS)
    report(5, "Ad(P) equals the monomial map on all six rows; search finds exactly them", ok,
           time.perf_counter() - t, 120, f"rows={rows} found={sorted(found)}")


def test_criterion_06_p_tetrahedron():
    from tetracluster.rmatrix import P_VARIANTS, lemma41_rep_check
    from tetracluster.weyl import p_element, p_te_ad_check

    t = time.perf_counter()
    parts, ok = [], True
    for v in P_VARIANTS:
        adj = p_te_ad_check(p_element(v))
        rep = lemma41_rep_check(count=100, box=5, variant=v)
        ok = ok and adj and rep.passed
        parts.append(f"{v}: adjoint={adj} vectors {rep.agree}/{rep.vectors}")
    report(6, "tetrahedron equation for P, adjoint and on basis vectors", ok,
           time.perf_counter() - t, 60, "; ".join(parts))


def test_criterion_07_closed_form_cross_check():
    from tetracluster.rmatrix import ModelParams, closed_form_cross_check

    t = time.perf_counter()
    r = closed_form_cross_check(ModelParams(1 / 3, (1, 2, 0)), -4, 4)
    ok = r.deviation < 1e-10 and r.conservation and r.support
    report(7, "closed form against the operator product on [-4,4]^3", ok,
           time.perf_counter() - t, 120,
           f"deviation {r.deviation:.2e}, {r.nonzero}/{r.entries} nonzero entries")


@pytest.mark.slow
def test_criterion_08_tetrahedron_equation():
    from tetracluster.rmatrix import ModelParams, tetrahedron_check

    t = time.perf_counter()
    r = tetrahedron_check(ModelParams(1 / 3, (0, 1, 2, 1, 2, 2)), -3, 3, samples=50, tol=1e-8)
    report(8, "tetrahedron equation for R on sampled entries in [-3,3]^6", r.passed,
           time.perf_counter() - t, 1800,
           f"{r.certified} resolved pairs, deviation {r.deviation:.2e}, "
           f"offWindowMass {r.offWindowMass:.2e}, {len(r.divergent)} draws with divergent sums")


def test_criterion_09_conjugation():
    from tetracluster.rmatrix import (ConjugationContext, ModelParams, center_commutes,
                                      rhat_operator_check)

    t = time.perf_counter()
    ctx = ConjugationContext(ModelParams(1 / 3, (1, 2, 0)), -4, 4)
    worst, bad = 0.0, []
    for s in SIGNS:
        for i in range(1, 10):
            r = rhat_operator_check(s, i, ctx, tol=1e-9)
            worst = max(worst, r.deviation)
            if not r.passed:
                bad.append((sign_str(s), i))
    center = center_commutes(ctx, tol=1e-9)
    report(9, "conjugation by R against the cluster transformation, 16 x 9", not bad and center,
           time.perf_counter() - t, 600, f"worst deviation {worst:.2e}, failures {bad}, center={center}")


def test_criterion_10_tropical():
    from tetracluster.rhat import tropical_report

    t = time.perf_counter()
    r = tropical_report()
    report(10, "sign coherence, red mutations and final tropical seeds", r.passed,
           time.perf_counter() - t, 5, f"red {r.red}, final seeds equal={r.final_equal}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
