"""Truncated quantum dilogarithm series and the 16-fold dilogarithm identities.

Psi_q(Y) = sum_n (-qY)^n / (q^2;q^2)_n and Psi_q(Y)^{-1} = sum_n q^{n^2} Y^n / (q^2;q^2)_n.
"""
import itertools
from dataclasses import dataclass

import flint
import numpy as np
from scipy.optimize import linprog

from .cluster import ExchangeMatrix
from .errors import InadmissibleSign, NonConvergent
from .monomial import compose_steps, parse_sign, sign_str
from .scalar import PolyQ, ScalarQ, q, qfac
from .series import Series
from .torus import TorusElement

ADMISSIBLE = ("+-++", "+-+-", "--++", "--+-")
IDENTITY_SIGNS = ("+-+-", "--++")


def psi_coeff(n, eps):
    """Coefficient of Y^n in Psi_q(Y)^eps."""
    if eps > 0:
        return ScalarQ.qpow(n, (-1) ** n) / qfac(n)
    return q(n * n) / qfac(n)


def psi_expand(M, eps, N):
    """Psi_q(M)^eps truncated after the M^N term; M is a torus monomial."""
    alpha, c = M.monomial_data()
    out = TorusElement(M.B)
    power = TorusElement.one(M.B)
    for n in range(N + 1):
        out = out + power * psi_coeff(n, eps)
        power = power * M
    return out


def psi_series(B, beta, eps, g, prec, coeff=1):
    """Psi_q(coeff Y^beta)^eps as a graded Series, exact up to degree prec."""
    beta = np.asarray(beta, dtype=np.int64)
    d = int(np.asarray(g) @ beta)
    if d <= 0:
        raise NonConvergent("argument must have positive degree")
    M = Series(B, g, {tuple(beta): coeff})
    out = Series.one(B, g)
    power = Series.one(B, g)
    n = 0
    while (n + 1) * d <= prec:
        n += 1
        power = power.mul(M)
        out = out + power.scale(psi_coeff(n, eps))
    return out.truncate(prec)


def _rank2():
    return ExchangeMatrix([[0, 1], [-1, 0]])


def pentagon_check(N=12):
    """Psi(U)Psi(W) = Psi(W)Psi(q^{-1}UW)Psi(U) with UW = q^2 WU, up to total degree N."""
    B = _rank2()
    g = (1, 1)
    U, W, UW = (1, 0), (0, 1), (1, 1)
    lhs = psi_series(B, U, 1, g, N).mul(psi_series(B, W, 1, g, N), cap=N)
    rhs = psi_series(B, W, 1, g, N).mul(psi_series(B, UW, 1, g, N), cap=N)
    rhs = rhs.mul(psi_series(B, U, 1, g, N), cap=N)
    return lhs.agrees(rhs, upto=N) and min(lhs.prec, rhs.prec) >= N


def functional_check(N=20):
    """Psi(q^2 U) Psi(U)^{-1} = 1 + qU up to order N."""
    B = ExchangeMatrix([[0]])
    g = (1,)
    lhs = psi_series(B, (1,), 1, g, N, coeff=q(2)).mul(psi_series(B, (1,), -1, g, N), cap=N)
    rhs = Series(B, g, {(0,): 1, (1,): q(1)})
    return lhs.agrees(rhs, upto=N) and lhs.prec >= N


# --- Z lists ---------------------------------------------------------------

def _sixteen(B=None):
    from .quivers import sixteen_vertex_quiver, sixteen_vertex_steps

    if B is None:
        B = sixteen_vertex_quiver().matrix
    return B, sixteen_vertex_steps("left"), sixteen_vertex_steps("right")


def z_exponents(sign, B=None):
    """Exponent vectors and signs of Z_1..Z_16 and Z'_1..Z'_16."""
    sign = parse_sign(sign)
    if sign_str(sign) not in ADMISSIBLE:
        raise InadmissibleSign(f"{sign_str(sign)} is not among {ADMISSIBLE}")
    B, left, right = _sixteen(B)
    _, _, zl = compose_steps(B, left, list(sign) * 4)
    _, _, zr = compose_steps(B, right, list(sign) * 4)
    return B, zl, zr


def build_Z_lists(sign, B=None):
    """The monomials Z_i (left path) and Z'_i (right path) as torus elements."""
    B, zl, zr = z_exponents(sign, B)
    Z = [TorusElement.monomial(B, beta) for beta, _ in zl]
    Zp = [TorusElement.monomial(B, beta) for beta, _ in zr]
    return Z, Zp


# --- coefficient enumeration ----------------------------------------------

@dataclass(frozen=True)
class PneSystem:
    """p = A n for the exponents of the eight active variables."""

    variables: tuple
    A: np.ndarray

    @classmethod
    def from_betas(cls, betas, variables):
        idx = [v - 1 for v in variables]
        A = np.array([[int(b[i]) for b in betas] for i in idx], dtype=np.int64)
        return cls(tuple(variables), A)

    def n_bounds(self, P):
        """max n_t over {n >= 0, |A n| <= P}; None when unbounded."""
        m = self.A.shape[1]
        A_ub = np.vstack([self.A, -self.A])
        b_ub = np.full(2 * self.A.shape[0], P)
        out = []
        for t in range(m):
            c = np.zeros(m)
            c[t] = -1
            res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(0, None)] * m, method="highs")
            if res.status == 3:
                out.append(None)
            else:
                out.append(int(np.floor(-res.fun + 1e-9)))
        return out

    def solutions(self, p, bounds=None):
        """All n >= 0 with A n = p (requires finite bounds)."""
        p = np.asarray(p, dtype=np.int64)
        if bounds is None:
            bounds = self.n_bounds(int(np.max(np.abs(p))) if p.size else 0)
        if any(b is None for b in bounds):
            raise NonConvergent("solution set is not bounded")
        return [n for n in itertools.product(*(range(b + 1) for b in bounds))
                if np.array_equal(self.A @ np.array(n), p)]


def _active(zl, zr):
    support = set()
    for beta, _ in list(zl) + list(zr):
        support |= {i + 1 for i, x in enumerate(beta) if x}
    return tuple(sorted(support))


def _lp_add(x, y):
    """Sum of Laurent polynomials stored as (valuation offset, fmpz_poly)."""
    (v1, f1), (v2, f2) = x, y
    if v1 <= v2:
        return v1, f1 + f2.left_shift(v2 - v1)
    return v2, f2 + f1.left_shift(v1 - v2)


def _poly_scalar(f, v=0):
    return ScalarQ(PolyQ({i + v: int(c) for i, c in enumerate(f.coeffs()) if c}))


def _lp_equal(x, dx, y, dy):
    """x / dx == y / dy for Laurent numerators and polynomial denominators."""
    (v1, f1), (v2, f2) = x, y
    return _lp_add((v1, f1 * dy), (v2, -(f2 * dx)))[1].is_zero()


def coefficient_table(B, zs, variables, P, bounds):
    """Coefficients of Psi(Z_1)^e1 ... Psi(Z_16)^e4 on the box |p_i| <= P.

    Returns (numerators, denominator): each coefficient equals its Laurent
    numerator (valuation, fmpz_poly) divided by the polynomial
    prod_t (q^2;q^2)_{N_t}, N_t being the bound on n_t.

    Factors are multiplied in order. For a new exponent k, the products
    Y^{k - n beta} * Y^{n beta} all carry the same q-power per n, so the
    sum over n is a Horner recursion needing only shifts and additions.
    Partial exponents that cannot return to the box are pruned.
    """
    idx = [v - 1 for v in variables]
    b = B.b[np.ix_(idx, idx)]
    cols = np.array([[int(beta[i]) for i in idx] for beta, _ in zs], dtype=np.int64)
    m, d = cols.shape
    lo_rest = np.zeros((m + 1, d), dtype=np.int64)
    hi_rest = np.zeros((m + 1, d), dtype=np.int64)
    for t in range(m - 1, -1, -1):
        lo_rest[t] = lo_rest[t + 1] + np.minimum(cols[t], 0) * bounds[t]
        hi_rest[t] = hi_rest[t + 1] + np.maximum(cols[t], 0) * bounds[t]
    # states are encoded as integers in a mixed radix wide enough for every
    # coordinate that survives pruning
    span = int(P + max(np.abs(lo_rest).max(), np.abs(hi_rest).max()))
    radix = 2 * span + 1
    weights = radix ** np.arange(d, dtype=object)
    zero_code = int(sum(span * w for w in weights))

    def encode(rows):
        return (rows + span).astype(object) @ weights

    one = flint.fmpz_poly([1])
    state = {zero_code: (0, one)}
    keys = np.zeros((1, d), dtype=np.int64)
    for t, (_, eps) in enumerate(zs):
        beta = cols[t]
        bcode = int(np.dot(beta.astype(object), weights))
        N = bounds[t]
        cand = np.concatenate([keys + n * beta for n in range(N + 1)])
        ok = np.all(cand + lo_rest[t + 1] <= P, 1) & np.all(cand + hi_rest[t + 1] >= -P, 1)
        cand = np.unique(cand[ok], axis=0)
        cs = (cand @ b @ beta).tolist()
        codes = encode(cand).tolist()
        sgn = eps > 0
        nxt = {}
        keep = []
        get = state.get
        for row, (code, c) in enumerate(zip(codes, cs)):
            acc = None
            for n in range(N + 1):
                if acc is not None:
                    f = acc[1]
                    acc = (acc[0], f - f.left_shift(2 * n))
                fa = get(code - n * bcode)
                if fa is None:
                    continue
                sh = n * c + (n if sgn else n * n)
                term = (fa[0] + sh, -fa[1] if (sgn and n % 2) else fa[1])
                acc = term if acc is None else _lp_add(acc, term)
            if acc is not None and not acc[1].is_zero():
                nxt[code] = acc
                keep.append(row)
        state = nxt
        keys = cand[keep]
    decoded = {}
    for row, code in zip(keys.tolist(), encode(keys).tolist()):
        decoded[tuple(row)] = state[code]
    state = decoded
    den = flint.fmpz_poly([1])
    for N in bounds:
        for j in range(1, N + 1):
            den = den - den.left_shift(2 * j)
    out = {k: x for k, x in state.items() if max((abs(y) for y in k), default=0) <= P}
    return out, den


@dataclass
class IdentityResult:
    sign: str
    P: int
    finite: bool
    constant_left: object
    constant_right: object
    targets: int
    mismatches: list

    @property
    def passed(self):
        return (self.finite and not self.mismatches
                and self.constant_left == ScalarQ(1) and self.constant_right == ScalarQ(1))


def thm38_check(sign, P=3, B=None, strict=True):
    """Compare both sides of the 16-fold identity coefficientwise on |p_i| <= P."""
    s = sign_str(parse_sign(sign))
    if strict and s not in IDENTITY_SIGNS:
        raise InadmissibleSign(f"{s} is not covered; use strict=False for a report")
    B, zl, zr = z_exponents(s, B)
    variables = _active(zl, zr)
    left = PneSystem.from_betas([z for z, _ in zl], variables)
    right = PneSystem.from_betas([z for z, _ in zr], variables)
    bl, br = left.n_bounds(P), right.n_bounds(P)
    finite = all(x is not None for x in bl + br)
    if not finite:
        return IdentityResult(s, P, False, None, None, 0, [])
    cl, dl = coefficient_table(B, zl, variables, P, bl)
    cr, dr = coefficient_table(B, zr, variables, P, br)
    zero = (0, flint.fmpz_poly(0))
    keys = set(cl) | set(cr)
    bad = [k for k in sorted(keys) if not _lp_equal(cl.get(k, zero), dl, cr.get(k, zero), dr)]
    origin = tuple([0] * len(variables))

    def value(table, den):
        v, f = table.get(origin, zero)
        return _poly_scalar(f, v) / _poly_scalar(den)

    return IdentityResult(s, P, True, value(cl, dl), value(cr, dr), len(keys), bad)
