"""The infinite dimensional representation e^u|m> = |m-1>, e^w|m> = q^{2m}|m>
on windows of Z^n, the R-matrix in closed form and as an operator product,
and numerical checks of the tetrahedron equation.

Spectral parameters are integral: lambda_i = 2 hbar m_i, kappa_i = q^{2 m_i}.
Every argument of a q-Pochhammer symbol is then +-q^e with integral e, so
zeros and poles are detected exactly from the exponents.
"""
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .errors import BadConfig, NonConvergent, PochhammerPole, UnsupportedVariant, WindowTooSmall
from .goldens import load
from .scalar import eval_numeric

EPS = 1e-18


@dataclass(frozen=True)
class ModelParams:
    q0: complex = 1 / 3
    m: tuple = (1, 2, 0)
    trunc: int = 200
    tol: float = 1e-10

    def __post_init__(self):
        if not abs(self.q0) < 1:
            raise BadConfig("need |q0| < 1")
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if self.trunc <= 0 or self.tol <= 0:
            raise BadConfig("trunc and tol must be positive")

    def restrict(self, slots):
        return ModelParams(self.q0, tuple(self.m[s - 1] for s in slots), self.trunc, self.tol)

    def qp(self, e):
        return np.asarray(self.q0, dtype=complex) ** np.asarray(e)


# --- q-Pochhammer symbols at +-q^e ---------------------------------------------


@lru_cache(maxsize=None)
def qpoch_inf(s, e, q0):
    """(s q^e; q^2)_inf, exactly 0 when a factor is 1 - q^0."""
    if s == 1 and e <= 0 and e % 2 == 0:
        return 0j
    out = 1 + 0j
    t = e
    while True:
        x = q0 ** t
        if t > 0 and abs(x) < EPS:
            return out
        out *= 1 - s * x
        t += 2


@lru_cache(maxsize=None)
def inv_qpoch_fin(s, e, n, q0):
    """1 / (s q^e; q^2)_n with (z;q^2)_n = (z;q^2)_inf / (z q^{2n}; q^2)_inf."""
    if n >= 0:
        if s == 1 and e <= 0 and e % 2 == 0 and e + 2 * (n - 1) >= 0:
            raise PochhammerPole(f"(q^{e};q^2)_{n} vanishes")
        out = 1 + 0j
        for t in range(n):
            out /= 1 - s * q0 ** (e + 2 * t)
        return out
    out = 1 + 0j
    for t in range(1, -n + 1):
        out *= 1 - s * q0 ** (e - 2 * t)
    return out


def psi_scalar(s, e, eps, q0):
    """Psi_q(s q^e)^eps = (-s q^{e+1}; q^2)_inf^{-eps}."""
    d = qpoch_inf(-s, e + 1, q0)
    if eps > 0:
        if d == 0:
            raise PochhammerPole(f"Psi pole at {s}q^{e}")
        return 1 / d
    return d


def psi_numeric(x, eps, q0):
    """Psi_q(x)^eps for complex x by the product formula (entrywise)."""
    x = np.asarray(x, dtype=complex)
    out = np.ones_like(x)
    t = 1
    scale = np.max(np.abs(x)) if x.size else 0.0
    while abs(q0) ** t * scale > EPS or t == 1:
        out = out * (1 + q0 ** t * x)
        t += 2
    if eps > 0:
        if np.any(np.abs(out) < 1e-300):
            raise PochhammerPole("Psi pole")
        return 1 / out
    return out


# --- closed form ---------------------------------------------------------------


def r_closed_form(a, b, c, i, j, k, params):
    """<a,b,c| R(lambda_1, lambda_2, lambda_3) |i,j,k> with kappa_t = q^{2 m_t}."""
    if a + b != i + j:
        return 0j
    m1, m2, m3 = params.m
    q0 = params.q0
    r = m2 - m3
    n = b + r - k
    alpha = (c - k + r) * (c + k - r - 2 * b) + 2 * i * (c - k)
    num = qpoch_inf(-1, 2 * m3 + 2 * c - 2 * b + 1, q0) * qpoch_inf(1, 2 + 2 * j - 2 * c, q0)
    if num == 0:
        return 0j
    den = qpoch_inf(1, 2, q0) * qpoch_inf(-1, 2 * m2 + 2 * j - 2 * k + 1, q0)
    if den == 0:
        raise PochhammerPole("closed form denominator vanishes")
    return (q0 ** (2 * (m1 - m3) * n + alpha) * num / den
            * inv_qpoch_fin(1, 2 * m3 - 2 * m2 + 2 * k - 2 * b, n, q0))


def r_vec(A, B, C, I, J, K, m, q0):
    """Elementwise closed form over integer arrays (conservation is not imposed)."""
    m1, m2, m3 = m
    r = m2 - m3
    A, B, C, I, J, K = np.broadcast_arrays(*(np.asarray(x, dtype=np.int64) for x in (A, B, C, I, J, K)))
    out = np.zeros(A.shape, dtype=complex)
    n = B + r - K
    keep = (n >= 0) & (C <= J) & (A + B == I + J)
    if not keep.any():
        return out
    B, C, I, J, K, n = (x[keep] for x in (B, C, I, J, K, n))
    alpha = (C - K + r) * (C + K - r - 2 * B) + 2 * I * (C - K)

    def lookup(f, xs):
        u, inv = np.unique(xs, return_inverse=True)
        return np.array([f(int(x)) for x in u], dtype=complex)[inv]

    num = lookup(lambda e: qpoch_inf(-1, e, q0), 2 * m3 + 2 * C - 2 * B + 1)
    num = num * lookup(lambda e: qpoch_inf(1, e, q0), 2 + 2 * J - 2 * C)
    den = qpoch_inf(1, 2, q0) * lookup(lambda e: qpoch_inf(-1, e, q0), 2 * m2 + 2 * J - 2 * K + 1)
    fin = lookup(lambda t: inv_qpoch_fin(1, -2 * t, t, q0), n)
    with np.errstate(over="ignore", invalid="ignore"):
        out[keep] = np.asarray(q0, dtype=complex) ** (2 * (m1 - m3) * n + alpha) * num / den * fin
    return out


def r_column(ijk, m, q0, lo, hi):
    """{(a,b,c): R entry} for a fixed input with a, b, c in [lo, hi]."""
    i, j, k = ijk
    B, C = (x.ravel() for x in np.meshgrid(np.arange(lo, hi + 1), np.arange(lo, min(hi, j) + 1),
                                           indexing="ij"))
    A = i + j - B
    ok = (A >= lo) & (A <= hi)
    A, B, C = A[ok], B[ok], C[ok]
    vals = r_vec(A, B, C, i, j, k, m, q0)
    nz = vals != 0
    return {(int(a), int(b), int(c)): v for a, b, c, v in zip(A[nz], B[nz], C[nz], vals[nz])}


def r_row(abc, m, q0, lo, hi):
    """{(i,j,k): R entry} for a fixed output with i, j, k in [lo, hi]."""
    a, b, c = abc
    J, K = (x.ravel() for x in np.meshgrid(np.arange(max(lo, c), hi + 1), np.arange(lo, hi + 1),
                                           indexing="ij"))
    I = a + b - J
    ok = (I >= lo) & (I <= hi)
    I, J, K = I[ok], J[ok], K[ok]
    vals = r_vec(a, b, c, I, J, K, m, q0)
    nz = vals != 0
    return {(int(i), int(j), int(k)): v for i, j, k, v in zip(I[nz], J[nz], K[nz], vals[nz])}


# --- windows and operators ------------------------------------------------------


@dataclass(frozen=True)
class BasisWindow:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or any(a > b for a, b in zip(self.lo, self.hi)):
            raise BadConfig("window needs lo <= hi per slot")

    @classmethod
    def cube(cls, lo, hi, n=3):
        return cls((lo,) * n, (hi,) * n)

    @property
    def n(self):
        return len(self.lo)

    @property
    def shape(self):
        return tuple(h - l + 1 for l, h in zip(self.lo, self.hi))

    @property
    def size(self):
        return int(np.prod(self.shape))

    def states(self):
        grids = np.indices(self.shape).reshape(self.n, -1).T
        return grids + np.array(self.lo)

    def index(self, states):
        """Flat indices of states (rows of an array); -1 outside."""
        s = np.atleast_2d(states) - np.array(self.lo)
        inside = np.all((s >= 0) & (s < np.array(self.shape)), axis=1)
        out = np.full(len(s), -1, dtype=np.int64)
        if inside.any():
            out[inside] = np.ravel_multi_index(s[inside].T, self.shape)
        return out

    def contains(self, other):
        return all(a <= b for a, b in zip(self.lo, other.lo)) and all(
            a >= b for a, b in zip(self.hi, other.hi))


@dataclass
class OperatorWindow:
    """Sparse matrix on a window; ``leak`` is the discarded amplitude per input column."""

    window: BasisWindow
    mat: sp.csr_matrix
    leak: np.ndarray = field(default=None)

    def __post_init__(self):
        self.mat = sp.csr_matrix(self.mat, dtype=complex)
        if self.leak is None:
            self.leak = np.zeros(self.window.size)

    @property
    def offWindowMass(self):
        return float(self.leak.max()) if self.leak.size else 0.0

    @classmethod
    def identity(cls, window):
        return cls(window, sp.identity(window.size, dtype=complex, format="csr"))

    def __matmul__(self, other):
        leak = other.leak + np.abs(other.mat).T @ self.leak
        return OperatorWindow(self.window, self.mat @ other.mat, np.asarray(leak).ravel())

    def __add__(self, other):
        return OperatorWindow(self.window, self.mat + other.mat, self.leak + other.leak)

    def scale(self, c):
        return OperatorWindow(self.window, self.mat * c, self.leak * abs(c))

    def is_diagonal(self):
        coo = self.mat.tocoo()
        return bool(np.all(coo.row == coo.col))

    def entry(self, out, inp):
        r, c = self.window.index(np.array([out, inp]))
        if r < 0 or c < 0:
            return 0j
        return complex(self.mat[r, c])

    def block(self, small):
        """Dense submatrix on the states of a smaller window."""
        idx = self.window.index(small.states())
        if np.any(idx < 0):
            raise BadConfig("sub-window not contained")
        return self.mat[idx][:, idx].toarray()


def _monomial(window, a, exponent_of):
    """|x> -> q^{exponent_of(x)} |x - a> as (rows, cols, exponents, inside mask)."""
    X = window.states()
    cols = np.arange(window.size)
    rows = window.index(X - np.asarray(a))
    return rows, cols, exponent_of(X), rows >= 0


def weyl_operator(a, b, k, window, params, coeff=1):
    """coeff * e^{a.u + b.w + k.lambda} = coeff q^{-a.b} kappa^k e^{a.u} e^{b.w}."""
    a, b, k = (np.asarray(v, dtype=np.int64) for v in (a, b, k))
    e0 = -int(a @ b) + 2 * int(k @ np.asarray(params.m))
    rows, cols, ex, ok = _monomial(window, a, lambda X: e0 + 2 * X @ b)
    vals = coeff * params.qp(ex)
    mat = sp.csr_matrix((vals[ok], (rows[ok], cols[ok])), shape=(window.size,) * 2)
    leak = np.where(ok, 0.0, np.abs(vals))
    return OperatorWindow(window, mat, leak)


def form_operator(form, window, params, coeff=1):
    """e^{form} for an integral LinearForm (u, w and lambda coefficients)."""
    a, b, k = form.u_part(), form.w_part(), form.lam_part()
    return weyl_operator([int(x) for x in a], [int(x) for x in b], [int(x) for x in k],
                         window, params, coeff)


def gen_operator(kind, window, params):
    """One of 'u1', '-u1', 'w2', ... as a window operator."""
    sign = -1 if kind.startswith("-") else 1
    name = kind.lstrip("+-")
    slot = int(name[1:]) - 1
    z = np.zeros(window.n, dtype=np.int64)
    e = z.copy()
    e[slot] = sign
    if name[0] == "u":
        return weyl_operator(e, z, z, window, params)
    return weyl_operator(z, e, z, window, params)


def _psi_coeff(n, eps, q0):
    qf = np.prod([1 - q0 ** (2 * t) for t in range(1, n + 1)]) if n else 1.0
    if eps > 0:
        return (-q0) ** n / qf
    return q0 ** (n * n) / qf


def psi_operator(A, eps, trunc=200, tol=1e-10, q0=None):
    """Psi_q(A)^eps: product formula for diagonal A, otherwise the power series."""
    if q0 is None:
        raise BadConfig("q0 is required")
    if A.is_diagonal():
        d = A.mat.diagonal()
        vals = psi_numeric(d, eps, q0)
        return OperatorWindow(A.window, sp.diags(vals, format="csr"), np.abs(vals) * A.leak)
    out = OperatorWindow.identity(A.window)
    power = OperatorWindow.identity(A.window)
    last = 0.0
    for n in range(1, trunc + 1):
        power = A @ power
        if power.mat.nnz == 0:
            return out
        term = power.scale(_psi_coeff(n, eps, q0))
        out = out + term
        last = float(np.abs(term.mat).max())
        if last < tol * 1e-6:
            return out
    raise NonConvergent(f"last term norm {last:.3g} after {trunc} terms")


def psi_form(form, eps, window, params):
    """Psi_q(e^{form})^eps; exact exponent evaluation for w-only forms."""
    if any(form.u_part()):
        return psi_operator(form_operator(form, window, params), eps, params.trunc,
                            params.tol, params.q0)
    b = np.array([int(x) for x in form.w_part()])
    k = np.array([int(x) for x in form.lam_part()])
    e = 2 * window.states() @ b + 2 * int(k @ np.asarray(params.m))
    vals = np.array([psi_scalar(1, int(x), eps, params.q0) for x in e])
    return OperatorWindow(window, sp.diags(vals, format="csr"))


# --- the monomial operator P ------------------------------------------------------

P_VARIANTS = ("--++", "+-+-")


def p_state(x, slots, m, variant="--++"):
    """P_{ijk} |x> = q^e |y>; returns (y, e). m is indexed by slot number - 1."""
    if variant not in P_VARIANTS:
        raise UnsupportedVariant(f"{variant} has no monomial action in this basis")
    s1, s2, s3 = slots
    flip = variant == "+-+-"
    if flip:
        # transported representation: slots reversed and q -> 1/q
        s1, s3 = s3, s1
    i, j, k = x[s1 - 1], x[s2 - 1], x[s3 - 1]
    r = m[s2 - 1] - m[s3 - 1]
    b = k - r
    c = j
    a = i + j - b
    e = (b - c) * (b - c - 2 * i) - 2 * r * i
    y = list(x)
    y[s1 - 1], y[s2 - 1], y[s3 - 1] = a, b, c
    return tuple(y), (-e if flip else e)


def p_rep_action(params, window, slots=(1, 2, 3), variant="--++"):
    X = window.states()
    ys, es = zip(*(p_state(tuple(x), slots, params.m, variant) for x in X.tolist()))
    rows = window.index(np.array(ys))
    cols = np.arange(window.size)
    vals = params.qp(np.array(es))
    ok = rows >= 0
    mat = sp.csr_matrix((vals[ok], (rows[ok], cols[ok])), shape=(window.size,) * 2)
    return OperatorWindow(window, mat, np.where(ok, 0.0, np.abs(vals)))


# --- R as an operator product -----------------------------------------------------

ROUTES = ("RL1", "RL0", "----", "-+-+", "+-+-", "++--", "++++")


def route_spec(route):
    from .weyl import LinearForm

    data = load("weyl")["r_routes"]
    if route not in data:
        raise BadConfig(f"unknown route {route}")
    d = data[route]
    conv = lambda xs: [(LinearForm.parse(f), int(e)) for f, e in xs]
    return conv(d["before"]), d["P"], conv(d["after"])


def r_operator(params, window, route="RL1"):
    """R_123 = (dilogarithms) P (dilogarithms) along a route, on a 3-slot window."""
    before, variant, after = route_spec(route)
    if variant != "--++":
        raise UnsupportedVariant(f"P_{variant} is not monomial in this representation")
    out = OperatorWindow.identity(window)
    for f, e in before:
        out = out @ psi_form(f, e, window, params)
    out = out @ p_rep_action(params, window, (1, 2, 3), variant)
    for f, e in after:
        out = out @ psi_form(f, e, window, params)
    return out


def closed_form_block(params, small):
    states = small.states().tolist()
    M = np.zeros((len(states), len(states)), dtype=complex)
    for col, (i, j, k) in enumerate(states):
        for row, (a, b, c) in enumerate(states):
            if a + b == i + j:
                M[row, col] = r_closed_form(a, b, c, i, j, k, params)
    return M


@dataclass
class CrossCheck:
    deviation: float
    conservation: bool
    support: bool
    entries: int
    nonzero: int

    @property
    def passed(self):
        return self.conservation and self.support


def closed_form_cross_check(params=None, lo=-4, hi=4, route="RL1", margin=None):
    """Compare the closed form with the operator route on [lo, hi]^3."""
    params = params or ModelParams()
    small = BasisWindow.cube(lo, hi)
    if margin is None:
        r = abs(params.m[1] - params.m[2])
        margin = r + 2
    big = BasisWindow.cube(lo - margin, hi + margin)
    op = r_operator(params, big, route).block(small)
    cf = closed_form_block(params, small)
    scale = np.maximum(np.maximum(np.abs(op), np.abs(cf)), 1.0)
    dev = float(np.max(np.abs(op - cf) / scale))
    st = small.states()
    a_b = (st[:, 0] + st[:, 1])[:, None]
    i_j = (st[:, 0] + st[:, 1])[None, :]
    c_ = st[:, 2][:, None]
    j_ = st[:, 1][None, :]
    conservation = bool(np.all(cf[a_b != i_j] == 0) and np.all(np.abs(op[a_b != i_j]) == 0))
    support = bool(np.all(cf[np.broadcast_to(c_ > j_, cf.shape)] == 0))
    return CrossCheck(dev, conservation, support, cf.size, int(np.count_nonzero(cf)))


def route_ratio(params=None, lo=-3, hi=3, routes=("RL1", "RL0")):
    """Entrywise ratio statistics between two operator routes (spread, count)."""
    params = params or ModelParams()
    small = BasisWindow.cube(lo, hi)
    margin = abs(params.m[1] - params.m[2]) + 2
    big = BasisWindow.cube(lo - margin, hi + margin)
    A = r_operator(params, big, routes[0]).block(small)
    B = r_operator(params, big, routes[1]).block(small)
    mask = (np.abs(A) > 1e-12 * np.abs(A).max()) & (np.abs(B) > 0)
    ratio = B[mask] / A[mask]
    zero_ok = bool(np.all(np.abs(B[~mask]) <= 1e-9 * np.abs(B).max()))
    return float(np.max(np.abs(ratio - ratio[0]))) if ratio.size else 0.0, int(ratio.size), zero_ok


# --- tetrahedron equation on six slots --------------------------------------------

TE_LHS = ((4, 5, 6), (2, 3, 6), (1, 3, 5), (1, 2, 4))


class _RCache:
    def __init__(self, params, lo, hi):
        self.params, self.lo, self.hi = params, lo, hi
        self.cols, self.rows = {}, {}

    def m(self, slots):
        return tuple(self.params.m[s - 1] for s in slots)

    def col(self, slots, ijk):
        key = (slots, ijk)
        if key not in self.cols:
            self.cols[key] = r_column(ijk, self.m(slots), self.params.q0, self.lo, self.hi)
        return self.cols[key]

    def row(self, slots, abc):
        key = (slots, abc)
        if key not in self.rows:
            self.rows[key] = r_row(abc, self.m(slots), self.params.q0, self.lo, self.hi)
        return self.rows[key]

    def on_shell(self, y):
        return min(y) <= self.lo or max(y) >= self.hi


def _apply(cache, slots, vec, transpose=False):
    """Apply R_slots to {state: (amplitude, shell mass)}.

    The shell mass of a state is the absolute weight of the paths into it
    that pass through the boundary layer of the summation box.
    """
    out = {}
    idx = [s - 1 for s in slots]
    for x, (amp, shell) in vec.items():
        key = tuple(x[t] for t in idx)
        w = abs(amp) if cache.on_shell(x) else shell
        entries = cache.row(slots, key) if transpose else cache.col(slots, key)
        for y3, v in entries.items():
            y = list(x)
            for t, val in zip(idx, y3):
                y[t] = val
            y = tuple(y)
            a, s = out.get(y, (0j, 0.0))
            out[y] = (a + amp * v, s + abs(v) * w)
    return out


def _sandwich(cache, factors, inp, out):
    """<out| F_1 F_2 F_3 F_4 |inp> meeting in the middle; returns (value, scale, shell)."""
    f = {inp: (1 + 0j, 0.0)}
    for s in reversed(factors[2:]):
        f = _apply(cache, s, f)
    g = {out: (1 + 0j, 0.0)}
    for s in factors[:2]:
        g = _apply(cache, s, g, transpose=True)
    val, scale, shell = 0j, 0.0, 0.0
    for y, (a, sa) in f.items():
        hit = g.get(y)
        if hit is None:
            continue
        b, sb = hit
        val += a * b
        t = abs(a * b)
        scale += t
        shell += t if cache.on_shell(y) else sa * abs(b) + abs(a) * sb
    return val, scale, shell


@dataclass
class PairResult:
    inp: tuple
    out: tuple
    lhs: complex
    rhs: complex
    deviation: float
    mass: float
    ext: int

    @property
    def converged(self):
        return self.mass < 1e-8


@dataclass
class TetraReport:
    deviation: float
    offWindowMass: float
    pairs: list
    divergent: list
    tol: float
    required: int = 50

    @property
    def certified(self):
        return len(self.pairs)

    @property
    def passed(self):
        return (self.certified >= self.required and self.deviation < self.tol
                and self.offWindowMass < self.tol)


def sample_pairs(params, lo, hi, count, seed=0, ext=3):
    """In/out pairs in [lo, hi]^6 whose amplitude is not forced to vanish.

    The output is drawn from the support of R_456 R_236 R_135 R_124 |in>
    computed on a small box and restricted to the window.
    """
    rng = np.random.default_rng(seed)
    cache = _RCache(params, lo - ext, hi + ext)
    pairs = []
    while len(pairs) < count:
        inp = tuple(int(x) for x in rng.integers(lo, hi + 1, 6))
        v = {inp: (1 + 0j, 0.0)}
        for s in reversed(TE_LHS):
            v = _apply(cache, s, v)
        cand = sorted(y for y, (a, _) in v.items() if a != 0 and all(lo <= t <= hi for t in y))
        if cand:
            pairs.append((inp, cand[int(rng.integers(len(cand)))]))
    return pairs


TE_EXTS = (3, 6, 10, 15, 20)


def te_pair(params, inp, out, lo, hi, exts=TE_EXTS, tol=1e-8):
    """Evaluate both sides for one pair, widening the box until the shell mass is below tol.

    Stops early once the entry scale grows tenfold between boxes while the
    shell still carries most of the weight: the sum is not converging.
    """
    res, prev = None, None
    for ext in exts:
        cache = _RCache(params, lo - ext, hi + ext)
        with np.errstate(over="ignore", invalid="ignore"):
            lv, ls, lm = _sandwich(cache, TE_LHS, inp, out)
            rv, rs, rm = _sandwich(cache, tuple(reversed(TE_LHS)), inp, out)
            scale = max(ls, rs, 1e-300)
            res = PairResult(inp, out, lv, rv, abs(lv - rv) / scale, max(lm, rm) / scale, ext)
        if res.mass < tol:
            return res
        if not np.isfinite(res.mass):
            res.mass = np.inf
            return res
        if prev is not None and res.mass > 0.5 and scale > 10 * prev:
            return res
        prev = scale
    return res


def tetrahedron_check(params=None, lo=-3, hi=3, samples=50, tol=1e-8, seed=0,
                      exts=TE_EXTS, max_draws=None):
    """Both sides of R456 R236 R135 R124 = R124 R135 R236 R456 on sampled matrix entries.

    Pairs are drawn until ``samples`` of them have a resolved intermediate sum
    (boundary-shell mass below tol relative to the entry scale). Pairs whose
    sums keep growing with the box are returned separately as divergent.
    """
    params = params or ModelParams(1 / 3, (0, 1, 2, 1, 2, 2))
    if len(params.m) != 6:
        raise BadConfig("six spectral parameters are needed")
    max_draws = max_draws or 20 * samples
    rng_seed = seed
    good, bad = [], []
    draws = 0
    while len(good) < samples and draws < max_draws:
        batch = sample_pairs(params, lo, hi, samples, seed=rng_seed)
        rng_seed += 1
        for inp, out in batch:
            draws += 1
            r = te_pair(params, inp, out, lo, hi, exts, tol)
            (good if r.mass < tol else bad).append(r)
            if len(good) >= samples or draws >= max_draws:
                break
    dev = max((r.deviation for r in good), default=0.0)
    mass = max((r.mass for r in good), default=0.0)
    return TetraReport(dev, mass, good, bad, tol, samples)


def require_window(report):
    if report.offWindowMass >= report.tol:
        raise WindowTooSmall(f"offWindowMass {report.offWindowMass:.3g}")
    return report


# --- representation level of the P tetrahedron equation --------------------------


@dataclass
class PRepReport:
    vectors: int
    agree: int
    annihilated: int

    @property
    def passed(self):
        return self.agree == self.vectors


def p_word_state(x, word, m, variant):
    """Apply P_{w_last} first: returns (state, total q-exponent)."""
    e = 0
    for slots in reversed(word):
        x, d = p_state(x, slots, m, variant)
        e += d
    return x, e


def lemma41_rep_check(m=(0, 1, 2, 1, 2, 2), count=100, box=5, seed=0, variant="--++"):
    """Exact basis-state comparison of both sides of the P tetrahedron equation."""
    rng = np.random.default_rng(seed)
    agree = 0
    for _ in range(count):
        x = tuple(int(t) for t in rng.integers(-box, box + 1, 6))
        if p_word_state(x, TE_LHS, m, variant) == p_word_state(x, tuple(reversed(TE_LHS)), m, variant):
            agree += 1
    return PRepReport(count, agree, 0)


# --- conjugation action of R on phi images ---------------------------------------


def _node_matrix(node, side, window, params):
    """phi(node) as a sparse matrix; nested products are materialized."""
    from .factored import FactoredElement, Mono
    from .weyl import phi_torus_exponent

    if isinstance(node, Mono):
        c = eval_numeric(node.coeff, params.q0)
        return form_operator(phi_torus_exponent(side, node.alpha), window, params, c).mat
    if isinstance(node, FactoredElement):
        return factored_operator_apply(node, side, window, params,
                                       sp.identity(window.size, dtype=complex, format="csr"))
    out = None
    for t in node.terms:
        m = _node_matrix(t, side, window, params)
        out = m if out is None else out + m
    return out


# R maps |i,j,k> into the cone b >= k - r, c <= j (a + b fixed); inverses are
# expanded as series in the directions of that cone, which LEAD orders
LEAD = np.array([-1, 1, -1])


def _solve(N, M, window, max_iter, lead=None):
    """N^{-1} M, expanded around the term of N with the lowest LEAD degree."""
    N = sp.coo_matrix(N)
    states = window.states()
    deg = (states[N.row] - states[N.col]) @ (LEAD if lead is None else np.asarray(lead))
    low = deg == deg.min()
    shifts = np.unique(states[N.row[low]] - states[N.col[low]], axis=0)
    if len(shifts) != 1:
        raise NonConvergent("no single leading term for the inverse")
    if np.any(N.data[low] == 0):
        raise PochhammerPole("leading term of a factor vanishes")
    shape = N.shape
    Tinv = sp.csr_matrix((1 / N.data[low], (N.col[low], N.row[low])), shape=shape)
    S = sp.csr_matrix((N.data[~low], (N.row[~low], N.col[~low])), shape=shape)
    X = Tinv @ sp.csr_matrix(M)
    term = X
    for _ in range(max_iter):
        term = -(Tinv @ (S @ term))
        term.eliminate_zeros()
        if term.nnz == 0:
            return X
        X = X + term
    raise NonConvergent("inverse did not terminate on the window")


def factored_operator_apply(x, side, window, params, M):
    """phi(x) @ M for a FactoredElement x, factors applied right to left."""
    M = sp.csr_matrix(M)
    for node, power in reversed(x.factors):
        N = _node_matrix(node, side, window, params)
        if power == 1:
            M = N @ M
        elif power == -1:
            M = _solve(N, M, window, 4 * sum(window.shape))
        else:
            raise BadConfig("factor exponents must be +-1")
    return M * eval_numeric(x.prefactor, params.q0)


def _r_box(params, big, cols_window):
    """Sparse matrix of R with rows on ``big`` and columns on ``cols_window`` states of big."""
    lo, hi = big.lo[0], big.hi[0]
    rows, cols, vals = [], [], []
    idx_cols = big.index(cols_window.states())
    for col, ijk in zip(idx_cols, cols_window.states().tolist()):
        entries = r_column(tuple(ijk), params.m, params.q0, lo, hi)
        if not entries:
            continue
        ks = list(entries)
        rows.extend(big.index(np.array(ks)).tolist())
        cols.extend([col] * len(ks))
        vals.extend(entries.values())
    return sp.csr_matrix((vals, (rows, cols)), shape=(big.size, big.size), dtype=complex)


@dataclass
class ConjugationReport:
    sign: str
    generator: int
    deviation: float
    formal_match: bool
    tol: float

    @property
    def passed(self):
        return self.deviation < self.tol and self.formal_match


# Lambda_b = R-hat(Y'_g) Y_g^{-1}, so phi(Lambda_b)^{-1} R = phi(Y_g) R phi'(Y'_g)^{-1}
LAMBDA_SOURCE = {4: 1, 5: 6, 8: 7}


class ConjugationContext:
    """Shared R matrix for the conjugation checks on one window."""

    def __init__(self, params=None, lo=-4, hi=4, margin=6):
        self.params = params or ModelParams()
        self.small = BasisWindow.cube(lo, hi)
        self.big = BasisWindow.cube(lo - margin, hi + margin)
        self.inner = BasisWindow.cube(lo - 1, hi + 1)
        self.R = _r_box(self.params, self.big, self.inner)
        self.idx = self.big.index(self.small.states())

    def restrict(self, M):
        return sp.csr_matrix(M)[self.idx][:, self.idx].toarray()

    def _mono(self, side, alpha):
        from .weyl import phi_torus_exponent

        return form_operator(phi_torus_exponent(side, alpha), self.big, self.params).mat

    def _unit(self, i, sign=1):
        e = np.zeros(9, dtype=np.int64)
        e[i - 1] = sign
        return e

    def lhs(self, i):
        """R phi'(Y'_i)."""
        return self.R @ self._mono("right", self._unit(i))

    def lambda_inv_r(self, b):
        g = LAMBDA_SOURCE[b]
        return self._mono("left", self._unit(g)) @ self.R @ self._mono("right", self._unit(g, -1))

    def rhs(self, i):
        """phi(image of Y'_i) R, the trailing Lambda inverse taken through R."""
        from .factored import FactoredElement
        from .goldens import load
        from .rhat import ryy_image

        x = ryy_image(i)
        items = load("descriptors")["rhat"]["images"][i - 1]
        last = items[-1]
        if last[0] == "L" and len(last) > 2 and last[2] == -1:
            head = FactoredElement(x.B, x.factors[:-1], x.prefactor)
            return factored_operator_apply(head, "left", self.big, self.params,
                                           self.lambda_inv_r(last[1]))
        return factored_operator_apply(x, "left", self.big, self.params, self.R)


def _rel_dev(A, B):
    a, b = np.abs(A), np.abs(B)
    scale = max(a.max(), b.max(), 1e-300)
    return float(np.max(np.abs(A - B)) / scale)


def rhat_operator_check(sign, i, ctx=None, tol=1e-9):
    """R phi(Y'_i) against phi(image) R on the window.

    The image is the closed form in Lambda_4, Lambda_5, Lambda_8; the
    dilogarithm-built image of the sign is compared with it as a series.
    """
    from .monomial import parse_sign, sign_str
    from .rhat import rhat_apply, rhat_equal, ryy_image

    ctx = ctx or ConjugationContext()
    dev = _rel_dev(ctx.restrict(ctx.lhs(i)), ctx.restrict(ctx.rhs(i)))
    formal = rhat_equal(rhat_apply(sign, i), ryy_image(i))
    return ConjugationReport(sign_str(parse_sign(sign)), i, dev, bool(formal), tol)


def center_commutes(ctx=None, tol=1e-9):
    """phi(Y'_2 Y'_4 Y'_7) is kappa_1 kappa_2 times the identity and commutes with R."""
    from .factored import FactoredElement
    from .rhat import nine_matrices

    ctx = ctx or ConjugationContext()
    _, Bp = nine_matrices()
    alpha = np.zeros(9, dtype=np.int64)
    alpha[[1, 3, 6]] = 1
    x = FactoredElement.monomial(Bp, alpha)
    ident = sp.identity(ctx.big.size, format="csr")
    C = factored_operator_apply(x, "right", ctx.big, ctx.params, ident)
    k = ctx.params.q0 ** (2 * (ctx.params.m[0] + ctx.params.m[1]))
    D = ctx.restrict(C)
    scalar_ok = np.allclose(D, k * np.eye(D.shape[0]), rtol=0, atol=tol * abs(k))
    return scalar_ok and _rel_dev(ctx.restrict(ctx.R @ C), ctx.restrict(C @ ctx.R)) < tol


__all__ = [
    "ModelParams", "BasisWindow", "OperatorWindow", "qpoch_inf", "inv_qpoch_fin", "psi_scalar",
    "r_closed_form", "r_column", "r_row", "weyl_operator", "form_operator", "gen_operator",
    "psi_operator", "psi_form", "p_state", "p_rep_action", "r_operator", "route_spec",
    "closed_form_cross_check", "route_ratio", "tetrahedron_check", "sample_pairs", "te_pair",
    "r_vec", "PairResult", "TetraReport",
    "lemma41_rep_check", "rhat_operator_check", "ConjugationContext", "center_commutes",
    "require_window", "ROUTES", "P_VARIANTS", "itertools",
]
