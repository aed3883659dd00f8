"""Monomial maps tau_{k,eps} between quantum tori and their composites.

A ``MonomialMap`` sends the basis element Y'^beta of the source torus to
Y^{M beta} of the target torus. It is an algebra morphism exactly when
M^T B M = B'.
"""
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np
import sympy

from .cluster import Mutate, Transpose, mutate_matrix, transpose_indices
from .errors import NonInvertible
from .torus import TorusElement, basis_to_product

SIGNS = tuple(iproduct((1, -1), repeat=4))


def sign_str(sign):
    return "".join("+" if s > 0 else "-" for s in sign)


def parse_sign(text):
    if isinstance(text, (tuple, list)):
        return tuple(int(s) for s in text)
    out = tuple(1 if ch == "+" else -1 for ch in text.strip() if ch in "+-")
    if len(out) != 4:
        raise ValueError(f"bad sign tuple {text!r}")
    return out


@dataclass(frozen=True)
class MonomialMap:
    """Y'^beta (source, matrix ``src``) -> Y^{M beta} (target, matrix ``dst``)."""

    src: object
    dst: object
    M: np.ndarray

    def __post_init__(self):
        M = np.array(self.M, dtype=np.int64)
        M.setflags(write=False)
        object.__setattr__(self, "M", M)

    def exponent(self, i):
        return self.M[:, i - 1].copy()

    def image(self, i):
        return TorusElement.monomial(self.dst, self.exponent(i))

    def apply(self, x):
        """Image of a torus element of the source."""
        out = TorusElement(self.dst)
        for a, c in x.terms.items():
            out = out + TorusElement.monomial(self.dst, self.M @ np.array(a), c)
        return out

    def product_form(self, i):
        """(q-power, factors) of the image written as an ascending product."""
        return basis_to_product(self.dst, self.exponent(i))

    def is_morphism(self):
        return np.array_equal(self.M.T @ self.dst.b @ self.M, self.src.b)

    def __matmul__(self, other):
        """self o other (other acts first on its own source)."""
        if other.dst != self.src:
            raise ValueError("composition of incompatible maps")
        return MonomialMap(other.src, self.dst, self.M @ other.M)

    def __eq__(self, other):
        return (self.src == other.src and self.dst == other.dst
                and np.array_equal(self.M, other.M))

    def __hash__(self):
        return hash(self.M.tobytes())


def tau_step(B, k, eps):
    """tau_{k,eps}: Y(mu_k B) -> Y(B)."""
    B.check_vertex(k)
    n = B.n
    M = np.eye(n, dtype=np.int64)
    for i in range(n):
        if i == k - 1:
            M[i, i] = -1
        else:
            M[k - 1, i] = max(eps * int(B.b[i, k - 1]), 0)
    return MonomialMap(mutate_matrix(B, k), B, M)


def sigma_map(B, r, s):
    """Y^{(t+1)} with swapped labels -> Y^{(t)}: Y'_r -> Y_s, Y'_s -> Y_r."""
    n = B.n
    p = np.eye(n, dtype=np.int64)
    p[[r - 1, s - 1]] = p[[s - 1, r - 1]]
    return MonomialMap(transpose_indices(B, r, s), B, p)


def identity_map(B):
    return MonomialMap(B, B, np.eye(B.n, dtype=np.int64))


def compose_steps(B, steps, signs):
    """Composite monomial map Y(B^{(end)}) -> Y(B) along the steps.

    ``signs`` gives one sign per Mutate step, in order. Also returns the
    list of intermediate matrices and the dilogarithm arguments beta_t
    (exponents in Y(B) of (Y^{(t)}_{k_t})^{eps_t} pushed through the
    preceding monomial maps).
    """
    total = identity_map(B)
    cur = B
    mats = [B]
    args = []
    it = iter(signs)
    for st in steps:
        if isinstance(st, Mutate):
            eps = next(it)
            e = np.zeros(cur.n, dtype=np.int64)
            e[st.k - 1] = eps
            args.append((total.M @ e, eps))
            m = tau_step(cur, st.k, eps)
        else:
            m = sigma_map(cur, st.r, st.s)
        total = total @ m
        cur = m.src
        mats.append(cur)
    return total, mats, args


def tau_inverse(m):
    Mi = sympy.Matrix(m.M.tolist())
    if abs(Mi.det()) != 1:
        raise NonInvertible("exponent matrix is not unimodular")
    inv = np.array(Mi.inv().tolist(), dtype=np.int64)
    return MonomialMap(m.dst, m.src, inv)
