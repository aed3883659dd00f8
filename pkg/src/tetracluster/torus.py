"""Quantum torus T(B): Y^a Y^b = q^{a.Bb} Y^{a+b}.

Elements are stored in the Y^alpha basis, which needs no ordering
convention for generators.
"""
import numpy as np

from .errors import ShapeMismatch
from .scalar import ScalarQ, q


class SkewForm:
    """<a, b> = -a.B b."""

    def __init__(self, B):
        self.B = B

    def __call__(self, a, b):
        return -int(np.asarray(a) @ self.B.b @ np.asarray(b))


def _key(alpha):
    return tuple(int(x) for x in alpha)


class TorusElement:
    __slots__ = ("B", "terms")

    def __init__(self, B, terms=None):
        self.B = B
        self.terms = {}
        for a, c in (terms or {}).items():
            c = ScalarQ(c)
            if not c.is_zero():
                self.terms[_key(a)] = c

    @classmethod
    def monomial(cls, B, alpha, coeff=1):
        return cls(B, {_key(alpha): coeff})

    @classmethod
    def generator(cls, B, i, power=1):
        a = [0] * B.n
        a[i - 1] = power
        return cls.monomial(B, a)

    @classmethod
    def one(cls, B):
        return cls.monomial(B, [0] * B.n)

    @classmethod
    def scalar(cls, B, c):
        return cls.monomial(B, [0] * B.n, c)

    @classmethod
    def product(cls, B, factors, coeff=1):
        """coeff * Y_{i1}^{e1} Y_{i2}^{e2} ... in the written order."""
        out = cls.scalar(B, coeff)
        for i, e in factors:
            out = out * cls.generator(B, i, e)
        return out

    def _check(self, other):
        if self.B != other.B:
            raise ShapeMismatch("torus elements over different exchange matrices")

    def __add__(self, other):
        if not isinstance(other, TorusElement):
            other = TorusElement.scalar(self.B, other)
        self._check(other)
        t = dict(self.terms)
        for a, c in other.terms.items():
            s = t.get(a)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(a, None)
            else:
                t[a] = s
        out = TorusElement(self.B)
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = TorusElement(self.B)
        out.terms = {a: -c for a, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TorusElement):
            c = ScalarQ(other)
            out = TorusElement(self.B)
            out.terms = {a: x * c for a, x in self.terms.items() if not (x * c).is_zero()}
            return out
        self._check(other)
        b = self.B.b
        acc = {}
        for a1, c1 in self.terms.items():
            v1 = np.asarray(a1) @ b
            for a2, c2 in other.terms.items():
                e = int(v1 @ np.asarray(a2))
                k = tuple(x + y for x, y in zip(a1, a2))
                val = c1 * c2 * q(e)
                s = acc.get(k)
                acc[k] = val if s is None else s + val
        out = TorusElement(self.B)
        out.terms = {a: c for a, c in acc.items() if not c.is_zero()}
        return out

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible in the torus")
            return self.inverse() ** (-n)
        out = TorusElement.one(self.B)
        for _ in range(n):
            out = out * self
        return out

    def is_monomial(self):
        return len(self.terms) == 1

    def monomial_data(self):
        """(alpha, coeff) of a single-term element."""
        if not self.is_monomial():
            raise ValueError("not a monomial")
        (a, c), = self.terms.items()
        return np.array(a), c

    def inverse(self):
        a, c = self.monomial_data()
        return TorusElement.monomial(self.B, -a, c.inv())

    def __eq__(self, other):
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.B == other.B and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        parts = [f"{c}*Y^{list(a)}" for a, c in sorted(self.terms.items())]
        return "TorusElement(" + " + ".join(parts) + ")"


def torus_mul(a, b):
    return a * b


def torus_equal(a, b):
    if a.B != b.B:
        raise ShapeMismatch("different index sets")
    return a.terms == b.terms


def check_center(B, m):
    """Y^m is central iff B m = 0."""
    return not np.any(B.b @ np.asarray(m, dtype=np.int64))


def commutation_exponent(B, a, b):
    """c with Y^a Y^b = q^{2c} Y^b Y^a, namely c = a.B b."""
    return int(np.asarray(a) @ B.b @ np.asarray(b))


def product_to_basis(B, factors):
    """Exponent and q-power of an ordered product: prod Y_i^e = q^s Y^alpha."""
    alpha = np.zeros(B.n, dtype=np.int64)
    s = 0
    for i, e in factors:
        v = np.zeros(B.n, dtype=np.int64)
        v[i - 1] = e
        s += int(alpha @ B.b @ v)
        alpha = alpha + v
    return alpha, s


def basis_to_product(B, alpha):
    """q-power s with Y^alpha = q^s Y_1^{a_1} ... Y_n^{a_n} (ascending order)."""
    factors = [(i + 1, int(a)) for i, a in enumerate(alpha) if a]
    _, s = product_to_basis(B, factors)
    return -s, factors
