"""Truncated series in a quantum torus, graded by an integer weight vector.

A ``Series`` holds the terms of an element of the completion of T(B) with
respect to the grading deg(Y^a) = g.a. Every stored term of degree
<= ``prec`` is exact; nothing above ``prec`` is kept. Laurent polynomials
are exact series with ``prec = inf``.

Inversion divides out the unique lowest monomial and expands a geometric
series, so any element whose lowest term is unique can be inverted. With
a generic weight vector this embeds the skew field of fractions, and
agreement of two truncations is a sound refutation test for equality.
"""
import math

import numpy as np

from .errors import TetraError
from .scalar import ScalarQ, q

INF = math.inf


class GradingTie(TetraError):
    """Two distinct lowest monomials share a degree; pick another grading."""


class Series:
    __slots__ = ("B", "g", "terms", "prec")

    def __init__(self, B, g, terms=None, prec=INF):
        self.B = B
        self.g = np.asarray(g, dtype=np.int64)
        self.prec = prec
        self.terms = {}
        for a, c in (terms or {}).items():
            a = tuple(int(x) for x in a)
            c = ScalarQ(c)
            if not c.is_zero() and self.deg(a) <= prec:
                self.terms[a] = c

    @classmethod
    def _raw(cls, B, g, terms, prec):
        obj = cls.__new__(cls)
        obj.B, obj.g, obj.terms, obj.prec = B, g, terms, prec
        return obj

    @classmethod
    def from_torus(cls, x, g, prec=INF):
        return cls(x.B, g, x.terms, prec)

    @classmethod
    def one(cls, B, g):
        return cls(B, g, {(0,) * B.n: 1})

    def deg(self, a):
        return int(self.g @ np.asarray(a))

    def mindeg(self):
        if not self.terms:
            return self.prec
        return min(self.deg(a) for a in self.terms)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        t = {a: c for a, c in self.terms.items() if self.deg(a) <= prec}
        return Series._raw(self.B, self.g, t, prec)

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series(self.B, self.g, {(0,) * self.B.n: other})
        prec = min(self.prec, other.prec)
        t = {}
        for src in (self.terms, other.terms):
            for a, c in src.items():
                if self.deg(a) > prec:
                    continue
                s = t.get(a)
                s = c if s is None else s + c
                if s.is_zero():
                    t.pop(a, None)
                else:
                    t[a] = s
        return Series._raw(self.B, self.g, t, prec)

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(self.B, self.g, {a: -c for a, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = ScalarQ(c)
        if c.is_zero():
            return Series._raw(self.B, self.g, {}, self.prec)
        return Series._raw(self.B, self.g, {a: x * c for a, x in self.terms.items()}, self.prec)

    def mul(self, other, cap=INF):
        prec = min(self.prec + other.mindeg(), other.prec + self.mindeg(), cap)
        b = self.B.b
        g = self.g
        left = [(a, np.asarray(a), c, int(g @ np.asarray(a))) for a, c in self.terms.items()]
        right = [(a, np.asarray(a), c, int(g @ np.asarray(a))) for a, c in other.terms.items()]
        right.sort(key=lambda r: r[3])
        acc = {}
        for a1, v1, c1, d1 in left:
            row = v1 @ b
            for a2, v2, c2, d2 in right:
                if d1 + d2 > prec:
                    break
                k = tuple(int(x) for x in v1 + v2)
                val = c1 * c2 * q(int(row @ v2))
                s = acc.get(k)
                acc[k] = val if s is None else s + val
        t = {a: c for a, c in acc.items() if not c.is_zero()}
        return Series._raw(self.B, self.g, t, prec)

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        return self.scale(other)

    def lowest(self):
        """(exponent, coeff) of the unique lowest term."""
        if not self.terms:
            raise ZeroDivisionError("series is zero to the known precision")
        d = self.mindeg()
        low = [(a, c) for a, c in self.terms.items() if self.deg(a) == d]
        if len(low) > 1:
            raise GradingTie(f"{len(low)} lowest terms at degree {d}")
        if d >= self.prec:
            raise ZeroDivisionError("lowest term not determined")
        return low[0]

    def inverse(self, target):
        """Inverse correct up to degree ``target``.

        Writes x = m (1 + E) with m the lowest term, so that
        x^{-1} = (sum_n (-E)^n) m^{-1} with deg E > 0.
        """
        a, c = self.lowest()
        minv = Series(self.B, self.g, {tuple(-x for x in a): c.inv()})
        E = minv.mul(self - Series(self.B, self.g, {a: c}))
        T = target + self.deg(a)
        total = Series.one(self.B, self.g)
        power = total
        negE = -E
        while True:
            power = power.mul(negE, cap=T)
            if not power.terms:
                total = total.truncate(min(total.prec, power.prec))
                break
            total = total + power
        out = total.mul(minv)
        return out.truncate(min(out.prec, target))

    def agrees(self, other, upto=None):
        """Compare all terms up to the common precision (or ``upto``)."""
        p = min(self.prec, other.prec)
        if upto is not None:
            p = min(p, upto)
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            if self.deg(k) > p:
                continue
            if self.terms.get(k, ScalarQ(0)) != other.terms.get(k, ScalarQ(0)):
                return False
        return True

    def __repr__(self):
        return f"Series({len(self.terms)} terms, prec={self.prec})"
