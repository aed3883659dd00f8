"""Exact rational functions of q with integer coefficients.

A ``PolyQ`` is a Laurent polynomial in q. A ``ScalarQ`` is a reduced
fraction of two of them, kept in a canonical form so that equality is
structural. Polynomial gcd is delegated to FLINT.
"""
from fractions import Fraction
from numbers import Integral, Rational

import flint

from .errors import DivisionByZero, EvaluationPole, HalfPowerUnsupported

_X = flint.fmpz_poly([0, 1])


def _strip(p):
    """Split an fmpz_poly into (valuation, poly with nonzero constant term)."""
    if p == 0:
        return 0, flint.fmpz_poly(0)
    coeffs = p.coeffs()
    v = 0
    while coeffs[v] == 0:
        v += 1
    if v == 0:
        return 0, p
    return v, flint.fmpz_poly(coeffs[v:])


class PolyQ:
    """Laurent polynomial q^val * poly(q) with poly(0) != 0 (or zero)."""

    __slots__ = ("val", "poly")

    def __init__(self, coeffs=None, *, _raw=None):
        if _raw is not None:
            self.val, self.poly = _raw
            return
        coeffs = {} if coeffs is None else coeffs
        items = {int(e): int(c) for e, c in coeffs.items() if c != 0}
        if not items:
            self.val, self.poly = 0, flint.fmpz_poly(0)
            return
        lo = min(items)
        dense = [0] * (max(items) - lo + 1)
        for e, c in items.items():
            dense[e - lo] = c
        self.val, self.poly = lo, flint.fmpz_poly(dense)

    @classmethod
    def _from(cls, val, poly):
        v, p = _strip(poly)
        if p == 0:
            return cls(_raw=(0, p))
        return cls(_raw=(val + v, p))

    @classmethod
    def monomial(cls, e, c=1):
        return cls({e: c})

    @property
    def coefficients(self):
        return {self.val + i: int(c) for i, c in enumerate(self.poly.coeffs()) if c != 0}

    def is_zero(self):
        return self.poly == 0

    def degree(self):
        return self.val + self.poly.degree()

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.val, other.val)
        a = self.poly * _X ** (self.val - v)
        b = other.poly * _X ** (other.val - v)
        return PolyQ._from(v, a + b)

    def __neg__(self):
        return PolyQ(_raw=(self.val, -self.poly))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return PolyQ()
        return PolyQ(_raw=(self.val + other.val, self.poly * other.poly))

    def __eq__(self, other):
        return isinstance(other, PolyQ) and self.val == other.val and self.poly == other.poly

    def __hash__(self):
        return hash((self.val, tuple(int(c) for c in self.poly.coeffs())))

    def __call__(self, x):
        if self.is_zero():
            return 0 * x
        acc = 0
        for c in reversed(self.poly.coeffs()):
            acc = acc * x + int(c)
        return acc * x ** self.val

    def __repr__(self):
        return f"PolyQ({self.coefficients})"


class ScalarQ:
    """Element of Q(q) as num/den.

    Canonical form: den is a polynomial with nonzero constant term and
    positive leading coefficient; num and den share no common factor in
    Z[q]. All powers of q live in the numerator.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if isinstance(num, ScalarQ):
            self.num, self.den, self._hash = num.num, num.den, num._hash
            return
        if isinstance(num, Integral):
            num = PolyQ({0: int(num)})
        elif isinstance(num, Rational):
            num, den = PolyQ({0: num.numerator}), PolyQ({0: num.denominator})
        if den is None:
            self.num, self.den, self._hash = num, flint.fmpz_poly(1), None
            return
        if isinstance(den, Integral):
            den = PolyQ({0: int(den)})
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self._set(num.val - den.val, num.poly, den.poly)

    def _set(self, shift, n, d):
        self._hash = None
        if n == 0:
            self.num, self.den = PolyQ(), flint.fmpz_poly(1)
            return
        g = n.gcd(d)
        if g != 1:
            n = n // g
            d = d // g
        if d.leading_coefficient() < 0:
            n, d = -n, -d
        self.num = PolyQ._from(shift, n)
        self.den = d

    @classmethod
    def _make(cls, shift, n, d):
        obj = cls.__new__(cls)
        obj._set(shift, n, d)
        return obj

    @classmethod
    def qpow(cls, e, c=1):
        """c * q^e; e must be an integer."""
        if isinstance(e, Fraction) and e.denominator != 1:
            raise HalfPowerUnsupported(f"q^{e} is not an integer power")
        if not isinstance(e, Integral):
            if float(e) != int(e):
                raise HalfPowerUnsupported(f"q^{e} is not an integer power")
        return cls(PolyQ({int(e): c}))

    @classmethod
    def zero(cls):
        return cls(0)

    @classmethod
    def one(cls):
        return cls(1)

    @property
    def denominator(self):
        return PolyQ._from(0, self.den)

    @property
    def numerator(self):
        return self.num

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.den == 1 and self.num.val == 0 and self.num.poly == 1

    def _coerce(self, other):
        return other if isinstance(other, ScalarQ) else ScalarQ(other)

    def __add__(self, other):
        if not isinstance(other, (ScalarQ, Rational)):
            return NotImplemented
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.num.val, other.num.val)
        a = self.num.poly * _X ** (self.num.val - v)
        b = other.num.poly * _X ** (other.num.val - v)
        if self.den == other.den:
            return ScalarQ._make(v, a + b, self.den)
        return ScalarQ._make(v, a * other.den + b * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        obj = ScalarQ.__new__(ScalarQ)
        obj.num, obj.den, obj._hash = -self.num, self.den, None
        return obj

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (ScalarQ, Rational)):
            return NotImplemented
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return ScalarQ(0)
        shift = self.num.val + other.num.val
        if self.den == 1 and other.den == 1:
            obj = ScalarQ.__new__(ScalarQ)
            obj.num = PolyQ(_raw=(shift, self.num.poly * other.num.poly))
            obj.den, obj._hash = self.den, None
            if obj.num.poly.leading_coefficient() == 0:
                return ScalarQ(0)
            return obj
        return ScalarQ._make(shift, self.num.poly * other.num.poly, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return ScalarQ._make(-self.num.val, self.den, self.num.poly)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        out = ScalarQ(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, ScalarQ):
            try:
                other = ScalarQ(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, tuple(int(c) for c in self.den.coeffs())))
        return self._hash

    def subs_qpow(self, k):
        """Substitute q -> q^k (k a nonzero integer)."""
        def sub(p):
            out = PolyQ()
            for e, c in p.coefficients.items():
                out = out + PolyQ({e * k: c})
            return out
        return ScalarQ(sub(self.num), sub(self.denominator))

    def eval_numeric(self, q0):
        return eval_numeric(self, q0)

    def __repr__(self):
        if self.den == 1:
            return f"ScalarQ({_fmt(self.num)})"
        return f"ScalarQ(({_fmt(self.num)}) / ({_fmt(self.denominator)}))"


def _fmt(p):
    terms = []
    for e, c in sorted(p.coefficients.items()):
        terms.append(f"{c}*q^{e}" if e else str(c))
    return " + ".join(terms) if terms else "0"


def scalar_add(a, b):
    return ScalarQ(a) + ScalarQ(b)


def scalar_mul(a, b):
    return ScalarQ(a) * ScalarQ(b)


def scalar_inv(a):
    return ScalarQ(a).inv()


def q(e=1):
    return ScalarQ.qpow(e)


_QFAC = [ScalarQ(1)]


def qfac(n):
    """(q^2;q^2)_n = prod_{j=1}^n (1 - q^{2j})."""
    if n < 0:
        raise ValueError("qfac needs n >= 0")
    while len(_QFAC) <= n:
        j = len(_QFAC)
        _QFAC.append(_QFAC[-1] * ScalarQ(PolyQ({0: 1, 2 * j: -1})))
    return _QFAC[n]


def _pole_scale(p, q0):
    return sum(abs(c) * abs(q0) ** e for e, c in p.coefficients.items())


def eval_numeric(a, q0):
    """Evaluate a ScalarQ at a complex number in double precision."""
    a = ScalarQ(a)
    den = a.denominator
    if isinstance(q0, (Integral, Fraction)):
        exact = den(Fraction(q0))
        if exact == 0:
            raise EvaluationPole(f"pole at q={q0}")
        return complex(Fraction(a.num(Fraction(q0))) / exact)
    d = den(complex(q0))
    if abs(d) <= 1e-14 * _pole_scale(den, q0):
        raise EvaluationPole(f"pole at q={q0}")
    return complex(a.num(complex(q0))) / d
