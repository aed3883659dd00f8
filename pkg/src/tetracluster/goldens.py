"""Loading of the shipped JSON fixtures and parsing of their compact notations.

Monomials are written as space separated tokens, e.g. ``"q^-1 Y2 Y8^-1"``,
read as an ordered product. Linear forms in the canonical variables use
``u1..u6``, ``w1..w6`` and ``l1..l6`` for the spectral parameters.
"""
import json
import re
from functools import lru_cache
from pathlib import Path

import sympy

from .errors import FixtureMissing

DATA_DIR = Path(__file__).parent / "data"
_TOKEN = re.compile(r"^(q|Y(\d+))(?:\^(-?\d+))?$")


@lru_cache(maxsize=None)
def load(name):
    try:
        text = (DATA_DIR / f"{name}.json").read_text()
    except FileNotFoundError as exc:
        raise FixtureMissing(f"fixture {name!r} not found") from exc
    return json.loads(text)


def parse_monomial(text):
    """'q^2 Y1 Y4^-1' -> (2, [(1, 1), (4, -1)])."""
    qpow, factors = 0, []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise ValueError(f"bad monomial token {tok!r} in {text!r}")
        e = int(m.group(3)) if m.group(3) else 1
        if m.group(1) == "q":
            qpow += e
        else:
            factors.append((int(m.group(2)), e))
    return qpow, factors


def parse_polynomial(text):
    """'1 + q^-1 Y4 + Y4 Y5' -> list of parsed monomials."""
    return [parse_monomial(t) for t in text.split("+")]


def torus_monomial(B, text):
    from .scalar import q
    from .torus import TorusElement

    qpow, factors = parse_monomial(text)
    return TorusElement.product(B, factors, q(qpow))


def torus_polynomial(B, text):
    from .torus import TorusElement

    out = TorusElement(B)
    for qpow, factors in parse_polynomial(text):
        out = out + torus_monomial(B, " ".join([f"q^{qpow}"] + [f"Y{i}^{e}" for i, e in factors]))
    return out


def weyl_symbols(n=6):
    u = sympy.symbols(f"u1:{n + 1}")
    w = sympy.symbols(f"w1:{n + 1}")
    lam = sympy.symbols(f"l1:{n + 1}")
    return u, w, lam


def parse_expr(text, n=6):
    u, w, lam = weyl_symbols(n)
    names = {s.name: s for s in (*u, *w, *lam)}
    return sympy.sympify(text, locals=names)
