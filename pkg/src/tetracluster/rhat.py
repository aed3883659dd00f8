"""The cluster transformation R-hat of the 9-vertex quiver, its monomial
parts, and the monomial forms of the tetrahedron equation on 16 vertices.
"""
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cluster import Mutate, Transpose, TropicalSeed, matrices_along, run_sequence
from .factored import FactoredElement, Sum, Mono, ad_psi, apply_map, factored_equal
from .goldens import load, torus_monomial, torus_polynomial
from .monomial import SIGNS, compose_steps, parse_sign, sign_str, tau_inverse
from .quivers import (
    nine_vertex_quiver,
    nine_vertex_steps,
    sixteen_vertex_blocks,
    sixteen_vertex_quiver,
    sixteen_vertex_steps,
)
from .torus import TorusElement

# --- 9 vertices ------------------------------------------------------------


def nine_matrices():
    return nine_vertex_quiver("left").matrix, nine_vertex_quiver("right").matrix


@lru_cache(maxsize=None)
def _composite(sign):
    B, _ = nine_matrices()
    return compose_steps(B, nine_vertex_steps(), list(sign))


def tau_composite(sign):
    """tau_{8,e1} tau_{5,e2} tau_{4,e3} tau_{8,e4} sigma_{45}: Y(B') -> Y(B)."""
    total, _, _ = _composite(parse_sign(sign))
    return total


def tau_chain(sign):
    """The intermediate exchange matrices B^(1..6) and dilogarithm arguments."""
    _, mats, args = _composite(parse_sign(sign))
    return mats, args


def dilog_arguments(sign):
    """[(U_t as a torus monomial of Y(B), eps_t)] for the right-monomial form."""
    B, _ = nine_matrices()
    _, args = tau_chain(sign)
    return [(TorusElement.monomial(B, beta), eps) for beta, eps in args]


def _mono_of(x):
    alpha, c = x.monomial_data()
    return alpha, c


def rhat_apply_element(sign, x):
    """R-hat(x) for a FactoredElement x of the primed torus (right-monomial form)."""
    sign = parse_sign(sign)
    B, _ = nine_matrices()
    y = apply_map(tau_composite(sign), x)
    for beta, eps in reversed(_composite(sign)[2]):
        y = ad_psi(B, beta, 1, eps, y)
    return y


def rhat_apply(sign, i):
    """R-hat(Y'_i) as a FactoredElement of Y(B)."""
    _, Bp = nine_matrices()
    e = np.zeros(9, dtype=np.int64)
    e[i - 1] = 1
    return rhat_apply_element(sign, FactoredElement.monomial(Bp, e))


def rhat_center_form(sign, i):
    """R-hat(Y'_i) built from the center-monomial descriptors of the fixture."""
    key = sign_str(parse_sign(sign))
    data = load("descriptors")["center"][key]
    B, Bp = nine_matrices()
    e = np.zeros(9, dtype=np.int64)
    e[i - 1] = 1
    x = FactoredElement.monomial(Bp, e)
    for arg, exp in reversed(data["right"]):
        alpha, c = _mono_of(torus_monomial(Bp, arg))
        x = ad_psi(Bp, alpha, c, exp, x)
    x = apply_map(tau_composite(key), x)
    for arg, exp in reversed(data["left"]):
        alpha, c = _mono_of(torus_monomial(B, arg))
        x = ad_psi(B, alpha, c, exp, x)
    return x


def rhat_golden_right(sign, i):
    """R-hat(Y'_i) from the printed right-monomial descriptors (arguments and exponents)."""
    key = sign_str(parse_sign(sign))
    rows = load("descriptors")["right"][key]
    B, Bp = nine_matrices()
    e = np.zeros(9, dtype=np.int64)
    e[i - 1] = 1
    x = apply_map(tau_composite(key), FactoredElement.monomial(Bp, e))
    for arg, exp in reversed(rows):
        alpha, c = _mono_of(torus_monomial(B, arg))
        x = ad_psi(B, alpha, c, exp, x)
    return x


def _as_node(t):
    terms = tuple(Mono(a, c) for a, c in sorted(t.terms.items()))
    return terms[0] if len(terms) == 1 else Sum(terms)


def ryy_image(i):
    """The closed form of R-hat(Y'_i) in terms of Lambda_4, Lambda_5, Lambda_8."""
    data = load("descriptors")["rhat"]
    B, _ = nine_matrices()
    lam = {int(k): torus_polynomial(B, v) for k, v in data["lambda"].items()}
    factors = []
    for item in data["images"][i - 1]:
        if item[0] == "L":
            power = item[2] if len(item) > 2 else 1
            factors.append((_as_node(lam[item[1]]), power))
        else:
            factors.append((_as_node(torus_monomial(B, item[1])), 1))
    return FactoredElement(B, tuple(factors))


def default_grading(n=9, seed=7):
    rng = np.random.default_rng(seed)
    return rng.integers(1, 40, n) * rng.choice([-1, 1], n)


def rhat_equal(a, b, g=None, margin=60):
    """Series comparison of two FactoredElements from the lowest degree up."""
    from .factored import to_series

    if g is None:
        g = default_grading(a.B.n)
    base = to_series(b, g, margin).mindeg()
    return factored_equal(a, b, g, max(margin, base + margin))


def tau_table_check(sign):
    """Forward and inverse images of the composite against the golden table; mismatched labels."""
    key = sign_str(parse_sign(sign))
    gold = load("tau_tables")["composites"][key]
    fwd = tau_composite(key)
    inv = tau_inverse(fwd)
    bad = [("forward", i + 1) for i, t in enumerate(gold["forward"])
           if fwd.image(i + 1) != torus_monomial(fwd.dst, t)]
    bad += [("inverse", i + 1) for i, t in enumerate(gold["inverse"])
            if inv.image(i + 1) != torus_monomial(inv.dst, t)]
    return bad


def descriptor_argument_check(sign):
    """Compare the computed (U_t, eps_t) with the printed descriptors.

    Returns a list of (t, kind) mismatches where kind is 'argument' or 'exponent'.
    """
    key = sign_str(parse_sign(sign))
    rows = load("descriptors")["right"][key]
    B, _ = nine_matrices()
    out = []
    for t, ((U, eps), (arg, exp)) in enumerate(zip(dilog_arguments(key), rows), start=1):
        if U != torus_monomial(B, arg):
            out.append((t, "argument"))
        if eps != exp:
            out.append((t, "exponent"))
    return out


# --- 16 vertices -----------------------------------------------------------

BLOCK_SIZE = 5


def _blocks(side):
    steps = sixteen_vertex_steps(side)
    labels = sixteen_vertex_blocks(side)
    return [(labels[j], steps[BLOCK_SIZE * j:BLOCK_SIZE * (j + 1)]) for j in range(len(labels))]


@lru_cache(maxsize=None)
def _path_matrices(side):
    return matrices_along(sixteen_vertex_quiver().matrix, sixteen_vertex_steps(side))


def tau_ijk(label, side, sign):
    """Composite monomial map of one block, Y(B^(t+5)) -> Y(B^(t))."""
    sign = parse_sign(sign)
    for j, (lab, steps) in enumerate(_blocks(side)):
        if lab == str(label):
            B = _path_matrices(side)[BLOCK_SIZE * j]
            total, _, _ = compose_steps(B, steps, list(sign))
            return total
    raise KeyError(f"no block {label} on the {side} path")


def path_composite(side, signs):
    """Composite along a whole path; ``signs`` gives one 4-tuple per block."""
    flat = [s for blk in signs for s in parse_sign(blk)]
    B = sixteen_vertex_quiver().matrix
    return compose_steps(B, sixteen_vertex_steps(side), flat)


def monomial_te_check(sign):
    """Both 4-fold composites with the same sign tuple coincide."""
    sign = parse_sign(sign)
    a, ma, _ = path_composite("left", [sign] * 4)
    b, mb, _ = path_composite("right", [sign] * 4)
    return ma[-1] == mb[-1] and np.array_equal(a.M, b.M)


def ihte_signs(side):
    return [parse_sign(s) for s in load("sixteen")[side]["ihte_signs"]]


def inhomogeneous_te_check():
    """The two sign-inhomogeneous composites agree and match the golden image table."""
    a, ma, _ = path_composite("left", ihte_signs("left"))
    b, mb, _ = path_composite("right", ihte_signs("right"))
    B = sixteen_vertex_quiver().matrix
    gold = load("sixteen")["y21"]
    table_ok = all(a.image(i + 1) == torus_monomial(B, g) for i, g in enumerate(gold))
    return ma[-1] == mb[-1] and np.array_equal(a.M, b.M) and table_ok


@dataclass(frozen=True)
class Embedding:
    """Vertex i of the 9-vertex quiver sits at vertex image[i-1] of the 16-vertex one."""

    image: tuple

    def __call__(self, i):
        return self.image[i - 1]

    def push(self, beta, n=16):
        out = np.zeros(n, dtype=np.int64)
        for i, x in enumerate(beta):
            out[self.image[i] - 1] += x
        return out


def block_embedding(label, side):
    """Find the embedding of the 9-vertex pattern carried by a block.

    The three mutated vertices are matched to 8, 5, 4 in order; the other
    six vertices are searched among their neighbours so that every entry
    of the exchange matrix touching 4, 5 or 8 agrees.
    """
    for j, (lab, steps) in enumerate(_blocks(side)):
        if lab == str(label):
            break
    else:
        raise KeyError(label)
    B16 = _path_matrices(side)[BLOCK_SIZE * j]
    B9, _ = nine_matrices()
    ks = [st.k for st in steps if isinstance(st, Mutate)]
    fixed = {8: ks[0], 5: ks[1], 4: ks[2]}
    core = set(fixed.values())
    nbrs = sorted({int(v) + 1 for k in core for v in np.nonzero(B16.b[k - 1])[0]} - core)
    free = [i for i in range(1, 10) if i not in fixed]
    for choice in itertools.permutations(nbrs, len(free)):
        img = dict(fixed)
        img.update(zip(free, choice))
        if all(B16[img[i], img[k]] == B9[i, k] for k in fixed for i in range(1, 10)):
            return Embedding(tuple(img[i] for i in range(1, 10)))
    return None


def tau_ijk_consistent(label, side, sign):
    """tau_ijk restricted to the embedded 9 vertices equals tau_composite."""
    emb = block_embedding(label, side)
    if emb is None:
        return False
    big = tau_ijk(label, side, sign)
    small = tau_composite(sign)
    for i in range(1, 10):
        if not np.array_equal(big.exponent(emb(i)), emb.push(small.exponent(i))):
            return False
    inside = set(emb.image)
    for v in range(1, 17):
        if v not in inside:
            e = np.zeros(16, dtype=np.int64)
            e[v - 1] = 1
            if not np.array_equal(big.exponent(v), e):
                return False
    return True


# --- tropical data ---------------------------------------------------------

def tropical_trace(side):
    """Tropical signs along a 16-vertex path and the final seed."""
    seed = TropicalSeed.initial(sixteen_vertex_quiver().matrix)
    traj, signs = run_sequence(seed, sixteen_vertex_steps(side))
    return traj, signs


def red_mutations(side):
    _, signs = tropical_trace(side)
    return [t + 1 for t, s in enumerate(signs) if s < 0]


def _coherent(seed):
    c = seed.cvecs
    return all(np.all(c[:, j] >= 0) or np.all(c[:, j] <= 0) for j in range(c.shape[1]))


@dataclass
class TropicalReport:
    coherent: dict
    red: dict
    red_expected: dict
    final_equal: bool

    @property
    def passed(self):
        return all(self.coherent.values()) and self.red == self.red_expected and self.final_equal


def tropical_report():
    """Sign coherence along the 9- and 16-vertex sequences, red mutations, final seeds."""
    coherent, red, finals = {}, {}, {}
    traj, _ = run_sequence(TropicalSeed.initial(nine_matrices()[0]), nine_vertex_steps())
    coherent["nine"] = all(_coherent(s) for s in traj)
    for side in ("left", "right"):
        traj, signs = tropical_trace(side)
        coherent[side] = all(_coherent(s) for s in traj)
        red[side] = [t + 1 for t, x in enumerate(signs) if x < 0]
        finals[side] = traj[-1]
    expected = {side: list(load("sixteen")[side]["red"]) for side in ("left", "right")}
    return TropicalReport(coherent, red, expected, finals["left"] == finals["right"])


def tropical_composite_agrees(B, steps):
    """Composite tau with tropical signs has the final c-vectors as its columns."""
    traj, signs = run_sequence(TropicalSeed.initial(B), steps)
    total, _, _ = compose_steps(B, steps, signs)
    return np.array_equal(total.M, traj[-1].cvecs)


__all__ = [
    "SIGNS", "nine_matrices", "tau_composite", "tau_chain", "dilog_arguments", "rhat_apply",
    "rhat_apply_element", "rhat_center_form", "rhat_golden_right", "ryy_image",
    "rhat_equal", "descriptor_argument_check", "tau_table_check", "tau_ijk", "path_composite",
    "monomial_te_check", "inhomogeneous_te_check", "block_embedding",
    "tau_ijk_consistent", "tropical_trace", "red_mutations",
    "tropical_composite_agrees", "tropical_report", "TropicalReport", "Transpose",
]
