"""Exchange matrices, square quivers of wiring diagrams and tropical y-seeds.

Vertices are labelled 1..n in every public function; matrices are stored
0-based internally.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import BadVertex, NotReduced, SignIncoherent


class ExchangeMatrix:
    """Skew-symmetric integer matrix; b[i,j] counts arrows i -> j."""

    __slots__ = ("b",)

    def __init__(self, b):
        b = np.array(b, dtype=np.int64)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError("exchange matrix must be square")
        if not np.array_equal(b, -b.T):
            raise ValueError("exchange matrix must be skew-symmetric")
        b.setflags(write=False)
        self.b = b

    @classmethod
    def from_arrows(cls, n, arrows):
        b = np.zeros((n, n), dtype=np.int64)
        for i, j in arrows:
            b[i - 1, j - 1] += 1
            b[j - 1, i - 1] -= 1
        return cls(b)

    @property
    def n(self):
        return self.b.shape[0]

    def __getitem__(self, ij):
        i, j = ij
        return int(self.b[i - 1, j - 1])

    def arrows(self):
        """Arrow multiset as sorted (i, j) pairs with multiplicity repeated."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                out.extend([(i + 1, j + 1)] * max(int(self.b[i, j]), 0))
        return out

    def check_vertex(self, k):
        if not (1 <= k <= self.n):
            raise BadVertex(f"vertex {k} not in 1..{self.n}")

    def relabel(self, perm):
        """Return the matrix with vertex v renamed perm[v] (perm: dict 1-based)."""
        b = np.zeros_like(self.b)
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                b[perm[i] - 1, perm[j] - 1] = self.b[i - 1, j - 1]
        return ExchangeMatrix(b)

    def __eq__(self, other):
        return isinstance(other, ExchangeMatrix) and np.array_equal(self.b, other.b)

    def __hash__(self):
        return hash(self.b.tobytes())

    def __repr__(self):
        return f"ExchangeMatrix({self.b.tolist()})"


def mutate_matrix(B, k):
    B.check_vertex(k)
    b = B.b
    k0 = k - 1
    col = b[:, k0]
    row = b[k0, :]
    new = b + (np.abs(col)[:, None] * row[None, :] + col[:, None] * np.abs(row)[None, :]) // 2
    new[k0, :] = -b[k0, :]
    new[:, k0] = -b[:, k0]
    return ExchangeMatrix(new)


def transpose_indices(B, r, s):
    B.check_vertex(r)
    B.check_vertex(s)
    p = np.arange(B.n)
    p[r - 1], p[s - 1] = s - 1, r - 1
    return ExchangeMatrix(B.b[np.ix_(p, p)])


# --- wiring diagrams -------------------------------------------------------

ROLES = ("NW", "NE", "SW", "SE")


@dataclass(frozen=True)
class WiringDiagram:
    """Reduced word in S_n; letter l swaps the wires at heights l, l+1 (1 = top)."""

    word: tuple
    n: int

    def __post_init__(self):
        word = tuple(int(x) for x in self.word)
        object.__setattr__(self, "word", word)
        if any(not (1 <= x < self.n) for x in word):
            raise NotReduced(f"letters must lie in 1..{self.n - 1}")
        if len(word) != _inversions(self.permutation()):
            raise NotReduced(f"word {word} is not reduced")

    def permutation(self):
        pos = list(range(self.n))
        for x in self.word:
            pos[x - 1], pos[x] = pos[x], pos[x - 1]
        return pos

    def crossing_pairs(self):
        """Wire pair of each crossing, wires numbered 1..n from the bottom on the left."""
        pos = [self.n - p for p in range(self.n)]
        out = []
        for x in self.word:
            a, b = pos[x - 1], pos[x]
            out.append((min(a, b), max(a, b)))
            pos[x - 1], pos[x] = pos[x], pos[x - 1]
        return out

    def crossing_labels(self):
        """Crossing label = rank of its wire pair among all crossing pairs."""
        pairs = self.crossing_pairs()
        order = {p: i + 1 for i, p in enumerate(sorted(pairs))}
        return [order[p] for p in pairs]


def _inversions(perm):
    return sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])


@dataclass(frozen=True)
class SquareQuiver:
    matrix: ExchangeMatrix
    adjacency: dict = field(hash=False)
    diagram: WiringDiagram = None

    @property
    def n(self):
        return self.matrix.n

    def roles_of(self, v):
        """List of (crossing, role) pairs occupied by vertex v."""
        return [(c, r) for c, roles in self.adjacency.items() for r, u in roles.items() if u == v]

    def relabel(self, perm):
        adj = {c: {r: perm[v] for r, v in roles.items()} for c, roles in self.adjacency.items()}
        return SquareQuiver(self.matrix.relabel(perm), adj, self.diagram)


def build_square_quiver(word, n=None):
    """Square quiver of a reduced word, with row-major canonical labels.

    Vertices are the wire segments; rows are wire heights from the top,
    segments within a row are read left to right. Each crossing carries
    a clockwise square NW -> NE -> SE -> SW -> NW.
    """
    word = tuple(word)
    if n is None:
        n = max(word) + 1 if word else 1
    diagram = WiringDiagram(word, n)
    cuts = {h: [] for h in range(1, n + 1)}
    for x, lvl in enumerate(word):
        cuts[lvl].append(x)
        cuts[lvl + 1].append(x)
    seg = {}
    label = 0
    for h in range(1, n + 1):
        for s in range(len(cuts[h]) + 1):
            label += 1
            seg[(h, s)] = label
    adjacency = {}
    arrows = []
    labels = diagram.crossing_labels()
    for x, lvl in enumerate(word):
        up = cuts[lvl].index(x)
        dn = cuts[lvl + 1].index(x)
        roles = {
            "NW": seg[(lvl, up)],
            "NE": seg[(lvl, up + 1)],
            "SW": seg[(lvl + 1, dn)],
            "SE": seg[(lvl + 1, dn + 1)],
        }
        adjacency[labels[x]] = roles
        cyc = [roles["NW"], roles["NE"], roles["SE"], roles["SW"]]
        arrows += [(cyc[i], cyc[(i + 1) % 4]) for i in range(4)]
    return SquareQuiver(ExchangeMatrix.from_arrows(label, arrows), adjacency, diagram)


# --- tropical y-seeds ------------------------------------------------------

@dataclass(frozen=True)
class TropicalSeed:
    matrix: ExchangeMatrix
    cvecs: np.ndarray

    @classmethod
    def initial(cls, B):
        return cls(B, np.eye(B.n, dtype=np.int64))

    def __eq__(self, other):
        return self.matrix == other.matrix and np.array_equal(self.cvecs, other.cvecs)

    def __hash__(self):
        return hash((self.matrix, self.cvecs.tobytes()))


def tropical_sign(seed, i):
    seed.matrix.check_vertex(i)
    c = seed.cvecs[:, i - 1]
    if np.all(c >= 0) and np.any(c > 0):
        return 1
    if np.all(c <= 0) and np.any(c < 0):
        return -1
    raise SignIncoherent(f"c-vector of y_{i} is {c.tolist()}")


def mutate_tropical(seed, k, sign=None):
    """Mutate at k using c'_i = c_i + c_k [eps b_ik]_+ with eps the tropical sign."""
    eps = tropical_sign(seed, k) if sign is None else sign
    b = seed.matrix.b
    k0 = k - 1
    c = seed.cvecs.copy()
    ck = seed.cvecs[:, k0]
    for i in range(seed.matrix.n):
        if i == k0:
            c[:, i] = -ck
        else:
            c[:, i] = seed.cvecs[:, i] + ck * max(eps * int(b[i, k0]), 0)
    c.setflags(write=False)
    return TropicalSeed(mutate_matrix(seed.matrix, k), c)


def transpose_seed(seed, r, s):
    p = np.arange(seed.matrix.n)
    p[r - 1], p[s - 1] = s - 1, r - 1
    c = seed.cvecs[:, p].copy()
    c.setflags(write=False)
    return TropicalSeed(transpose_indices(seed.matrix, r, s), c)


def semifield_mutation(seed, k):
    """Independent oracle: y'_i = y_i (1 (+) y_k^{-sgn b_ik})^{-b_ik}, (+) = min."""
    b = seed.matrix.b
    k0 = k - 1
    c = seed.cvecs.copy()
    ck = seed.cvecs[:, k0]
    for i in range(seed.matrix.n):
        if i == k0:
            c[:, i] = -ck
            continue
        bik = int(b[i, k0])
        if bik == 0:
            continue
        s = 1 if bik > 0 else -1
        c[:, i] = seed.cvecs[:, i] - bik * np.minimum(0, -s * ck)
    c.setflags(write=False)
    return TropicalSeed(mutate_matrix(seed.matrix, k), c)


@dataclass(frozen=True)
class Mutate:
    k: int


@dataclass(frozen=True)
class Transpose:
    r: int
    s: int


def parse_steps(raw):
    """Steps from fixture form: ["mu", k] or ["sigma", r, s]."""
    out = []
    for st in raw:
        if st[0] == "mu":
            out.append(Mutate(int(st[1])))
        elif st[0] == "sigma":
            out.append(Transpose(int(st[1]), int(st[2])))
        else:
            raise ValueError(f"unknown step {st}")
    return out


def run_sequence(seed, steps, oracle=False):
    """Return the trajectory [seed, ...] and the tropical sign seen at each mutation."""
    traj = [seed]
    signs = []
    for st in steps:
        cur = traj[-1]
        if isinstance(st, Mutate):
            signs.append(tropical_sign(cur, st.k))
            nxt = semifield_mutation(cur, st.k) if oracle else mutate_tropical(cur, st.k)
        else:
            nxt = transpose_seed(cur, st.r, st.s)
        traj.append(nxt)
    return traj, signs


def matrices_along(B, steps):
    """Exchange matrices B^(1), B^(2), ... along a step list."""
    out = [B]
    for st in steps:
        if isinstance(st, Mutate):
            out.append(mutate_matrix(out[-1], st.k))
        else:
            out.append(transpose_indices(out[-1], st.r, st.s))
    return out
