"""The concrete quivers used throughout: the 9-vertex pair for n = 3 and the
16-vertex quiver for n = 4, with their mutation sequences."""
from functools import lru_cache

import numpy as np

from .cluster import ExchangeMatrix, SquareQuiver, build_square_quiver, parse_steps
from .goldens import load


def _int_keys(d):
    return {int(k): v for k, v in d.items()}


@lru_cache(maxsize=None)
def nine_vertex_quiver(side):
    """Square quiver of word 212 ('left') or 121 ('right') in the shipped labels."""
    data = load("quivers")["nine"][side]
    sq = build_square_quiver(data["word"], 3)
    return sq.relabel(_int_keys(data["label_map"]))


def nine_vertex_pair():
    return nine_vertex_quiver("left"), nine_vertex_quiver("right")


def nine_vertex_steps():
    """mu_8 mu_5 mu_4 mu_8 then the transposition (4 5)."""
    return parse_steps(load("quivers")["nine"]["steps"])


def nine_vertex_centers():
    return [tuple(c) for c in load("quivers")["nine"]["left"]["centers"]]


def fixture_matrix(side):
    """Exchange matrix read directly from the listed arrows."""
    return ExchangeMatrix.from_arrows(9, load("quivers")["nine"][side]["arrows"])


@lru_cache(maxsize=None)
def sixteen_vertex_quiver():
    """Square quiver of the reduced word 321323 of the longest element of S_4."""
    data = load("sixteen")
    if "matrix" in data:
        B = ExchangeMatrix(np.array(data["matrix"], dtype=np.int64))
        sq = build_square_quiver(data["word"], 4)
        return SquareQuiver(B, sq.adjacency, sq.diagram)
    return build_square_quiver(data["word"], 4)


def sixteen_vertex_steps(side):
    """20 steps (16 mutations, 4 transpositions) for 'left' or 'right'."""
    return parse_steps(load("sixteen")[side]["steps"])


def sixteen_vertex_blocks(side):
    return list(load("sixteen")[side]["blocks"])
