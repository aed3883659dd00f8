import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import skew_matrices
from tetracluster.cluster import (ExchangeMatrix, Mutate, TropicalSeed, build_square_quiver,
                                  mutate_matrix, mutate_tropical, run_sequence,
                                  semifield_mutation, transpose_indices)
from tetracluster.errors import BadVertex, SignIncoherent
from tetracluster.quivers import (fixture_matrix, nine_vertex_quiver, nine_vertex_steps,
                                  sixteen_vertex_quiver, sixteen_vertex_steps)


@given(skew_matrices(), st.data())
def test_mutation_is_an_involution(B, data):
    k = data.draw(st.integers(1, B.n))
    assert mutate_matrix(mutate_matrix(B, k), k) == B


@given(skew_matrices(), st.data())
def test_mutation_keeps_skew_symmetry(B, data):
    k = data.draw(st.integers(1, B.n))
    b = mutate_matrix(B, k).b
    assert np.array_equal(b, -b.T)


@given(skew_matrices(), st.data())
def test_tropical_rule_matches_semifield_oracle(B, data):
    seed = TropicalSeed.initial(B)
    for _ in range(6):
        k = data.draw(st.integers(1, B.n))
        a = mutate_tropical(seed, k)
        assert a == semifield_mutation(seed, k)
        seed = a


@given(skew_matrices(), st.data())
def test_c_vectors_stay_sign_coherent(B, data):
    steps = [Mutate(data.draw(st.integers(1, B.n))) for _ in range(8)]
    traj, signs = run_sequence(TropicalSeed.initial(B), steps)
    assert all(s in (1, -1) for s in signs)
    for seed in traj:
        for j in range(B.n):
            c = seed.cvecs[:, j]
            assert np.all(c >= 0) or np.all(c <= 0)


def test_incoherent_vector_is_signalled():
    B = ExchangeMatrix([[0, 1], [-1, 0]])
    seed = TropicalSeed(B, np.array([[1, 0], [-1, 1]]))
    with pytest.raises(SignIncoherent):
        mutate_tropical(seed, 1)


def test_bad_vertex():
    with pytest.raises(BadVertex):
        mutate_matrix(ExchangeMatrix([[0, 1], [-1, 0]]), 3)


def test_transposition_swaps_rows_and_columns():
    B = ExchangeMatrix([[0, 1, 2], [-1, 0, 0], [-2, 0, 0]])
    T = transpose_indices(B, 1, 3)
    assert T[3, 1] == 2 and T[3, 2] == 1 and T[1, 3] == -2


def test_nine_vertex_quivers_match_listed_arrows():
    for side in ("left", "right"):
        assert nine_vertex_quiver(side).matrix == fixture_matrix(side)


def test_nine_vertex_sequence_connects_the_pair():
    B = nine_vertex_quiver("left").matrix
    traj, _ = run_sequence(TropicalSeed.initial(B), nine_vertex_steps())
    assert traj[-1].matrix == nine_vertex_quiver("right").matrix


def test_sixteen_vertex_paths_share_the_final_quiver():
    B = sixteen_vertex_quiver().matrix
    ends = []
    for side in ("left", "right"):
        traj, _ = run_sequence(TropicalSeed.initial(B), sixteen_vertex_steps(side))
        ends.append(traj[-1])
    assert ends[0] == ends[1]
    assert len([s for s in sixteen_vertex_steps("left") if isinstance(s, Mutate)]) == 16


def test_square_quiver_size():
    sq = build_square_quiver([2, 1, 2], 3)
    assert sq.n == 9
    assert sorted(r for v in range(1, 10) for _, r in sq.roles_of(v)).count("NW") == 3
