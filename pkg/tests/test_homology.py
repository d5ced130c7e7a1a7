import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnor_complement.combinatorics import SimplicialComplex, from_mask, to_mask
from milnor_complement.homology import (
    ChainComplex,
    GradedAbelianGroup,
    InvariantViolation,
    cone,
    full_subcomplex,
    homology,
    reduced_homology,
    simplicial_chain_complex,
)
from milnor_complement.linalg import IntMatrix, bareiss_rank

from conftest import simplex_boundary, two_points


def groups(K):
    return reduced_homology(K).groups


def test_two_points():
    C = simplicial_chain_complex(two_points())
    assert C.boundary(0).to_dense() == [[1, 1]]
    assert groups(two_points()) == {0: (1, ())}


def test_triangle_boundary():
    assert groups(simplex_boundary(3)) == {1: (1, ())}


def test_empty_complex_has_minus_one_class():
    assert groups(SimplicialComplex.empty(0)) == {-1: (1, ())}
    assert groups(SimplicialComplex.empty(3)) == {-1: (1, ())}


def test_void_complex_has_nothing():
    assert groups(SimplicialComplex(2, [])) == {}


def test_tetrahedron_boundary():
    assert groups(simplex_boundary(4)) == {2: (1, ())}


def test_rp2(rp2):
    assert groups(rp2) == {1: (0, (2,))}
    assert homology(simplicial_chain_complex(rp2, reduced=False)).groups == {0: (1, ()), 1: (0, (2,))}


def test_point_plus_triangle():
    K = SimplicialComplex.from_facets(4, [(1,), (2, 3), (3, 4), (2, 4)])
    assert groups(K) == {0: (1, ()), 1: (1, ())}


def test_full_subcomplex_examples(path_complex):
    assert full_subcomplex(path_complex, 0) == SimplicialComplex.empty(6)
    assert full_subcomplex(path_complex, (1 << 6) - 1) == path_complex
    sub = full_subcomplex(path_complex, to_mask([1, 3, 5]))
    assert sub.facets == (to_mask([1, 3, 5]),)


def test_chain_complex_rejects_bad_square():
    d1 = IntMatrix.from_dense([[1, 1]])
    d2 = IntMatrix.from_dense([[1], [1]])
    with pytest.raises(InvariantViolation):
        ChainComplex(0, [[0], [0, 1], [0]], {1: d1, 2: d2})


def test_graded_group_helpers():
    G = GradedAbelianGroup({0: (1, ()), 3: (2, (6, 4))})
    assert G.torsion(3) == (2, 12)
    assert G.lines() == ["H_0 = Z", "H_3 = Z^2 + Z/2 + Z/12"]
    assert GradedAbelianGroup.from_json(G.to_json()) == G
    assert G.shifted(2).rank(5) == 2
    assert (G + G).rank(3) == 4 and (G + G).torsion(3) == (2, 2, 12, 12)
    assert G.rational().has_torsion() is False
    assert G.euler_characteristic() == -1
    assert G.betti() == [1, 0, 0, 2]


def random_complex(rng, n, k=6):
    return SimplicialComplex(n, [rng.randrange(1, 1 << n) for _ in range(rng.randint(1, k))])


def rational_betti_oracle(K):
    """Reduced Betti numbers from Bareiss ranks of dense boundary matrices."""
    C = simplicial_chain_complex(K)
    ranks = {d: bareiss_rank(C.boundary(d).to_dense()) for d in range(C.low, C.high + 2)}
    return {d: C.rank(d) - ranks[d] - ranks[d + 1] for d in C.degrees()}


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_ranks_match_bareiss(n, rng):
    K = random_complex(rng, n)
    H = reduced_homology(K)
    for d, b in rational_betti_oracle(K).items():
        assert H.rank(d) == b


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_euler_characteristic(n, rng):
    K = random_complex(rng, n)
    f_alt = sum((-1) ** (k - 1) * c for k, c in enumerate(K.f_vector()))
    assert reduced_homology(K).euler_characteristic() == f_alt
    assert simplicial_chain_complex(K).euler_characteristic() == f_alt


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_cone_is_acyclic(n, rng):
    K = random_complex(rng, n)
    assert reduced_homology(cone(K)).groups == {}


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_relabel_invariance(n, rng):
    K = random_complex(rng, n)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    L = SimplicialComplex.from_facets(n, [[perm[v - 1] for v in from_mask(f)] for f in K.facets])
    assert reduced_homology(L) == reduced_homology(K)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_boundary_squares_to_zero(n, rng):
    C = simplicial_chain_complex(random_complex(rng, n))
    for d in range(C.low + 2, C.high + 1):
        assert (C.boundary(d - 1) @ C.boundary(d)).is_zero


def test_rp2_relabelled_keeps_torsion(rp2):
    rng = random.Random(2)
    for _ in range(5):
        perm = list(range(1, 7))
        rng.shuffle(perm)
        L = SimplicialComplex.from_facets(6, [[perm[v - 1] for v in from_mask(f)] for f in rp2.facets])
        assert groups(L) == {1: (0, (2,))}
