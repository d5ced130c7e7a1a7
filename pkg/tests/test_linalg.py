import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnor_complement.homology import simplicial_chain_complex
from milnor_complement.linalg import (
    IntMatrix,
    bareiss_rank,
    clear_denominators,
    determinant,
    invariant_factors,
    in_subspace,
    kernel_basis,
    normalize_factors,
    rank,
    rank_mod_p,
    rational_quotient_basis,
    smith_normal_form,
    solve,
)


def test_diag_2_3():
    S = smith_normal_form(IntMatrix.from_dense([[2, 0], [0, 3]]), want_transforms=True)
    assert S.factors == [1, 6]
    assert S.verify(IntMatrix.from_dense([[2, 0], [0, 3]]))


def test_zero_matrix():
    S = smith_normal_form(IntMatrix(3, 3, {}), want_transforms=True)
    assert S.rank == 0 and S.factors == []
    assert smith_normal_form(IntMatrix(3, 3, {})).factors == []


def test_empty_matrix():
    assert smith_normal_form(IntMatrix(0, 0, {})).factors == []
    assert smith_normal_form(IntMatrix(0, 4, {}), want_transforms=True).factors == []


def test_rp2_boundary_has_two_torsion(rp2):
    C = simplicial_chain_complex(rp2)
    factors = invariant_factors(C.boundary(2))
    assert factors[-1] == 2
    assert [d for d in factors if d > 1] == [2]
    dense = smith_normal_form(C.boundary(2), want_transforms=True)
    assert dense.factors == factors
    assert dense.verify(C.boundary(2))


def test_int_matrix_drops_zero_entries():
    A = IntMatrix.from_dense([[0, 1], [2, 0]])
    assert set(A.entries) == {(0, 1), (1, 0)}
    with pytest.raises(IndexError):
        IntMatrix(1, 1, {(1, 0): 3})


def test_normalize_factors():
    assert normalize_factors([6, 4]) == [2, 12]
    assert normalize_factors([0, -3, 1]) == [1, 3]
    assert normalize_factors([2, 3]) == [1, 6]


def test_determinant():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0
    assert determinant([]) == 1


def test_quotient_examples():
    e1, e2 = [1, 0], [0, 1]
    assert rational_quotient_basis([e1, e2], [e1]).dimension == 1
    assert rational_quotient_basis([e1, e2], [e1, e2]).dimension == 0
    with pytest.raises(ValueError, match="not contained"):
        rational_quotient_basis([e1], [e2])


def test_quotient_random_rank_three():
    rng = random.Random(3)
    while True:
        cols = [[rng.randint(-4, 4) for _ in range(5)] for _ in range(3)]
        if bareiss_rank([list(r) for r in zip(*cols)]) == 3:
            break
    Q = rational_quotient_basis(cols, [cols[0]])
    assert Q.dimension == 2
    assert Q.indices == [1, 2]


def test_in_subspace_examples():
    assert in_subspace([0, 0], [[1, 0]])
    assert in_subspace([1, 0], [[1, 0]])
    assert not in_subspace([0, 1], [[1, 0]])
    assert in_subspace([0, 0], [])
    assert not in_subspace([1], [])


def test_solve_and_kernel():
    cols = [[1, 0], [0, 1], [1, 1]]
    x = solve(cols, [2, 3], 2)
    assert [sum(x[j] * cols[j][r] for j in range(3)) for r in range(2)] == [2, 3]
    assert solve([[1, 1]], [1, 0], 2) is None
    (k,) = kernel_basis(cols, 2)
    assert [sum(k[j] * cols[j][r] for j in range(3)) for r in range(2)] == [0, 0]
    xr = solve(cols, [2, 3], 2, reverse=True)
    assert [sum(xr[j] * cols[j][r] for j in range(3)) for r in range(2)] == [2, 3]


def test_clear_denominators():
    assert clear_denominators([Fraction(1, 2), Fraction(-1, 3)]) == [3, -2]
    assert clear_denominators([Fraction(4), Fraction(6)]) == [2, 3]


def dense_product(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


matrices = st.integers(0, 8).flatmap(
    lambda m: st.integers(0, 8).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=m, max_size=m).map(
            lambda rows: (m, n, rows)
        )
    )
)


def as_matrix(case):
    m, n, rows = case
    return IntMatrix.from_dense(rows, n)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_contract(case):
    A = as_matrix(case)
    S = smith_normal_form(A, want_transforms=True)
    assert all(d > 0 for d in S.factors)
    assert all(b % a == 0 for a, b in zip(S.factors, S.factors[1:]))
    assert S.U @ A @ S.V == S.diagonal()
    assert abs(determinant(S.U.to_dense())) == 1
    assert abs(determinant(S.V.to_dense())) == 1
    assert smith_normal_form(S.diagonal()).factors == S.factors
    assert invariant_factors(A) == S.factors


@settings(max_examples=100, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_snf_permutation_invariant(case, rng):
    A = as_matrix(case)
    rp = list(range(A.rows))
    cp = list(range(A.cols))
    rng.shuffle(rp)
    rng.shuffle(cp)
    assert invariant_factors(A.permuted(rp, cp)) == invariant_factors(A)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_cross_checks(case):
    A = as_matrix(case)
    r = rank(A)
    assert r == bareiss_rank(A.to_dense())
    assert rank_mod_p(A, 1_000_003) == r
    # the product of the factors is the gcd of the maximal minors; mod a prime
    # dividing none of them the rank is unchanged
    prod = 1
    for d in invariant_factors(A):
        prod *= d
    for p in (2, 3, 5, 7):
        assert (rank_mod_p(A, p) == r) == (prod % p != 0)


def test_first_factor_is_entry_gcd():
    rng = random.Random(11)
    for _ in range(200):
        rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)]
        g = 0
        for row in rows:
            for v in row:
                g = gcd(g, v)
        factors = invariant_factors(IntMatrix.from_dense(rows, 4))
        assert (factors[0] if factors else 0) == g


def test_matmul_matches_dense():
    rng = random.Random(5)
    for _ in range(50):
        A = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(3)]
        B = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(4)]
        assert (IntMatrix.from_dense(A) @ IntMatrix.from_dense(B)).to_dense() == dense_product(A, B)


def test_dump(tmp_path):
    A = IntMatrix.from_dense([[0, 2], [-1, 0]])
    A.dump(tmp_path / "m.txt")
    assert (tmp_path / "m.txt").read_text().splitlines() == ["2 2", "0 1 2", "1 0 -1"]
