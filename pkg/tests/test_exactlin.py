import random
from fractions import Fraction

import pytest
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import ZZ

from exactlin import (
    IntMatrix,
    NotASummandBasis,
    SparseMatrix,
    coordinates_in,
    hnf,
    inverse_unimodular,
    is_summand_basis,
    rational_rank,
    saturate,
    snf,
    unimodular_complete,
)
from exactlin.matrices import format_number, integer_det, parse_number


def test_snf_of_small_matrix():
    A = IntMatrix.from_rows([[2, 4], [6, 8]])
    result = snf(A)
    assert result.diagonal == (2, 4)
    assert result.U @ A @ result.V == result.S
    assert result.V @ result.V_inverse == IntMatrix.identity(2)


@pytest.mark.parametrize("rows", [
    [[0, 0], [0, 0]],
    [[3]],
    [[1, 2, 3], [4, 5, 6], [7, 8, 10]],
    [[2, 0, 0], [0, 3, 0]],
    [[6, 4], [10, 8], [0, 2]],
])
def test_snf_factorization_and_divisibility(rows):
    A = IntMatrix.from_rows(rows)
    result = snf(A)
    assert result.U.is_unimodular() and result.V.is_unimodular()
    assert result.U @ A @ result.V == result.S
    diagonal = result.diagonal
    assert all(d > 0 for d in diagonal)
    assert all(b % a == 0 for a, b in zip(diagonal, diagonal[1:]))
    assert result.rank == rational_rank(rows)


def test_hnf_is_triangular_with_reduced_columns():
    A = IntMatrix.from_rows([[2, 3, 1], [4, 1, 5], [0, 2, 2]])
    H, U = hnf(A)
    assert U.is_unimodular()
    assert U @ A == H
    for i in range(3):
        assert all(H.entries[i][j] == 0 for j in range(i))
        assert H.entries[i][i] > 0
        assert all(0 <= H.entries[r][i] < H.entries[i][i] for r in range(i))


def test_saturate_recovers_pure_sublattice():
    H = saturate(IntMatrix.from_rows([[2, 0, 0]]))
    assert H.entries == ((1, 0, 0),)
    H = saturate(IntMatrix.from_rows([[2, 2, 0], [0, 0, 3]]))
    assert H.rows == 2
    assert is_summand_basis(H.entries, 3)
    assert rational_rank(list(H.entries) + [[1, 1, 0], [0, 0, 1]]) == 2


def test_saturate_zero_matrix_is_empty():
    assert saturate(IntMatrix.zeros(2, 3)).rows == 0


def test_is_summand_basis():
    assert is_summand_basis([(1, 0, 0), (0, 1, 0)])
    assert is_summand_basis([(1, 1, 0)])
    assert not is_summand_basis([(2, 0, 0)])
    assert not is_summand_basis([(1, 1), (1, -1)])


def test_unimodular_complete_keeps_columns():
    vectors = [(1, 2, 3), (0, 1, 4)]
    M = unimodular_complete(vectors)
    assert M.is_unimodular()
    assert M.column(0) == (1, 2, 3)
    assert M.column(1) == (0, 1, 4)
    assert unimodular_complete([], 3) == IntMatrix.identity(3)
    with pytest.raises(NotASummandBasis):
        unimodular_complete([(2, 0)])


def test_inverse_and_coordinates():
    A = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert A @ inverse_unimodular(A) == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        inverse_unimodular(IntMatrix.from_rows([[2, 0], [0, 1]]))
    assert coordinates_in([(1, 1, 0), (0, 0, 1)], (2, 2, -3)) == (2, -3)
    with pytest.raises(ValueError):
        coordinates_in([(1, 1, 0)], (1, 0, 0))


def test_determinants():
    assert integer_det([[1, 2], [3, 4]]) == -2
    assert IntMatrix.from_rows([[0, 1], [1, 0]]).det() == -1


def test_sparse_matrix_product_and_rank():
    A = SparseMatrix.from_dense([[1, 0], [0, 0], [2, 3]], 2)
    assert A.get(1, 0) == 0
    assert A.rank() == 2
    B = SparseMatrix.from_dense([[1, 1], [-1, 1]], 2)
    assert (A @ B).to_dense() == [[1, 1], [0, 0], [-1, 5]]
    A.add(0, 0, -1)
    assert (0, 0) not in A.data


def test_sparse_matrix_exchange_uses_decimal_strings():
    A = SparseMatrix(2, 2, {(0, 1): Fraction(1, 3), (1, 0): 5})
    payload = A.to_json()
    assert payload["entries"] == [[0, 1, "1/3"], [1, 0, "5"]]
    assert SparseMatrix.from_json(payload).data == A.data
    assert format_number(Fraction(4, 2)) == "2"
    assert parse_number("-7") == -7


def random_matrix(rng, rows, cols, bound=9):
    return IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols)


def assert_row_hnf(H):
    pivot_cols = []
    for i, row in enumerate(H.entries):
        nonzero = [j for j, x in enumerate(row) if x]
        if not nonzero:
            assert all(not any(r) for r in H.entries[i:])
            break
        j = nonzero[0]
        assert row[j] > 0
        assert not pivot_cols or j > pivot_cols[-1]
        assert all(0 <= H.entries[r][j] < row[j] for r in range(i))
        pivot_cols.append(j)


def test_hnf_of_identity_and_swap():
    I3 = IntMatrix.identity(3)
    assert hnf(I3) == (I3, I3)
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    H, U = hnf(swap)
    assert H == IntMatrix.identity(2)
    assert U == swap


@pytest.mark.parametrize("seed", range(8))
def test_hnf_of_random_4x4(seed):
    A = random_matrix(random.Random(seed), 4, 4)
    H, U = hnf(A)
    assert U.is_unimodular()
    assert U @ A == H
    assert_row_hnf(H)


@pytest.mark.parametrize("seed", range(8))
def test_snf_of_random_5x5_matches_sympy(seed):
    A = random_matrix(random.Random(seed), 5, 5)
    result = snf(A)
    assert result.U.is_unimodular() and result.V.is_unimodular()
    assert result.U @ A @ result.V == result.S
    diagonal = result.diagonal
    assert all(b % a == 0 for a, b in zip(diagonal, diagonal[1:]))
    expected = sorted(abs(int(f)) for f in invariant_factors(Matrix(A.to_lists()), domain=ZZ) if f)
    assert list(diagonal) == expected


@pytest.mark.parametrize("seed", range(6))
def test_snf_ignores_row_and_column_order(seed):
    rng = random.Random(seed)
    A = random_matrix(rng, 4, 5, bound=6)
    rows = rng.sample(range(4), 4)
    cols = rng.sample(range(5), 5)
    shuffled = IntMatrix.from_rows([[A.entries[i][j] for j in cols] for i in rows], 5)
    assert snf(shuffled).S == snf(A).S


def test_saturate_is_idempotent():
    B = IntMatrix.from_rows([[2, 2, 0], [0, 4, 4]])
    H = saturate(B)
    assert saturate(H) == H
    assert snf(H).diagonal == (1, 1)
    for row in B.entries:
        coordinates_in(H.entries, row)
    for seed in range(5):
        B = random_matrix(random.Random(seed), 2, 4)
        H = saturate(B)
        assert saturate(H) == H
        assert is_summand_basis(H.entries, 4)
        assert H.rows == rational_rank(B.entries)


def test_summand_with_large_last_coordinates():
    vectors = [(1, 0, 9), (0, 1, 9)]
    assert is_summand_basis(vectors)
    M = unimodular_complete(vectors)
    assert abs(M.det()) == 1
    assert M.columns()[:2] == vectors
