"""Hermite and Smith normal forms with transforms, saturation and basis completion.

Everything works on Python ints, so entry growth is never a concern. The HNF is
row-style: echelon form, positive pivots, entries above a pivot reduced into
[0, pivot). The SNF pivots on the least-magnitude nonzero entry of the active block.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from exactlin.matrices import IntMatrix, rational_inverse


class NotASummandBasis(ValueError):
    """Raised when vectors are dependent or do not span a direct summand."""


def _identity(size: int) -> List[List[int]]:
    return [[int(i == j) for j in range(size)] for i in range(size)]


def _swap_rows(matrix: List[List[int]], a: int, b: int):
    if a != b:
        matrix[a], matrix[b] = matrix[b], matrix[a]


def _swap_cols(matrix: List[List[int]], a: int, b: int):
    if a != b:
        for row in matrix:
            row[a], row[b] = row[b], row[a]


def _add_row(matrix: List[List[int]], target: int, source: int, factor: int):
    """row[target] += factor * row[source]"""
    src = matrix[source]
    matrix[target] = [x + factor * y for x, y in zip(matrix[target], src)]


def _add_col(matrix: List[List[int]], target: int, source: int, factor: int):
    for row in matrix:
        row[target] += factor * row[source]


def _negate_row(matrix: List[List[int]], i: int):
    matrix[i] = [-x for x in matrix[i]]


def hnf(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Return (H, U) with U unimodular and U·A = H in row Hermite normal form."""
    H = A.to_lists()
    m, n = A.rows, A.cols
    U = _identity(m)
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nonzero = [i for i in range(r, m) if H[i][j] != 0]
            if not nonzero:
                break
            p = min(nonzero, key=lambda i: (abs(H[i][j]), i))
            _swap_rows(H, r, p)
            _swap_rows(U, r, p)
            cleared = True
            for i in range(r + 1, m):
                if H[i][j]:
                    q = H[i][j] // H[r][j]
                    _add_row(H, i, r, -q)
                    _add_row(U, i, r, -q)
                    if H[i][j]:
                        cleared = False
            if cleared:
                break
        if H[r][j] == 0:
            continue
        if H[r][j] < 0:
            _negate_row(H, r)
            _negate_row(U, r)
        for i in range(r):
            q = H[i][j] // H[r][j]
            if q:
                _add_row(H, i, r, -q)
                _add_row(U, i, r, -q)
        r += 1
    return IntMatrix.from_rows(H, n), IntMatrix.from_rows(U, m)


@dataclass(frozen=True)
class SNFResult:
    """U·A·V = S with U, V unimodular; V_inverse is tracked alongside V."""
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    V_inverse: IntMatrix
    rank: int

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.S.entries[i][i] for i in range(self.rank))


def _least_entry(S: List[List[int]], t: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(t, len(S)):
        for j in range(t, len(S[i])):
            value = S[i][j]
            if value and (best is None or abs(value) < best[0]):
                best = (abs(value), i, j)
    return None if best is None else (best[1], best[2])


def snf(A: IntMatrix) -> SNFResult:
    """Smith normal form: positive diagonal d1 | d2 | ... | dr followed by zeros."""
    S = A.to_lists()
    m, n = A.rows, A.cols
    U, V, V_inv = _identity(m), _identity(n), _identity(n)
    t = 0
    while t < min(m, n):
        pivot = _least_entry(S, t)
        if pivot is None:
            break
        while True:
            pi, pj = pivot
            _swap_rows(S, t, pi)
            _swap_rows(U, t, pi)
            _swap_cols(S, t, pj)
            _swap_cols(V, t, pj)
            _swap_rows(V_inv, t, pj)
            p = S[t][t]
            for i in range(t + 1, m):
                q = S[i][t] // p
                if q:
                    _add_row(S, i, t, -q)
                    _add_row(U, i, t, -q)
            for j in range(t + 1, n):
                q = S[t][j] // p
                if q:
                    _add_col(S, j, t, -q)
                    _add_col(V, j, t, -q)
                    _add_row(V_inv, t, j, q)
            residues = any(S[i][t] for i in range(t + 1, m)) or any(S[t][j] for j in range(t + 1, n))
            if residues:
                # some residue is now smaller than |p|
                pivot = _least_entry(S, t)
                continue
            blocker = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if blocker is None:
                break
            _add_row(S, t, blocker[0], 1)
            _add_row(U, t, blocker[0], 1)
            pivot = (t, t)
        if S[t][t] < 0:
            _negate_row(S, t)
            _negate_row(U, t)
        t += 1
    return SNFResult(
        S=IntMatrix.from_rows(S, n),
        U=IntMatrix.from_rows(U, m),
        V=IntMatrix.from_rows(V, n),
        V_inverse=IntMatrix.from_rows(V_inv, n),
        rank=t,
    )


def _as_matrix(vectors: Sequence[Sequence[int]], dim: Optional[int]) -> IntMatrix:
    if not vectors and dim is None:
        raise ValueError("Ambient dimension required for an empty vector list")
    return IntMatrix.from_rows(vectors, dim if dim is not None else len(vectors[0]))


def saturate(B: IntMatrix) -> IntMatrix:
    """Basis (in HNF) of span_Q(rows of B) ∩ Z^ℓ.

    With U·B·V = S the rational row space of B is spanned by the first rank rows of
    V⁻¹, and since V⁻¹ is unimodular those rows already span the saturation.
    """
    result = snf(B)
    if result.rank == 0:
        return IntMatrix.from_rows([], B.cols)
    pure = IntMatrix.from_rows([result.V_inverse.row(i) for i in range(result.rank)], B.cols)
    H, _ = hnf(pure)
    return H


def is_summand_basis(vectors: Sequence[Sequence[int]], dim: Optional[int] = None) -> bool:
    if not vectors:
        return True
    result = snf(_as_matrix(vectors, dim))
    return result.rank == len(vectors) and all(d == 1 for d in result.diagonal)


def unimodular_complete(vectors: Sequence[Sequence[int]], dim: Optional[int] = None) -> IntMatrix:
    """Unimodular ℓ×ℓ matrix whose first k columns are the given vectors."""
    if not is_summand_basis(vectors, dim):
        raise NotASummandBasis(f"Vectors {[tuple(v) for v in vectors]} are not a summand basis")
    B = _as_matrix(vectors, dim)
    if B.rows == 0:
        return IntMatrix.identity(B.cols)
    result = snf(B)
    # B = U⁻¹·[I_k | 0]·V⁻¹, so swapping the top k rows of V⁻¹ for B keeps |det| = 1
    rows = [list(v) for v in B.entries] + [list(result.V_inverse.row(i)) for i in range(B.rows, B.cols)]
    return IntMatrix.from_rows(rows, B.cols).transpose()


def det(A: IntMatrix) -> int:
    return A.det()


def inverse_unimodular(A: IntMatrix) -> IntMatrix:
    if not A.is_unimodular():
        raise ValueError(f"Matrix is not unimodular: {A.entries}")
    inverse = rational_inverse(A.entries)
    return IntMatrix.from_rows([[int(x) for x in row] for row in inverse], A.cols)


def coordinates_in(basis: Sequence[Sequence[int]], vector: Sequence[int]) -> Tuple[int, ...]:
    """Integer coefficients c with Σ c_i·basis_i = vector; basis must be a summand basis."""
    completion = unimodular_complete(basis, len(vector))
    coefficients = inverse_unimodular(completion).apply(vector)
    k = len(basis)
    if any(coefficients[k:]):
        raise ValueError(f"{tuple(vector)} is not in the span of {[tuple(b) for b in basis]}")
    return coefficients[:k]
