"""Twisted coinvariants (Q_σ ⊗ V^{⊗k})_G of finite stabilizers, by averaging, and Young projectors.

For a finite group G acting on a rational representation W, the χ-twisted coinvariants have
dimension tr P with P = (1/|G|) Σ_g χ(g) ρ_W(g). P is idempotent, so tr P = rank P.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import permutations, product
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from exactlin import IntMatrix, SparseMatrix
from lattice import LineSetSimplex

from homology.groups import FiniteMatrixGroup, orbit_decomposition, orientation_character, stabilizer

logger = logging.getLogger(__name__)

DET_RESTRICTIONS = ("all", "det=1")
DEFAULT_WORK_BOUND = 2_000_000

Permutation = Tuple[int, ...]


def vcd(n: int) -> int:
    """Virtual cohomological dimension n(n-1)/2 of SL_n(Z)."""
    return n * (n - 1) // 2


def _check_partition(partition: Sequence[int]) -> Tuple[int, ...]:
    partition = tuple(int(x) for x in partition)
    if any(x <= 0 for x in partition) or list(partition) != sorted(partition, reverse=True):
        raise ValueError(f"{partition} is not a partition")
    return partition


def partition_weight(partition: Sequence[int], n: int) -> int:
    """‖λ‖ = Σ (λ_i − λ_n), reading λ as a weight of length n padded with zeros."""
    padded = list(partition) + [0] * (n - len(partition))
    return sum(x - padded[n - 1] for x in padded[:n])


@dataclass(frozen=True)
class CoinvariantSpec:
    group: FiniteMatrixGroup
    k: int = 0
    twist_simplex: Optional[LineSetSimplex] = None
    det_restriction: str = "all"
    partition: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"Tensor power must be >= 0, got {self.k}")
        if self.det_restriction not in DET_RESTRICTIONS:
            raise ValueError(f"det_restriction must be one of {DET_RESTRICTIONS}, got {self.det_restriction!r}")
        if self.partition is not None:
            partition = _check_partition(self.partition)
            if sum(partition) != self.k:
                raise ValueError(f"Partition {partition} is not a partition of k = {self.k}")
            if len(partition) > self.group.degree:
                raise ValueError(f"{partition} has more than n = {self.group.degree} parts")
            object.__setattr__(self, "partition", partition)

    @property
    def n(self) -> int:
        return self.group.degree

    def elements(self) -> List[IntMatrix]:
        if self.det_restriction == "det=1":
            return [g for g in self.group.elements if g.det() == 1]
        return list(self.group.elements)

    def character(self, g: IntMatrix) -> int:
        if self.twist_simplex is None:
            return 1
        return orientation_character(g, self.twist_simplex)

    def to_json(self) -> dict:
        return {
            "group": self.group.label,
            "group_order": self.group.order,
            "n": self.n,
            "k": self.k,
            "twist": None if self.twist_simplex is None else self.twist_simplex.to_json(),
            "det_restriction": self.det_restriction,
            "partition": None if self.partition is None else list(self.partition),
        }


def _index_tuples(n: int, k: int) -> List[Tuple[int, ...]]:
    return list(product(range(n), repeat=k))


def tensor_power(g: IntMatrix, k: int) -> Dict[Tuple[int, int], int]:
    """Nonzero entries of g^{⊗k}, indexed by positions in the lexicographic basis of V^{⊗k}."""
    indices = _index_tuples(g.rows, k)
    entries = {}
    for a, I in enumerate(indices):
        for b, J in enumerate(indices):
            value = prod(g.entries[i][j] for i, j in zip(I, J))
            if value:
                entries[a, b] = value
    return entries


def _compose(p: Permutation, q: Permutation) -> Permutation:
    return tuple(p[q[x]] for x in range(len(q)))


def _sign(p: Permutation) -> int:
    return -1 if sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[j] < p[i]) % 2 else 1


def _tableau(partition: Sequence[int]) -> List[List[int]]:
    rows, start = [], 0
    for length in partition:
        rows.append(list(range(start, start + length)))
        start += length
    return rows


def _subgroup(blocks: List[List[int]], k: int) -> List[Permutation]:
    """Permutations of range(k) preserving each block."""
    result = []
    for images in product(*(permutations(block) for block in blocks)):
        p = list(range(k))
        for block, image in zip(blocks, images):
            for x, y in zip(block, image):
                p[x] = y
        result.append(tuple(p))
    return result


def hook_lengths(partition: Sequence[int]) -> List[List[int]]:
    partition = _check_partition(partition)
    columns = [sum(1 for length in partition if length > c) for c in range(partition[0])] if partition else []
    return [[partition[r] - c + columns[c] - r - 1 for c in range(partition[r])] for r in range(len(partition))]


def weyl_dimension(partition: Sequence[int], n: int) -> int:
    """dim V_λ of GL_n: the product over cells of (n + content) / hook."""
    partition = _check_partition(partition)
    hooks = hook_lengths(partition)
    value = Fraction(1)
    for r, length in enumerate(partition):
        for c in range(length):
            value *= Fraction(n + c - r, hooks[r][c])
    return int(value)


def young_projector(partition: Sequence[int], n: int) -> SparseMatrix:
    """(1/∏hooks) · (row symmetrizer)(signed column antisymmetrizer) acting on V^{⊗k} by place permutations."""
    partition = _check_partition(partition)
    k = sum(partition)
    rows = _tableau(partition)
    columns = [[row[c] for row in rows if c < len(row)] for c in range(partition[0])] if partition else []
    symmetrizer: Dict[Permutation, int] = {}
    for r in _subgroup(rows, k):
        for c in _subgroup(columns, k):
            p = _compose(r, c)
            symmetrizer[p] = symmetrizer.get(p, 0) + _sign(c)
    scale = Fraction(1, prod(h for row in hook_lengths(partition) for h in row)) if partition else Fraction(1)

    indices = _index_tuples(n, k)
    position = {I: a for a, I in enumerate(indices)}
    projector = SparseMatrix(len(indices), len(indices))
    for p, coeff in symmetrizer.items():
        if not coeff:
            continue
        inverse = [0] * k
        for x, y in enumerate(p):
            inverse[y] = x
        for b, J in enumerate(indices):
            image = tuple(J[inverse[x]] for x in range(k))
            projector.add(position[image], b, scale * coeff)
    return projector


def _character_sum(spec: CoinvariantSpec, chunk: List[IntMatrix], young: Optional[SparseMatrix]) -> Fraction:
    total = Fraction(0)
    for g in chunk:
        chi = spec.character(g)
        if young is None:
            total += chi * sum(g.entries[i][i] for i in range(g.rows)) ** spec.k
        else:
            rho = tensor_power(g, spec.k)
            total += chi * sum(value * young.get(b, a) for (a, b), value in rho.items())
    return total


def coinvariant_dim(spec: CoinvariantSpec, n_jobs: int = 1) -> int:
    """dim (Q_χ ⊗ W)_G with W = V^{⊗k}, or V_λ when a partition is given."""
    elements = spec.elements()
    young = young_projector(spec.partition, spec.n) if spec.partition is not None else None
    if n_jobs == 1 or len(elements) < 2 * max(n_jobs, 1):
        total = _character_sum(spec, elements, young)
    else:
        size = -(-len(elements) // n_jobs)
        chunks = [elements[i:i + size] for i in range(0, len(elements), size)]
        total = sum(Parallel(n_jobs=n_jobs)(delayed(_character_sum)(spec, c, young) for c in chunks), Fraction(0))
    value = total / len(elements)
    if value.denominator != 1:
        raise RuntimeError(f"Averaged character {value} is not an integer; the twist is not a character")
    logger.info(f"Coinvariants of order-{len(elements)} group on k={spec.k}: dimension {value}")
    return int(value)


def averaging_projector(spec: CoinvariantSpec) -> SparseMatrix:
    """P = (1/|G|) Σ χ(g) ρ(g), composed with the Young projector when a partition is given."""
    elements = spec.elements()
    size = spec.n ** spec.k
    P = SparseMatrix(size, size)
    for g in elements:
        chi = spec.character(g)
        for (a, b), value in tensor_power(g, spec.k).items():
            P.add(a, b, Fraction(chi * value, len(elements)))
    if spec.partition is not None:
        P = P @ young_projector(spec.partition, spec.n)
    return P


def projector_rank(spec: CoinvariantSpec, work_bound: int = DEFAULT_WORK_BOUND) -> Optional[int]:
    """Rank of the materialized averaging projector, or None above the work bound |G|·n^{2k}."""
    work = len(spec.elements()) * spec.n ** (2 * spec.k)
    if work > work_bound:
        logger.info(f"Skipping projector materialization: work {work} exceeds bound {work_bound}")
        return None
    return averaging_projector(spec).rank()


def assembled_coinvariant_dim(
    simplices: Sequence[LineSetSimplex], k: int = 0, group: str = "SL", partition: Optional[Sequence[int]] = None
) -> Tuple[int, int]:
    """Σ over orbit representatives of the twisted stabilizer coinvariants; returns (dimension, orbit count)."""
    orbits = orbit_decomposition(list(simplices), group)
    total = 0
    for orbit in orbits:
        representative = orbit[0]
        spec = CoinvariantSpec(
            stabilizer(representative, group), k, representative, "all",
            tuple(partition) if partition is not None else None,
        )
        total += coinvariant_dim(spec)
    return total, len(orbits)
