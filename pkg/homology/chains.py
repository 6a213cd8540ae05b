"""Simplicial chain complexes over Z with homology through Smith normal form (or rank over Q)."""
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from exactlin import SparseMatrix, snf

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainComplexData:
    """C_0 <- C_1 <- ... ; boundaries[d] is the matrix of ∂_d : C_d -> C_(d-1) for d >= 1."""
    dims: Tuple[int, ...]
    boundaries: Tuple[SparseMatrix, ...]
    bases: Tuple[Tuple[tuple, ...], ...] = ()
    label: str = ""

    def __post_init__(self):
        if len(self.boundaries) != len(self.dims):
            raise ValueError(f"Expected {len(self.dims)} boundary slots, got {len(self.boundaries)}")
        for d in range(1, len(self.dims)):
            B = self.boundaries[d]
            if (B.rows, B.cols) != (self.dims[d - 1], self.dims[d]):
                raise ValueError(f"∂_{d} has shape {B.rows}x{B.cols}, expected {self.dims[d - 1]}x{self.dims[d]}")
        for d in range(2, len(self.dims)):
            if not (self.boundaries[d - 1] @ self.boundaries[d]).is_zero():
                raise ValueError(f"∂_{d - 1}∂_{d} != 0 in {self.label or 'chain complex'}")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def boundary(self, d: int) -> SparseMatrix:
        """∂_d, with zero maps outside the stored range."""
        if 1 <= d <= self.top:
            return self.boundaries[d]
        rows = self.dims[d - 1] if 1 <= d <= self.top + 1 else 0
        cols = self.dims[d] if 0 <= d <= self.top else 0
        return SparseMatrix(rows, cols)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.dims))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "dims": list(self.dims),
            "boundaries": {str(d): self.boundaries[d].to_json() for d in range(1, len(self.dims))},
        }


def _layers(X) -> List[List[tuple]]:
    """Simplices of X per dimension as ordered vertex tuples (the orientation of each cell)."""
    layers = []
    for layer in X.simplices:
        layers.append([tuple(s.lines) if hasattr(s, "lines") else tuple(s) for s in layer])
    return layers


def _assemble(layers: List[List[tuple]], label: str) -> ChainComplexData:
    index = [{cell: i for i, cell in enumerate(layer)} for layer in layers]
    boundaries = [SparseMatrix(0, len(layers[0]))] if layers else []
    for d in range(1, len(layers)):
        B = SparseMatrix(len(layers[d - 1]), len(layers[d]))
        for j, cell in enumerate(layers[d]):
            for i in range(len(cell)):
                face = cell[:i] + cell[i + 1:]
                row = index[d - 1].get(face)
                if row is not None:
                    B.add(row, j, (-1) ** i)
        boundaries.append(B)
    cc = ChainComplexData(
        tuple(len(layer) for layer in layers),
        tuple(boundaries),
        tuple(tuple(layer) for layer in layers),
        label,
    )
    logger.debug(f"Chain complex {label}: dims {cc.dims}")
    return cc


def chain_complex(X) -> ChainComplexData:
    """Oriented simplicial chains of an AbstractComplex or a BoundedComplex."""
    return _assemble(_layers(X), getattr(X, "label", ""))


def relative_chain_complex(X, A) -> ChainComplexData:
    """C_*(X, A) = C_*(X) / C_*(A) for a subcomplex A of X, on the cells of X outside A."""
    inside = {frozenset(cell) for layer in _layers(A) for cell in layer}
    layers = [[cell for cell in layer if frozenset(cell) not in inside] for layer in _layers(X)]
    while layers and not layers[-1]:
        layers.pop()
    label = f"({getattr(X, 'label', 'X')}, {getattr(A, 'label', 'A')})"
    return _assemble(layers, label)


def homology(cc: ChainComplexData, d: int, ring: str = "Z", reduced: bool = False) -> Tuple[int, List[int]]:
    """(Betti number, invariant factors > 1 of the torsion) of H_d.

    Over Q the torsion list is always empty. `reduced` uses the augmentation C_0 -> Z.
    """
    if ring not in ("Z", "Q"):
        raise ValueError(f"ring must be 'Z' or 'Q', got {ring!r}")
    if d < 0 or d > cc.top:
        return 0, []
    incoming = cc.boundary(d + 1)
    outgoing = cc.boundary(d)
    rank_out = outgoing.rank() if outgoing.rows and outgoing.cols else 0
    if ring == "Z" and incoming.rows and incoming.cols:
        diagonal = snf(incoming.to_int_matrix()).diagonal
        rank_in = len(diagonal)
        torsion = [x for x in diagonal if x > 1]
    else:
        rank_in = incoming.rank() if incoming.rows and incoming.cols else 0
        torsion = []
    betti = cc.dims[d] - rank_out - rank_in
    if reduced and d == 0 and cc.dims[0]:
        betti -= 1
    return betti, torsion


def homology_profile(cc: ChainComplexData, ring: str = "Z", reduced: bool = False) -> List[Dict[str, object]]:
    return [
        {"degree": d, "betti": b, "torsion": t}
        for d in range(cc.top + 1)
        for b, t in [homology(cc, d, ring, reduced)]
    ]
