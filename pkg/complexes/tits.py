"""Direct summands of Z^n, the truncated Tits poset and the span map from BA'_n."""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from exactlin import IntMatrix, rational_rank, saturate
from lattice import LineSetSimplex, in_coordinates, in_span

from complexes.bounded import BoundedComplex

logger = logging.getLogger(__name__)


class FullSpan(ValueError):
    """Raised when a simplex spans all of Z^n, where the span map is undefined."""


@dataclass(frozen=True)
class Summand:
    """A direct summand of Z^ambient, stored by the HNF of a basis."""
    basis: Tuple[Tuple[int, ...], ...]
    ambient: int

    @classmethod
    def span_of(cls, vectors: Sequence[Sequence[int]], ambient: int) -> "Summand":
        """Saturation of the span of the given vectors."""
        saturated = saturate(IntMatrix.from_rows(vectors, ambient))
        return cls(saturated.entries, ambient)

    @classmethod
    def zero(cls, ambient: int) -> "Summand":
        return cls((), ambient)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_proper(self) -> bool:
        return 0 < self.rank < self.ambient

    def contains_vector(self, vector: Sequence[int]) -> bool:
        return in_span(vector, self.basis)

    def is_subsummand_of(self, other: "Summand") -> bool:
        return self.rank <= other.rank and all(other.contains_vector(b) for b in self.basis)

    def sort_key(self) -> tuple:
        return self.rank, self.basis

    def to_json(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.basis]


def span_map(s: LineSetSimplex) -> Summand:
    """F(s) = saturated Span_Z(s) for a simplex of BA'_n."""
    vectors = s.vectors()
    if rational_rank(vectors) >= s.ambient_dim:
        raise FullSpan(f"{[l.rep for l in s.lines]} spans Z^{s.ambient_dim}")
    return Summand.span_of(vectors, s.ambient_dim)


@dataclass(frozen=True)
class TitsPosetTruncation:
    """Proper nonzero summands reached by the span map, ordered by inclusion."""
    ambient: int
    elements: Tuple[Summand, ...]

    def __post_init__(self):
        for element in self.elements:
            if not element.is_proper:
                raise ValueError(f"Summand of rank {element.rank} is not proper and nonzero in Z^{self.ambient}")
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements), key=Summand.sort_key)))

    @classmethod
    def from_complex(cls, X: BoundedComplex) -> "TitsPosetTruncation":
        elements = {span_map(s) for s in X.all_simplices()}
        logger.info(f"Tits truncation of {X.label}: {len(elements)} summands")
        return cls(X.spec.ambient_dim, tuple(elements))

    def below(self, V: Summand) -> List[Summand]:
        return [W for W in self.elements if W.is_subsummand_of(V)]

    def heights(self) -> Dict[Summand, int]:
        """Length of the longest chain ending at each element (rank − 1 in the full poset)."""
        height: Dict[Summand, int] = {}
        for V in self.elements:
            lower = [height[W] for W in height if W.rank < V.rank and W.is_subsummand_of(V)]
            height[V] = 1 + max(lower) if lower else 0
        return height

    def height(self, V: Summand) -> int:
        return self.heights()[V]

    def relations(self) -> List[Tuple[int, int]]:
        """Strict inclusions as index pairs (i, j) with elements[i] < elements[j]."""
        pairs = []
        for j, V in enumerate(self.elements):
            for i, W in enumerate(self.elements[:j]):
                if W.rank < V.rank and W.is_subsummand_of(V):
                    pairs.append((i, j))
        return pairs


def fiber(V: Summand, X: BoundedComplex) -> List[LineSetSimplex]:
    """F_{<=V}: simplices of X whose span lies in V."""
    if V.rank == 0:
        return []
    return [s for s in X.all_simplices() if all(V.contains_vector(v) for v in s.vectors())]


def fiber_in_coordinates(V: Summand, X: BoundedComplex) -> List[LineSetSimplex]:
    """The fiber re-expressed in coordinates of V's HNF basis, as simplices of BA_rank(V)."""
    return [in_coordinates(s, V.basis) for s in fiber(V, X)]
