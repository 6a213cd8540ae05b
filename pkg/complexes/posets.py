"""Abstract simplicial complexes, barycentric (poset) realizations and Cayley-graph balls."""
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, FrozenSet, Hashable, Iterable, List, Sequence, Tuple

import networkx as nx

from lattice import line_of


@dataclass(frozen=True)
class AbstractComplex:
    """Simplicial complex on labelled vertices; simplices are sorted vertex-index tuples per dimension."""
    vertices: Tuple[Hashable, ...]
    simplices: Tuple[Tuple[Tuple[int, ...], ...], ...]
    label: str = ""

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[Hashable]], label: str = "") -> "AbstractComplex":
        facets = [tuple(f) for f in facets]
        vertices = sorted({v for f in facets for v in f}, key=repr)
        index = {v: i for i, v in enumerate(vertices)}
        closure = set()
        for f in facets:
            ids = sorted(index[v] for v in f)
            for size in range(1, len(ids) + 1):
                closure.update(combinations(ids, size))
        return cls.from_index_sets(tuple(vertices), closure, label)

    @classmethod
    def from_index_sets(cls, vertices: Tuple[Hashable, ...], simplices: Iterable[Tuple[int, ...]], label: str = "") -> "AbstractComplex":
        layers: Dict[int, List[Tuple[int, ...]]] = {}
        for s in simplices:
            layers.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
        top = max(layers) if layers else -1
        return cls(vertices, tuple(tuple(sorted(set(layers.get(d, ())))) for d in range(top + 1)), label)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @property
    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(layer) for layer in self.simplices)

    def faces(self) -> List[FrozenSet[int]]:
        return [frozenset(s) for layer in self.simplices for s in layer]

    def subcomplex(self, keep: Iterable[Tuple[int, ...]]) -> "AbstractComplex":
        keep = {tuple(sorted(s)) for s in keep}
        return AbstractComplex.from_index_sets(self.vertices, (s for layer in self.simplices for s in layer if s in keep))


@dataclass(frozen=True)
class PosetRealization:
    """Barycentric subdivision: vertices are the simplices of the source, simplices its chains."""
    complex: AbstractComplex
    heights: Tuple[int, ...]

    def height(self, vertex: int) -> int:
        return self.heights[vertex]


def poset_realization(X) -> PosetRealization:
    """Realize the face poset of X (anything exposing faces()) as the complex of its chains."""
    faces = sorted(set(X.faces()), key=lambda f: (len(f), sorted(map(repr, f))))
    above: List[List[int]] = [[j for j in range(len(faces)) if faces[i] < faces[j]] for i in range(len(faces))]

    chains: List[Tuple[int, ...]] = []
    stack = [(i,) for i in range(len(faces))]
    while stack:
        chain = stack.pop()
        chains.append(chain)
        stack.extend(chain + (j,) for j in above[chain[-1]])

    realization = AbstractComplex.from_index_sets(tuple(faces), chains, "poset realization")
    return PosetRealization(realization, tuple(len(f) - 1 for f in faces))


def one_skeleton(X) -> nx.Graph:
    """1-skeleton of a bounded complex as a networkx graph on its lines."""
    graph = nx.Graph()
    graph.add_nodes_from(X.vertices)
    if X.dimension >= 1:
        graph.add_edges_from(tuple(s.lines) for s in X.simplices[1])
    return graph


def cayley_ball(m: int, ball: int) -> nx.Graph:
    """Sup-norm ball of radius `ball` in the Cayley graph of Z^m with generators e_1..e_m."""
    graph = nx.Graph()
    points = list(product(range(-ball, ball + 1), repeat=m))
    graph.add_nodes_from(points)
    for a in points:
        for i in range(m):
            b = a[:i] + (a[i] + 1,) + a[i + 1:]
            if b[i] <= ball:
                graph.add_edge(a, b)
    return graph


def cayley_vertex(a: Sequence[int]):
    """a ↦ ⟨a_1 e_1 + ... + a_m e_m + e_(m+1)⟩, the vertex of BA_1^m indexed by a ∈ Z^m."""
    return line_of(tuple(a) + (1,))
