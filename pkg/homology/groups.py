"""Finite stabilizers of frames and augmented frames, orbit witnesses and orientation characters."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from math import prod
from typing import Iterator, List, Optional, Sequence, Tuple

from exactlin import IntMatrix, inverse_unimodular, rational_rank
from exactlin.matrices import integer_det
from lattice import (
    LineSetSimplex,
    SimplexKind,
    additive_orientation,
    classify,
    is_partial_frame,
    line_of,
    permutation_sign,
)

logger = logging.getLogger(__name__)

GROUP_KINDS = ("GL", "SL")


class NotFullSpan(ValueError):
    pass


class NotAStabilizer(ValueError):
    pass


class NoWitness(ValueError):
    pass


@dataclass(frozen=True)
class FiniteMatrixGroup:
    degree: int
    elements: Tuple[IntMatrix, ...]
    generators: Tuple[IntMatrix, ...] = ()
    label: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: IntMatrix) -> bool:
        return g in set(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def check_closure(self) -> bool:
        """Identity, products and inverses all stay inside the element list."""
        members = set(self.elements)
        if IntMatrix.identity(self.degree) not in members:
            return False
        return all(a @ b in members for a in self.elements for b in self.elements) and all(
            inverse_unimodular(g) in members for g in self.elements
        )

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "degree": self.degree,
            "order": self.order,
            "elements": [[[str(x) for x in row] for row in g.entries] for g in self.elements],
        }


def _check_kind(group: str):
    if group not in GROUP_KINDS:
        raise ValueError(f"group must be one of {GROUP_KINDS}, got {group!r}")


def _structure(s: LineSetSimplex) -> Tuple[List[Tuple[int, ...]], bool]:
    """A basis drawn from s, and whether s is additive (then the basis starts v1, v2 with v1 + v2 ∈ s)."""
    if s.n < 2:
        raise NotFullSpan(f"Stabilizers need n >= 2, got n = {s.n}")
    if s.m != 0:
        raise NotFullSpan(f"Stabilizers are taken in GL_n(Z) of simplices with m = 0, got m = {s.m}")
    vectors = s.vectors()
    if rational_rank(vectors, s.ambient_dim) < s.ambient_dim:
        raise NotFullSpan(f"{[l.rep for l in s.lines]} does not span Q^{s.ambient_dim}")
    if len(s) == s.n and is_partial_frame(s):
        return [l.rep for l in s.lines], False
    if len(s) == s.n + 1 and classify(s).kind is SimplexKind.INTERNALLY_ADDITIVE:
        v0, v1, v2 = additive_orientation(s)
        core = {line_of(v) for v in (v0, v1, v2)}
        return [v1, v2] + [l.rep for l in s.lines if l not in core], True
    raise NotFullSpan(f"{[l.rep for l in s.lines]} is neither a frame nor an augmented frame")


def _mappings(a: LineSetSimplex, b: LineSetSimplex, group: str) -> Iterator[IntMatrix]:
    """Every g with g·a = b as line sets, in a fixed order."""
    basis, additive = _structure(a)
    n = len(basis)
    if len(b) != len(a) or b.n != a.n or b.m != 0:
        return
    source = IntMatrix.from_columns(basis, n)
    source_inverse = inverse_unimodular(source)
    source_det = source.det()
    targets = b.lines
    for images in permutations(targets, n):
        leftover = [l for l in targets if l not in images]
        image_det = integer_det([l.rep for l in images]) * source_det
        for s1, s2 in product((1, -1), repeat=2):
            if additive:
                total = tuple(s1 * x + s2 * y for x, y in zip(images[0].rep, images[1].rep))
                if line_of(total) != leftover[0]:
                    continue
            base_det = s1 * s2 * image_det
            for rest in product((1, -1), repeat=n - 2):
                if group == "SL" and base_det * prod(rest) != 1:
                    continue
                signs = (s1, s2) + rest
                columns = [tuple(sign * x for x in l.rep) for sign, l in zip(signs, images)]
                yield IntMatrix.from_columns(columns, n) @ source_inverse


@lru_cache(maxsize=64)
def stabilizer(s: LineSetSimplex, group: str = "GL") -> FiniteMatrixGroup:
    """Setwise stabilizer of a frame or augmented frame of Z^n inside GL_n(Z) or SL_n(Z)."""
    _check_kind(group)
    elements = tuple(_mappings(s, s, group))
    logger.debug(f"{group} stabilizer of {[l.rep for l in s.lines]} has order {len(elements)}")
    return FiniteMatrixGroup(s.n, elements, (), f"{group} stabilizer")


def orbit_witness(a: LineSetSimplex, b: LineSetSimplex, group: str = "GL") -> Optional[IntMatrix]:
    _check_kind(group)
    if a == b:
        return IntMatrix.identity(a.ambient_dim)
    _, additive = _structure(a)
    try:
        if _structure(b)[1] != additive:
            return None
    except ValueError:
        return None
    return next(_mappings(a, b, group), None)


def orbit_decomposition(simplices: Sequence[LineSetSimplex], group: str = "GL") -> List[List[LineSetSimplex]]:
    """Partition full-span simplices into orbits; each orbit starts with its representative."""
    orbits: List[List[LineSetSimplex]] = []
    for s in simplices:
        for orbit in orbits:
            if orbit_witness(orbit[0], s, group) is not None:
                orbit.append(s)
                break
        else:
            orbits.append([s])
    logger.info(f"{len(simplices)} simplices fall into {len(orbits)} {group}-orbits")
    return orbits


def orientation_character(g: IntMatrix, s) -> int:
    """Sign of the permutation g induces on the ordered vertices of s (a simplex or a list of vectors)."""
    reps = [l.rep for l in s.lines] if isinstance(s, LineSetSimplex) else [tuple(v) for v in s]
    lines = [line_of(v) for v in reps]
    position = {l: i for i, l in enumerate(lines)}
    images = [line_of(g.apply(v)) for v in reps]
    if set(images) != set(lines):
        raise NotAStabilizer(f"{g.entries} does not stabilize {reps}")
    return permutation_sign([position[l] for l in images])


def phi_witness(sigma: LineSetSimplex, indices: Sequence[int] = (), orientation: Optional[Sequence[Sequence[int]]] = None) -> IntMatrix:
    """φ ∈ SL_n(Z) fixing v_i for the given 1-based indices, stabilizing sigma and reversing its orientation.

    sigma is read as (v0, v1, ..., vn) with v0 = v1 + v2.
    """
    n, k = sigma.n, len(indices)
    if n < 3 + k:
        raise NoWitness(f"Need n >= 3 + k, got n = {n}, k = {k}")
    if any(not 1 <= i <= n for i in indices):
        raise NoWitness(f"Indices {tuple(indices)} must lie in 1..{n}")
    if orientation is None:
        basis, additive = _structure(sigma)
        if not additive:
            raise NoWitness(f"{[l.rep for l in sigma.lines]} is not an augmented frame")
    else:
        basis = [tuple(v) for v in orientation[1:]]
        if tuple(orientation[0]) != tuple(x + y for x, y in zip(basis[0], basis[1])):
            raise NoWitness("Orientation must satisfy v0 = v1 + v2")

    free = [j for j in range(3, n + 1) if j not in indices]
    images = {i: basis[i - 1] for i in range(1, n + 1)}
    if len(free) >= 2:
        j, j_prime = free[0], free[1]
        images[j] = tuple(-x for x in basis[j_prime - 1])
        images[j_prime] = basis[j - 1]
    else:
        j = free[0]
        images[1], images[2] = basis[1], basis[0]
        images[j] = tuple(-x for x in basis[j - 1])
    T = IntMatrix.from_columns([images[i] for i in range(1, n + 1)], n)
    return T @ inverse_unimodular(IntMatrix.from_columns(basis, n))
