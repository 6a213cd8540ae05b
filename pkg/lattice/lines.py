"""Lines, partial frames, partial augmented frames and the simplex trichotomy.

A simplex always carries its ambient context (n, m): the ambient lattice is Z^(m+n)
and e_1, ..., e_m are implicit frame lines that never appear as vertices. The same
line set can therefore classify differently in BA_n^m and in BA_(n+m)^0.
"""
from dataclasses import dataclass
from enum import Enum
from functools import reduce, total_ordering
from itertools import combinations
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from exactlin import IntMatrix, coordinates_in, is_summand_basis, rational_rank


class NotPrimitive(ValueError):
    """Raised for the zero vector or a vector whose coordinates share a factor."""


class NotASimplex(ValueError):
    """Raised when a line set is not a valid simplex in its context."""


def unit_vector(i: int, dim: int) -> Tuple[int, ...]:
    """e_(i+1) in Z^dim (zero-based index)."""
    return tuple(int(j == i) for j in range(dim))


def primitive_part(vector: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """Split v = content * primitive; content is positive."""
    content = reduce(gcd, (abs(x) for x in vector), 0)
    if content == 0:
        raise NotPrimitive("The zero vector has no primitive part")
    return tuple(x // content for x in vector), content


def _canonical_sign(vector: Sequence[int]) -> int:
    for x in vector:
        if x:
            return 1 if x > 0 else -1
    return 0


@total_ordering
@dataclass(frozen=True)
class Line:
    """The line ⟨v⟩ = {v, −v}; rep is the representative with first nonzero coordinate positive.

    Lines are ordered by comparing representatives from the last coordinate backwards.
    """
    rep: Tuple[int, ...]

    def __post_init__(self):
        if _canonical_sign(self.rep) != 1:
            raise NotPrimitive(f"{self.rep} is not in canonical form")
        if reduce(gcd, self.rep, 0) != 1:
            raise NotPrimitive(f"{self.rep} is not primitive")

    def __lt__(self, other: "Line") -> bool:
        return self.rep[::-1] < other.rep[::-1]

    @property
    def dim(self) -> int:
        return len(self.rep)

    def negated(self) -> Tuple[int, ...]:
        return tuple(-x for x in self.rep)

    def sup_norm(self) -> int:
        return max(abs(x) for x in self.rep)

    def to_json(self) -> List[str]:
        return [str(x) for x in self.rep]

    @classmethod
    def from_json(cls, payload: Sequence[str]) -> "Line":
        return line_of([int(x) for x in payload])


def line_of(vector: Sequence[int]) -> Line:
    """Canonical line through a primitive vector."""
    vector = tuple(int(x) for x in vector)
    sign = _canonical_sign(vector)
    if sign == 0:
        raise NotPrimitive("The zero vector spans no line")
    if reduce(gcd, vector, 0) != 1:
        raise NotPrimitive(f"{vector} is not primitive")
    return Line(vector if sign > 0 else tuple(-x for x in vector))


def signed_relation(a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Signs (s, t) with a = s·b + t·c, if ±a ± b ± c = 0 has a solution."""
    for s in (1, -1):
        for t in (1, -1):
            if all(x == s * y + t * z for x, y, z in zip(a, b, c)):
                return s, t
    return None


@dataclass(frozen=True)
class LineSetSimplex:
    """A finite sorted set of lines in Z^(m+n) with implicit lines e_1..e_m."""
    lines: Tuple[Line, ...]
    n: int
    m: int = 0

    def __post_init__(self):
        ordered = tuple(sorted(set(self.lines)))
        if len(ordered) != len(self.lines):
            raise NotASimplex(f"Repeated lines in {[l.rep for l in self.lines]}")
        for line in ordered:
            if line.dim != self.n + self.m:
                raise NotASimplex(f"Line {line.rep} does not live in Z^{self.n + self.m}")
            if self.m and not any(line.rep[self.m:]):
                raise NotASimplex(f"Line {line.rep} lies in Span(e_1..e_{self.m})")
        object.__setattr__(self, "lines", ordered)

    @classmethod
    def of(cls, vectors: Iterable[Sequence[int]], n: int, m: int = 0) -> "LineSetSimplex":
        return cls(tuple(line_of(v) for v in vectors), n, m)

    @property
    def ambient_dim(self) -> int:
        return self.n + self.m

    @property
    def dim(self) -> int:
        return len(self.lines) - 1

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __contains__(self, line: Line) -> bool:
        return line in self.lines

    def vectors(self) -> List[Tuple[int, ...]]:
        return [line.rep for line in self.lines]

    def implicit_vectors(self) -> List[Tuple[int, ...]]:
        return [unit_vector(i, self.ambient_dim) for i in range(self.m)]

    def with_lines(self, lines: Iterable[Line]) -> "LineSetSimplex":
        return LineSetSimplex(tuple(set(self.lines) | set(lines)), self.n, self.m)

    def without(self, lines: Iterable[Line]) -> "LineSetSimplex":
        drop = set(lines)
        return LineSetSimplex(tuple(l for l in self.lines if l not in drop), self.n, self.m)

    def is_face_of(self, other: "LineSetSimplex") -> bool:
        return set(self.lines) <= set(other.lines)

    def to_json(self) -> dict:
        return {"lines": [line.to_json() for line in self.lines], "n": self.n, "m": self.m}

    @classmethod
    def from_json(cls, payload: dict) -> "LineSetSimplex":
        return cls(tuple(Line.from_json(l) for l in payload["lines"]), payload["n"], payload.get("m", 0))


class SimplexKind(Enum):
    STANDARD = "standard"
    INTERNALLY_ADDITIVE = "internally_additive"
    EXTERNALLY_ADDITIVE = "externally_additive"


@dataclass(frozen=True)
class SimplexClass:
    kind: SimplexKind
    core: Tuple[Line, ...] = ()
    # index i (zero-based) of the implicit e_i in an external core
    external_index: Optional[int] = None

    @property
    def is_additive(self) -> bool:
        return self.kind != SimplexKind.STANDARD


def is_partial_frame(s: LineSetSimplex) -> bool:
    return is_summand_basis(s.implicit_vectors() + s.vectors(), s.ambient_dim)


def is_partial_augmented_frame(s: LineSetSimplex) -> bool:
    if is_partial_frame(s):
        return True
    implicit = s.implicit_vectors()
    for l0 in s.lines:
        rest = s.without([l0])
        if not is_partial_frame(rest):
            continue
        for a, b in combinations(rest.vectors() + implicit, 2):
            if signed_relation(l0.rep, a, b):
                return True
    return False


def classify(s: LineSetSimplex) -> SimplexClass:
    """Standard, internally additive (3-line core) or externally additive (2-line core)."""
    if not s.lines or not is_partial_augmented_frame(s):
        raise NotASimplex(f"{[l.rep for l in s.lines]} is not a partial augmented frame (m={s.m})")
    if is_partial_frame(s):
        return SimplexClass(SimplexKind.STANDARD)
    for a, b, c in combinations(s.lines, 3):
        if signed_relation(a.rep, b.rep, c.rep):
            return SimplexClass(SimplexKind.INTERNALLY_ADDITIVE, (a, b, c))
    for a, b in combinations(s.lines, 2):
        for i, e in enumerate(s.implicit_vectors()):
            if signed_relation(a.rep, b.rep, e):
                return SimplexClass(SimplexKind.EXTERNALLY_ADDITIVE, (a, b), external_index=i)
    raise NotASimplex(f"No additive core found in {[l.rep for l in s.lines]}")


def in_span(vector: Sequence[int], spanning: Sequence[Sequence[int]]) -> bool:
    """Rational span membership; for summands this is also integral membership."""
    if not spanning:
        return not any(vector)
    return rational_rank(list(spanning) + [vector]) == rational_rank(list(spanning))


def transport(s: LineSetSimplex, g: IntMatrix, n: Optional[int] = None, m: Optional[int] = None) -> LineSetSimplex:
    """Image g·s, optionally re-read in another (n, m) context of the same ambient rank."""
    n = s.n if n is None else n
    m = s.m if m is None else m
    return LineSetSimplex(tuple(line_of(g.apply(line.rep)) for line in s.lines), n, m)


def in_coordinates(s: LineSetSimplex, basis: Sequence[Sequence[int]]) -> LineSetSimplex:
    """Re-express s in the coordinates of the summand spanned by basis (m = 0 context)."""
    vectors = s.implicit_vectors() + s.vectors()
    return LineSetSimplex.of([coordinates_in(basis, v) for v in vectors], len(basis), 0)


def standard_frame(n: int) -> LineSetSimplex:
    return LineSetSimplex.of([unit_vector(i, n) for i in range(n)], n)


def standard_augmented_frame(n: int) -> LineSetSimplex:
    """{⟨e_1⟩, …, ⟨e_n⟩, ⟨e_1 + e_2⟩}"""
    if n < 2:
        raise NotASimplex("Augmented frames need n >= 2")
    e1_plus_e2 = tuple(int(i < 2) for i in range(n))
    return LineSetSimplex.of([unit_vector(i, n) for i in range(n)] + [e1_plus_e2], n)


def permutation_sign(sequence: Sequence) -> int:
    """Parity (±1) of the permutation that sorts a sequence of distinct items."""
    items = list(sequence)
    inversions = sum(1 for i in range(len(items)) for j in range(i + 1, len(items)) if items[j] < items[i])
    return -1 if inversions % 2 else 1


def additive_orientation(s: LineSetSimplex) -> Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
    """Core representatives (v0, v1, v2) of an internally additive simplex with v0 = v1 + v2.

    v0 is the canonical rep of the largest core line; v1 < v2 are the other two core
    lines with signs adjusted.
    """
    kind = classify(s)
    if kind.kind is not SimplexKind.INTERNALLY_ADDITIVE:
        raise NotASimplex(f"{[l.rep for l in s.lines]} has no internal additive core")
    a, b, c = kind.core
    s1, s2 = signed_relation(c.rep, a.rep, b.rep)
    return c.rep, tuple(s1 * x for x in a.rep), tuple(s2 * x for x in b.rep)
