"""Bounded truncations of B_n^m, BA_n^m and BA'_n with links, PLinks and link isomorphisms.

A bounded complex is the FULL subcomplex on the lines whose canonical representative
has sup-norm at most `ball`, so membership of a simplex only depends on its own lines.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, reduce
from itertools import product
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from exactlin import IntMatrix, inverse_unimodular, rational_rank, unimodular_complete
from lattice import (
    Line,
    additive_orientation,
    LineSetSimplex,
    SimplexKind,
    classify,
    in_span,
    is_partial_augmented_frame,
    is_partial_frame,
    signed_relation,
    unit_vector,
)

logger = logging.getLogger(__name__)


class InvalidSpec(ValueError):
    """Raised for (n, m, ball, variant) combinations that define no complex."""


class SimplexNotInComplex(ValueError):
    pass


class NotStandard(ValueError):
    pass


class Variant(Enum):
    B = "B"
    BA = "BA"
    BAPRIME = "BAprime"


@dataclass(frozen=True)
class BoundedComplexSpec:
    n: int
    m: int
    ball: int
    variant: Variant

    def __post_init__(self):
        if not isinstance(self.variant, Variant):
            try:
                object.__setattr__(self, "variant", Variant(self.variant))
            except ValueError:
                raise InvalidSpec(f"Unknown variant {self.variant!r}")
        if self.ball < 1:
            raise InvalidSpec(f"ball must be >= 1, got {self.ball}")
        if self.n < 0 or self.m < 0:
            raise InvalidSpec(f"n and m must be nonnegative, got n={self.n}, m={self.m}")
        if self.variant is Variant.B and self.n + self.m < 1:
            raise InvalidSpec("B_0^0 has no ambient lattice")
        if self.variant is Variant.BA and (self.n < 1 or self.m + self.n < 2):
            raise InvalidSpec(f"BA_n^m is undefined for n={self.n}, m={self.m} (needs n >= 1 and m+n >= 2)")
        if self.variant is Variant.BAPRIME and (self.m != 0 or self.n < 2):
            raise InvalidSpec(f"BA'_n needs m = 0 and n >= 2, got n={self.n}, m={self.m}")

    @property
    def ambient_dim(self) -> int:
        return self.n + self.m

    @property
    def top_dim(self) -> int:
        """Largest possible simplex dimension."""
        if self.variant is Variant.BA:
            return self.n
        return self.n - 1

    @property
    def label(self) -> str:
        return f"{self.variant.value}_{self.n}^{self.m}(ball={self.ball})"

    def admits(self, s: LineSetSimplex) -> bool:
        """Membership predicate of the unbounded complex."""
        if self.variant is Variant.B:
            return is_partial_frame(s)
        if not is_partial_augmented_frame(s):
            return False
        if self.variant is Variant.BAPRIME:
            return rational_rank(s.vectors()) < self.n
        return True

    def contains(self, s: LineSetSimplex) -> bool:
        """Membership predicate of the bounded complex."""
        if (s.n, s.m) != (self.n, self.m) or not s.lines:
            return False
        return all(line.sup_norm() <= self.ball for line in s.lines) and self.admits(s)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "ball": self.ball, "variant": self.variant.value}

    @classmethod
    def from_json(cls, payload: dict) -> "BoundedComplexSpec":
        return cls(int(payload["n"]), int(payload["m"]), int(payload["ball"]), Variant(payload["variant"]))

    def content_hash(self) -> str:
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()


def simplex_key(s: LineSetSimplex) -> tuple:
    return tuple(line.rep[::-1] for line in s.lines)


@dataclass(frozen=True)
class BoundedComplex:
    """Finite simplicial complex of line sets, stored as sorted per-dimension layers."""
    spec: BoundedComplexSpec
    vertices: Tuple[Line, ...]
    simplices: Tuple[Tuple[LineSetSimplex, ...], ...]
    label: str = ""

    @classmethod
    def assemble(cls, spec: BoundedComplexSpec, simplices: Iterable[LineSetSimplex], label: str = "") -> "BoundedComplex":
        layers: Dict[int, set] = {}
        for s in simplices:
            if s.lines:
                layers.setdefault(s.dim, set()).add(s)
        top = max(layers) if layers else -1
        ordered = tuple(tuple(sorted(layers.get(d, ()), key=simplex_key)) for d in range(top + 1))
        vertices = tuple(s.lines[0] for s in ordered[0]) if ordered else ()
        return cls(spec, vertices, ordered, label or spec.label)

    @classmethod
    def from_simplices(cls, spec: BoundedComplexSpec, simplices: Iterable[LineSetSimplex], label: str = "") -> "BoundedComplex":
        """Downward closure of the given simplices."""
        closure = set()
        for s in simplices:
            lines = s.lines
            for mask in range(1, 1 << len(lines)):
                face = tuple(lines[i] for i in range(len(lines)) if mask >> i & 1)
                closure.add(LineSetSimplex(face, s.n, s.m))
        return cls.assemble(spec, closure, label)

    @cached_property
    def _members(self) -> FrozenSet[FrozenSet[Line]]:
        return frozenset(frozenset(s.lines) for layer in self.simplices for s in layer)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @property
    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(layer) for layer in self.simplices)

    def contains(self, s: LineSetSimplex) -> bool:
        return frozenset(s.lines) in self._members

    def all_simplices(self) -> List[LineSetSimplex]:
        return [s for layer in self.simplices for s in layer]

    def faces(self) -> List[FrozenSet[Line]]:
        return [frozenset(s.lines) for s in self.all_simplices()]

    def is_empty(self) -> bool:
        return not self.simplices

    def full_subcomplex(self, vertices: Iterable[Line], label: str = "") -> "BoundedComplex":
        keep = set(vertices)
        return BoundedComplex.assemble(
            self.spec, (s for s in self.all_simplices() if set(s.lines) <= keep), label or self.label
        )

    def to_json(self) -> dict:
        index = {line: i for i, line in enumerate(self.vertices)}
        payload = {
            "spec": self.spec.to_json(),
            "label": self.label,
            "vertices": [line.to_json() for line in self.vertices],
            "simplices": [[[index[l] for l in s.lines] for s in layer] for layer in self.simplices],
        }
        payload["content_hash"] = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()
        return payload

    @classmethod
    def from_json(cls, payload: dict) -> "BoundedComplex":
        spec = BoundedComplexSpec.from_json(payload["spec"])
        vertices = [Line.from_json(v) for v in payload["vertices"]]
        simplices = [
            LineSetSimplex(tuple(vertices[i] for i in indices), spec.n, spec.m)
            for layer in payload["simplices"]
            for indices in layer
        ]
        return cls.assemble(spec, simplices, payload.get("label", ""))


def candidate_lines(spec: BoundedComplexSpec) -> List[Line]:
    """Lines with canonical rep in the ball, outside Span(e_1..e_m), in line order."""
    lines = []
    for vector in product(range(-spec.ball, spec.ball + 1), repeat=spec.ambient_dim):
        first = next((x for x in vector if x), 0)
        if first <= 0 or reduce(gcd, vector, 0) != 1:
            continue
        if spec.m and not any(vector[spec.m:]):
            continue
        lines.append(Line(vector))
    return sorted(lines)


def _extend_chunk(spec: BoundedComplexSpec, chunk: List[LineSetSimplex], vertices: List[Line],
                  neighbors: Dict[Line, set]) -> List[LineSetSimplex]:
    position = {v: i for i, v in enumerate(vertices)}
    extended = []
    for s in chunk:
        common = set.intersection(*(neighbors[l] for l in s.lines))
        for v in vertices[position[s.lines[-1]] + 1:]:
            if v in common:
                candidate = s.with_lines([v])
                if spec.admits(candidate):
                    extended.append(candidate)
    return extended


def enumerate_complex(spec: BoundedComplexSpec, max_dim: Optional[int] = None, n_jobs: int = 1) -> BoundedComplex:
    """All simplices of dimension <= max_dim on the lines inside the ball.

    Simplices are grown by ordered extension; a new line must already be adjacent to
    every line of the simplex, then the membership predicate decides.
    """
    top = spec.top_dim if max_dim is None else min(max_dim, spec.top_dim)
    vertices = [l for l in candidate_lines(spec) if spec.admits(LineSetSimplex((l,), spec.n, spec.m))]
    if top < 0 or not vertices:
        logger.info(f"Enumerated {spec.label}: empty")
        return BoundedComplex.assemble(spec, [])

    layers = [[LineSetSimplex((v,), spec.n, spec.m) for v in vertices]]
    neighbors: Dict[Line, set] = {v: set() for v in vertices}
    for d in range(1, top + 1):
        if d == 1:
            frontier = _extend_chunk(spec, layers[-1], vertices, {v: set(vertices) for v in vertices})
            for edge in frontier:
                a, b = edge.lines
                neighbors[a].add(b)
                neighbors[b].add(a)
        elif n_jobs == 1:
            frontier = _extend_chunk(spec, layers[-1], vertices, neighbors)
        else:
            chunks = [layers[-1][i::n_jobs] for i in range(n_jobs)]
            parts = Parallel(n_jobs=n_jobs)(delayed(_extend_chunk)(spec, c, vertices, neighbors) for c in chunks)
            frontier = sorted((s for part in parts for s in part), key=simplex_key)
        logger.debug(f"{spec.label}: {len(frontier)} simplices in dimension {d}")
        if not frontier:
            break
        layers.append(frontier)

    complex_ = BoundedComplex.assemble(spec, (s for layer in layers for s in layer))
    logger.info(f"Enumerated {spec.label}: f-vector {complex_.f_vector}")
    return complex_


def link(X: BoundedComplex, s: LineSetSimplex) -> BoundedComplex:
    """Link_X(s); the link of the empty simplex is X."""
    if not s.lines:
        return X
    if not X.contains(s):
        raise SimplexNotInComplex(f"{[l.rep for l in s.lines]} is not a simplex of {X.label}")
    lines = set(s.lines)
    faces = [t.without(s.lines) for t in X.all_simplices() if len(t) > len(s) and lines <= set(t.lines)]
    return BoundedComplex.assemble(X.spec, faces, f"Link({[l.rep for l in s.lines]}) in {X.label}")


def plink(X: BoundedComplex, s: LineSetSimplex) -> BoundedComplex:
    """Link of a standard simplex minus the lines in Span(e_1..e_m, s)."""
    if X.spec.variant is Variant.B:
        raise InvalidSpec("PLink is defined on the BA variants only")
    if s.lines and classify(s).kind is not SimplexKind.STANDARD:
        raise NotStandard(f"{[l.rep for l in s.lines]} is additive")
    around = link(X, s)
    spanning = s.implicit_vectors() + s.vectors()
    keep = [v for v in around.vertices if not in_span(v.rep, spanning)]
    return around.full_subcomplex(keep, f"PLink({[l.rep for l in s.lines]}) in {X.label}")


def link_iso(s: LineSetSimplex) -> IntMatrix:
    """Unimodular φ fixing e_1..e_m that carries s onto its standard model.

    Models: {e_(m+1)..e_(m+k)} for standard s, {e_(m+1)..e_(m+k-1), e_(m+1)+e_(m+2)}
    for internally additive s, and {e_(m+1)..e_(m+k-1), e_i+e_(m+1)} for externally
    additive s whose core involves e_i.
    """
    kind = classify(s)
    dim = s.ambient_dim
    implicit = s.implicit_vectors()
    if kind.kind is SimplexKind.STANDARD:
        basis = implicit + s.vectors()
    elif kind.kind is SimplexKind.INTERNALLY_ADDITIVE:
        _, v1, v2 = additive_orientation(s)
        others = [l.rep for l in s.lines if l not in kind.core]
        basis = implicit + [v1, v2] + others
    else:
        first, second = kind.core
        e = unit_vector(kind.external_index, dim)
        v0, v1 = second.rep, first.rep
        sign_v1, delta = signed_relation(v0, v1, e)
        # v0 = sign_v1·v1 + delta·e_i; send delta·sign_v1·v1 to e_(m+1)
        lead = tuple(delta * sign_v1 * x for x in v1)
        others = [l.rep for l in s.lines if l not in kind.core]
        basis = implicit + [lead] + others
    return inverse_unimodular(unimodular_complete(basis, dim))


def standard_model(s: LineSetSimplex) -> LineSetSimplex:
    """The model simplex link_iso(s) lands on."""
    kind = classify(s)
    m, dim, k = s.m, s.ambient_dim, len(s)
    if kind.kind is SimplexKind.STANDARD:
        return LineSetSimplex.of([unit_vector(m + j, dim) for j in range(k)], s.n, m)
    units = [unit_vector(m + j, dim) for j in range(k - 1)]
    if kind.kind is SimplexKind.INTERNALLY_ADDITIVE:
        extra = tuple(x + y for x, y in zip(units[0], units[1]))
    else:
        extra = tuple(x + y for x, y in zip(unit_vector(kind.external_index, dim), units[0]))
    return LineSetSimplex.of(units + [extra], s.n, m)
