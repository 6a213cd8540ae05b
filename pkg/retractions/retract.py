"""The retraction π̂ onto a sublevel set of |F|, the carrying cocycle and the τ_c subdivision.

Simplicial maps come back as a vertex map plus one image record per simplex. A drop in
dimension is a recorded collapse, not an error. Any image that fails the target
predicates is a defect. `retract` raises NotSimplicial on the first defect when strict,
and otherwise lists every defect in the returned map.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from joblib import Parallel, delayed

from complexes import BoundedComplex, BoundedComplexSpec, Variant
from lattice import Line, LineSetSimplex, SimplexKind, classify, in_span, line_of, primitive_part, unit_vector

logger = logging.getLogger(__name__)


class NotInternallyAdditive(ValueError):
    pass


class NotSimplicial(RuntimeError):
    """A simplex whose image is not a simplex of the target; always a defect."""

    def __init__(self, simplex, image, reason: str):
        self.simplex = simplex
        self.image = image
        self.reason = reason
        super().__init__(f"{reason}: {simplex} -> {image}")


@dataclass(frozen=True)
class LevelFunctional:
    """Covector F with threshold N and a vertex w with F(w) = N.

    m > 0 additionally requires F(e_i) = 0 for the implicit lines e_1..e_m.
    """
    F: Tuple[int, ...]
    N: int
    w: Tuple[int, ...]
    m: int = 0

    def __post_init__(self):
        if self.N <= 0:
            raise ValueError(f"N must be positive, got {self.N}")
        if len(self.F) != len(self.w):
            raise ValueError("F and w live in different ranks")
        if self(self.w) != self.N:
            raise ValueError(f"F(w) = {self(self.w)} but N = {self.N}")
        line_of(self.w)
        if any(self.F[i] for i in range(self.m)):
            raise ValueError("F must vanish on e_1..e_m")

    def __call__(self, vector: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.F, vector))

    @property
    def w_line(self) -> Line:
        return line_of(self.w)

    @classmethod
    def standard(cls, n: int, m: int, N: int) -> "LevelFunctional":
        """F = last coordinate, w = e_(m+1) + N·e_(m+n)."""
        if n < 2:
            raise ValueError("The standard context needs n >= 2")
        dim = n + m
        F = unit_vector(dim - 1, dim)
        w = tuple(x + N * y for x, y in zip(unit_vector(m, dim), F))
        return cls(F, N, w, m)

    def to_json(self) -> dict:
        return {"F": list(self.F), "N": self.N, "w": list(self.w), "m": self.m}


def f_nonneg_rep(line: Line, ctx: LevelFunctional) -> Tuple[int, ...]:
    """Representative v of the line with F(v) >= 0 (the canonical one when F(v) = 0)."""
    return line.rep if ctx(line.rep) >= 0 else line.negated()


def pihat(line: Line, ctx: LevelFunctional) -> Line:
    """⟨v − q_v·w⟩ with v F-nonnegative and q_v = ⌊F(v)/N⌋.

    Off the link of ⟨w⟩ the difference need not be primitive, so its primitive part is taken.
    ⟨w⟩ itself is sent to itself.
    """
    v = f_nonneg_rep(line, ctx)
    q = ctx(v) // ctx.N
    if q == 0 or line == ctx.w_line:
        return line
    reduced, _ = primitive_part(tuple(x - q * y for x, y in zip(v, ctx.w)))
    return line_of(reduced)


def omega(N: int, a: int, b: int) -> int:
    """Carrying cocycle: ⌊(a+b)/N⌋ − ⌊a/N⌋ − ⌊b/N⌋."""
    return (a + b) // N - a // N - b // N


def omega_bar(N: int, a: int, b: int) -> int:
    """ω_N on residues mod N."""
    return omega(N, a % N, b % N)


def extension_group_order(N: int) -> int:
    """Order of (1, 0) in Z/N × Z/N with addition twisted by ω̄_N; N² iff the extension is Z/N²."""
    a, b, order = 1 % N, 0, 1
    while (a, b) != (0, 0):
        a, b = (a + 1) % N, (b + omega_bar(N, a, 1)) % N
        order += 1
    return order


def carrying_core(s: LineSetSimplex, ctx: LevelFunctional) -> Optional[Tuple[Tuple[int, ...], ...]]:
    """F-nonnegative core reps (v0, v1, v2) with v0 = v1 + v2, or None when some F(v_i) = 0."""
    kind = classify(s)
    if kind.kind is not SimplexKind.INTERNALLY_ADDITIVE:
        raise NotInternallyAdditive(f"{[l.rep for l in s.lines]} is {kind.kind.value}")
    reps = [f_nonneg_rep(line, ctx) for line in kind.core]
    if min(ctx(v) for v in reps) == 0:
        return None
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        if reps[i] == tuple(a + b for a, b in zip(reps[j], reps[k])):
            return reps[i], reps[j], reps[k]
    raise NotInternallyAdditive(f"Core of {[l.rep for l in s.lines]} has no F-nonnegative normalization")


def is_carrying(s: LineSetSimplex, ctx: LevelFunctional) -> bool:
    core = carrying_core(s, ctx)
    if core is None:
        return False
    _, v1, v2 = core
    return omega(ctx.N, ctx(v1), ctx(v2)) == 1


class RetractionClass(Enum):
    W_STANDARD = "w_standard"
    EXTERNALLY_ADDITIVE = "externally_additive"
    W_ADDITIVE = "w_additive"
    INTERNAL_NON_CARRYING = "internally_additive_non_carrying"
    CARRYING = "carrying"


def plink_class(s: LineSetSimplex, ctx: LevelFunctional) -> RetractionClass:
    """Class of a simplex of PLink(⟨w⟩), read off from s ∗ ⟨w⟩."""
    joined = classify(s.with_lines([ctx.w_line]))
    if joined.kind is SimplexKind.STANDARD:
        return RetractionClass.W_STANDARD
    if joined.kind is SimplexKind.EXTERNALLY_ADDITIVE:
        return RetractionClass.EXTERNALLY_ADDITIVE
    if ctx.w_line in joined.core:
        return RetractionClass.W_ADDITIVE
    core = LineSetSimplex(joined.core, s.n, s.m)
    return RetractionClass.CARRYING if is_carrying(core, ctx) else RetractionClass.INTERNAL_NON_CARRYING


@dataclass(frozen=True)
class TauVertex:
    """Barycenter τ_c of a carrying 2-simplex c."""
    cell: Tuple[Line, Line, Line]

    def __repr__(self) -> str:
        return f"tau{tuple(l.rep for l in self.cell)}"

    def to_json(self) -> dict:
        return {"tau": [line.to_json() for line in self.cell]}


Vertex = Union[Line, TauVertex]


def vertex_key(v: Vertex) -> tuple:
    if isinstance(v, Line):
        return 0, v.rep[::-1]
    return 1, tuple(l.rep[::-1] for l in v.cell)


@dataclass(frozen=True)
class SubdividedComplex:
    base: BoundedComplex
    carrying_cells: Tuple[LineSetSimplex, ...]
    tau_vertices: Tuple[TauVertex, ...]
    simplices: Tuple[Tuple[FrozenSet[Vertex], ...], ...]

    @property
    def vertices(self) -> List[Vertex]:
        return [next(iter(s)) for s in self.simplices[0]] if self.simplices else []

    def all_simplices(self) -> List[FrozenSet[Vertex]]:
        return [s for layer in self.simplices for s in layer]

    def faces(self) -> List[FrozenSet[Vertex]]:
        return self.all_simplices()


def _layered(faces) -> Tuple[Tuple[FrozenSet[Vertex], ...], ...]:
    layers: Dict[int, list] = {}
    for face in faces:
        layers.setdefault(len(face) - 1, []).append(face)
    top = max(layers) if layers else -1
    return tuple(
        tuple(sorted(layers.get(d, ()), key=lambda f: sorted(map(vertex_key, f)))) for d in range(top + 1)
    )


def subdivide(X: BoundedComplex, ctx: LevelFunctional) -> SubdividedComplex:
    """Star each carrying 2-simplex c of X = PLink(⟨w⟩) at a new vertex τ_c."""
    cells = []
    if X.dimension >= 2:
        cells = [c for c in X.simplices[2] if plink_class(c, ctx) is RetractionClass.CARRYING]
    taus = {frozenset(c.lines): TauVertex(c.lines) for c in cells}

    faces = set()
    for s in X.all_simplices():
        lines = frozenset(s.lines)
        core = next((c for c in taus if c <= lines), None)
        if core is None:
            faces.add(lines)
            continue
        tau = taus[core]
        for dropped in core:
            rest = sorted(lines - {dropped}, key=vertex_key)
            for size in range(len(rest) + 1):
                for subset in combinations(rest, size):
                    faces.add(frozenset(subset) | {tau})

    logger.info(f"Subdivided {X.label}: {len(cells)} carrying cells")
    return SubdividedComplex(X, tuple(cells), tuple(taus[frozenset(c.lines)] for c in cells), _layered(faces))


def tau_image(tau: TauVertex, ctx: LevelFunctional) -> Line:
    """⟨v1 − q_(v1)·w − w⟩, v1 the colexicographically smaller non-sum core rep."""
    core = carrying_core(LineSetSimplex(tau.cell, len(ctx.w) - ctx.m, ctx.m), ctx)
    _, a, b = core
    v1 = min(a, b, key=lambda v: v[::-1])
    q = ctx(v1) // ctx.N
    return line_of(tuple(x - (q + 1) * y for x, y in zip(v1, ctx.w)))


@dataclass
class SimplicialMap:
    """Vertex map with a per-simplex image certificate."""
    vertex_map: Dict[Vertex, Line]
    images: List[Tuple[Tuple[Vertex, ...], Tuple[Line, ...]]]
    collapses: List[Tuple[Tuple[Vertex, ...], Tuple[Line, ...]]] = field(default_factory=list)
    class_counts: Dict[str, int] = field(default_factory=dict)
    defects: List[dict] = field(default_factory=list)
    r_before: int = 0
    r_after: int = 0

    @property
    def is_valid(self) -> bool:
        return not self.defects

    def to_json(self) -> dict:
        ordered = sorted(self.vertex_map.items(), key=lambda item: vertex_key(item[0]))
        return {
            "vertex_map": [[v.to_json(), image.to_json()] for v, image in ordered],
            "collapsed": [[[v.to_json() for v in src], [l.to_json() for l in img]] for src, img in self.collapses],
            "class_counts": dict(sorted(self.class_counts.items())),
            "defects": self.defects,
            "checked": len(self.images),
            "r_max_before": self.r_before,
            "r_max_after": self.r_after,
        }


@dataclass(frozen=True)
class _Target:
    """Predicates of the sublevel target: anchor ∗ image must lie in the complex of `spec`."""
    spec: BoundedComplexSpec
    anchor: LineSetSimplex
    proper_span: bool

    def violation(self, image: Sequence[Line], ctx: LevelFunctional) -> Optional[str]:
        anchor_lines = set(self.anchor.lines)
        if anchor_lines & set(image):
            return "image meets the anchor simplex"
        if any(abs(ctx(l.rep)) >= ctx.N for l in image):
            return "image leaves the sublevel set"
        if self.proper_span:
            spanning = self.anchor.implicit_vectors() + self.anchor.vectors()
            if any(in_span(l.rep, spanning) for l in image):
                return "image vertex lies in the excluded span"
        if not self.spec.admits(self.anchor.with_lines(image)):
            return "image is not a simplex"
        return None


def _check_chunk(chunk, vertex_map, target: _Target, ctx: LevelFunctional, source_class):
    results = []
    for simplex in chunk:
        ordered = tuple(sorted(simplex, key=vertex_key))
        image = tuple(sorted(set(vertex_map[v] for v in ordered)))
        reason = target.violation(image, ctx)
        collapsed = len(image) < len(ordered)
        if reason is None and collapsed and source_class is not None:
            if source_class(simplex) is not RetractionClass.W_ADDITIVE:
                reason = "dimension drops outside the w-additive case"
        results.append((ordered, image, collapsed, reason))
    return results


def _run_checks(simplices, vertex_map, target, ctx, source_class, n_jobs: int):
    if n_jobs == 1:
        return _check_chunk(simplices, vertex_map, target, ctx, source_class)
    chunks = [simplices[i::n_jobs] for i in range(n_jobs)]
    parts = Parallel(n_jobs=n_jobs)(delayed(_check_chunk)(c, vertex_map, target, ctx, source_class) for c in chunks)
    return sorted((r for part in parts for r in part), key=lambda r: [vertex_key(v) for v in r[0]])


def _finish(mapping: SimplicialMap, results, sublevel, strict: bool) -> SimplicialMap:
    for line in sublevel:
        if mapping.vertex_map[line] != line:
            mapping.defects.append({"simplex": [line.to_json()], "reason": "sublevel vertex moved"})
    for ordered, image, collapsed, reason in results:
        mapping.images.append((ordered, image))
        if collapsed:
            mapping.collapses.append((ordered, image))
        if reason is not None:
            mapping.defects.append({"simplex": [repr(v) for v in ordered], "image": [l.to_json() for l in image], "reason": reason})
            if strict:
                raise NotSimplicial(ordered, image, reason)
    if mapping.defects and strict:
        first = mapping.defects[0]
        raise NotSimplicial(first["simplex"], None, first["reason"])
    return mapping


def _source_classifier(Y: SubdividedComplex, ctx: LevelFunctional):
    n, m = Y.base.spec.n, Y.base.spec.m

    def source_class(simplex) -> RetractionClass:
        if any(isinstance(v, TauVertex) for v in simplex):
            return RetractionClass.CARRYING
        return plink_class(LineSetSimplex(tuple(simplex), n, m), ctx)

    return source_class


def retract(Y: SubdividedComplex, ctx: LevelFunctional, strict: bool = True, n_jobs: int = 1) -> SimplicialMap:
    """π̂ on the lines of Y and τ_c ↦ ⟨v1 − q·w − w⟩, checked simplex by simplex against X^{<N}."""
    X = Y.base
    if X.spec.variant is Variant.B:
        raise ValueError("retract works on PLinks in BA_n^m")
    vertex_map: Dict[Vertex, Line] = {}
    for v in Y.vertices:
        vertex_map[v] = pihat(v, ctx) if isinstance(v, Line) else tau_image(v, ctx)

    counts = Counter(plink_class(s, ctx).value for s in X.all_simplices())
    anchor = LineSetSimplex((ctx.w_line,), X.spec.n, X.spec.m)
    target = _Target(X.spec, anchor, proper_span=True)
    results = _run_checks(Y.all_simplices(), vertex_map, target, ctx, _source_classifier(Y, ctx), n_jobs)

    sublevel = [l for l in X.vertices if abs(ctx(l.rep)) < ctx.N]
    mapping = SimplicialMap(vertex_map, [], class_counts=dict(counts))
    mapping.r_before = max((abs(ctx(l.rep)) for l in X.vertices), default=0)
    mapping.r_after = max((abs(ctx(l.rep)) for l in vertex_map.values()), default=0)
    mapping = _finish(mapping, results, sublevel, strict)
    logger.info(
        f"Retraction of {X.label} (N={ctx.N}): {len(mapping.images)} simplices, "
        f"{len(mapping.collapses)} collapses, {len(mapping.defects)} defects, classes {dict(sorted(counts.items()))}"
    )
    return mapping


def retract_link_simple(X: BoundedComplex, sigma: LineSetSimplex, ctx: LevelFunctional,
                        strict: bool = True, n_jobs: int = 1) -> SimplicialMap:
    """Vertexwise π̂ on Link(σ), where σ contains ⟨w⟩; σ must be additive in the BA variants."""
    if ctx.w_line not in sigma:
        raise ValueError(f"sigma must contain the line of w = {ctx.w}")
    if X.spec.variant is not Variant.B and classify(sigma).kind is SimplexKind.STANDARD:
        raise ValueError("Links of standard simplices in BA_n^m need subdivide + retract")
    vertex_map: Dict[Vertex, Line] = {v: pihat(v, ctx) for v in X.vertices}
    target = _Target(X.spec, sigma, proper_span=False)
    frozen = [frozenset(s.lines) for s in X.all_simplices()]
    results = _run_checks(frozen, vertex_map, target, ctx, None, n_jobs)

    sublevel = [l for l in X.vertices if abs(ctx(l.rep)) < ctx.N]
    mapping = SimplicialMap(vertex_map, [])
    mapping.r_before = max((abs(ctx(l.rep)) for l in X.vertices), default=0)
    mapping.r_after = max((abs(ctx(l.rep)) for l in vertex_map.values()), default=0)
    mapping = _finish(mapping, results, sublevel, strict)
    logger.info(f"Link retraction of {X.label}: {len(mapping.images)} simplices, {len(mapping.defects)} defects")
    return mapping
