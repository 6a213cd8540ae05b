"""Frame symbols [v1, ..., vn], their R2/R3 canonical form, and the boundary map I1 -> I0.

Canonical form: every vector is replaced by the canonical representative of its line (R2)
and the vectors are sorted in line order (R3); the sign records the parity of that sort.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from complexes import BoundedComplexSpec, Variant, enumerate_complex
from exactlin import IntMatrix, SparseMatrix
from exactlin.matrices import format_number, integer_det, parse_number
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

Vectors = Tuple[Tuple[int, ...], ...]


class NotABasis(ValueError):
    pass


class NotAugmentedFrame(ValueError):
    pass


@dataclass(frozen=True)
class FrameSymbol:
    vectors: Vectors
    sign: int = 1

    @property
    def n(self) -> int:
        return len(self.vectors)

    def to_json(self) -> dict:
        return {"vectors": [[str(x) for x in v] for v in self.vectors], "sign": self.sign}


def canonicalize(vectors: Sequence[Sequence[int]]) -> FrameSymbol:
    vectors = [tuple(int(x) for x in v) for v in vectors]
    n = len(vectors)
    if n == 0 or any(len(v) != n for v in vectors) or abs(integer_det(vectors)) != 1:
        raise NotABasis(f"{vectors} is not a basis of Z^{n}")
    lines = [line_of(v) for v in vectors]
    return FrameSymbol(tuple(line.rep for line in sorted(lines)), permutation_sign(lines))


def symbol_key(vectors: Vectors) -> tuple:
    return tuple(v[::-1] for v in vectors)


@dataclass
class SymbolSum:
    """Rational combination of canonical frame symbols; zero coefficients are dropped."""
    n: int
    terms: Dict[Vectors, Fraction] = field(default_factory=dict)

    def add_symbol(self, symbol: FrameSymbol, coeff=1) -> "SymbolSum":
        total = self.terms.get(symbol.vectors, Fraction(0)) + Fraction(coeff) * symbol.sign
        if total:
            self.terms[symbol.vectors] = total
        else:
            self.terms.pop(symbol.vectors, None)
        return self

    def add_vectors(self, vectors: Sequence[Sequence[int]], coeff=1) -> "SymbolSum":
        return self.add_symbol(canonicalize(vectors), coeff)

    def __add__(self, other: "SymbolSum") -> "SymbolSum":
        total = SymbolSum(self.n, dict(self.terms))
        for vectors, coeff in other.terms.items():
            total.add_symbol(FrameSymbol(vectors), coeff)
        return total

    def scaled(self, factor) -> "SymbolSum":
        return SymbolSum(self.n, {v: c * factor for v, c in self.terms.items() if c * factor})

    def __sub__(self, other: "SymbolSum") -> "SymbolSum":
        return self + other.scaled(-1)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> List[Tuple[Vectors, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: symbol_key(kv[0]))

    def transform(self, g: IntMatrix) -> "SymbolSum":
        """Termwise action M·[v1..vn] = [M·v1..M·vn]."""
        image = SymbolSum(self.n)
        for vectors, coeff in self.terms.items():
            image.add_vectors([g.apply(v) for v in vectors], coeff)
        return image

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"vectors": [[str(x) for x in v] for v in vectors], "coeff": format_number(coeff)}
                      for vectors, coeff in self.items()],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "SymbolSum":
        total = cls(int(payload["n"]))
        for term in payload["terms"]:
            total.add_vectors([[int(x) for x in v] for v in term["vectors"]], parse_number(term["coeff"]))
        return total


def default_orientation(af: LineSetSimplex) -> Tuple[Tuple[int, ...], ...]:
    """(v0, v1, v2, v3, ..., vn): the additive core with v0 = v1 + v2, then the other lines in order."""
    v0, v1, v2 = additive_orientation(af)
    core = {line_of(v) for v in (v0, v1, v2)}
    return (v0, v1, v2) + tuple(l.rep for l in af.lines if l not in core)


def _check_augmented_frame(af: LineSetSimplex):
    n = af.n
    if af.m != 0 or len(af) != n + 1:
        raise NotAugmentedFrame(f"Expected n+1 = {n + 1} lines in Z^{n}, got {len(af)}")
    try:
        kind = classify(af)
    except ValueError as exc:
        raise NotAugmentedFrame(str(exc))
    if kind.kind is not SimplexKind.INTERNALLY_ADDITIVE:
        raise NotAugmentedFrame(f"{[l.rep for l in af.lines]} is {kind.kind.value}")


def r1_boundary(af: LineSetSimplex, orientation: Optional[Sequence[Sequence[int]]] = None) -> SymbolSum:
    """∂[v0, v1, ..., vn] = [v1, v2, ...] − [v0, v2, ...] + [v0, v1, v3, ...] with v0 = v1 + v2.

    The faces omitting v3..vn span proper summands and vanish in the relative complex.
    """
    _check_augmented_frame(af)
    if orientation is None:
        orientation = default_orientation(af)
    orientation = [tuple(v) for v in orientation]
    if {line_of(v) for v in orientation} != set(af.lines) or len(orientation) != len(af):
        raise NotAugmentedFrame("Orientation does not list the lines of the augmented frame")
    v0, v1, v2, rest = orientation[0], orientation[1], orientation[2], orientation[3:]
    if v0 != tuple(a + b for a, b in zip(v1, v2)):
        raise NotAugmentedFrame(f"Orientation must satisfy v0 = v1 + v2, got {v0}, {v1}, {v2}")
    boundary = SymbolSum(af.n)
    boundary.add_vectors([v1, v2] + rest, 1)
    boundary.add_vectors([v0, v2] + rest, -1)
    boundary.add_vectors([v0, v1] + rest, 1)
    return boundary


@dataclass(frozen=True)
class Presentation:
    """Boundary matrix I1 -> I0: rows are canonical symbols, columns augmented frames."""
    n: int
    symbols: Tuple[Vectors, ...]
    relations: Tuple[LineSetSimplex, ...]
    boundary: SparseMatrix
    skipped: int = 0

    def cokernel_rank(self) -> int:
        """Rank over Q of I0 / ∂(I1) on this truncation."""
        return len(self.symbols) - self.boundary.rank()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "symbols": [[[str(x) for x in v] for v in vectors] for vectors in self.symbols],
            "relations": [af.to_json() for af in self.relations],
            "boundary": self.boundary.to_json(),
            "skipped_relations": self.skipped,
        }


def presentation_matrices(n: int, generators_ball: int, relations_ball: int) -> Presentation:
    if n < 2:
        raise ValueError(f"The presentation needs n >= 2, got {n}")
    ball = max(generators_ball, relations_ball)
    X = enumerate_complex(BoundedComplexSpec(n, 0, ball, Variant.BA))

    def inside(s: LineSetSimplex, bound: int) -> bool:
        return all(l.sup_norm() <= bound for l in s.lines)

    frames = [s for s in (X.simplices[n - 1] if X.dimension >= n - 1 else ())
              if inside(s, generators_ball) and is_partial_frame(s)]
    symbols = tuple(sorted((tuple(s.vectors()) for s in frames), key=symbol_key))
    row_of = {vectors: i for i, vectors in enumerate(symbols)}

    relations, columns, skipped = [], [], 0
    if relations_ball >= 1 and X.dimension >= n:
        for af in X.simplices[n]:
            if not inside(af, relations_ball):
                continue
            terms = r1_boundary(af)
            if any(vectors not in row_of for vectors in terms.terms):
                skipped += 1
                continue
            relations.append(af)
            columns.append(terms)
    if skipped:
        logger.warning(f"Skipped {skipped} relations whose faces leave the generator ball {generators_ball}")

    boundary = SparseMatrix(len(symbols), len(columns))
    for j, terms in enumerate(columns):
        for vectors, coeff in terms.terms.items():
            boundary.add(row_of[vectors], j, int(coeff))
    logger.info(f"Presentation n={n}: {len(symbols)} symbols, {len(columns)} relations")
    return Presentation(n, symbols, tuple(relations), boundary, skipped)
