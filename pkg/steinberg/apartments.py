"""Apartment classes as flag chains in the Tits building, Ash–Rudolph reduction and class equality."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import floor
from typing import Dict, List, Optional, Sequence, Tuple, Union

from complexes import Summand
from exactlin import IntMatrix, hnf, rational_inverse, rational_rank
from exactlin.matrices import integer_det
from lattice import permutation_sign, primitive_part

from steinberg.symbols import SymbolSum

logger = logging.getLogger(__name__)

Flag = Tuple[Summand, ...]


class InconclusiveComplexTooSmall(RuntimeError):
    """The assembled flag complex cannot decide the question (an input is not a cycle)."""


@dataclass(frozen=True)
class RationalApartment:
    """n independent integer vectors of Z^n; integral iff |det| = 1."""
    vectors: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        vectors = tuple(tuple(int(x) for x in v) for v in self.vectors)
        object.__setattr__(self, "vectors", vectors)
        n = len(vectors)
        if n < 2 or any(len(v) != n for v in vectors):
            raise ValueError(f"Apartments need n >= 2 vectors of Z^n, got {vectors}")
        if self.det == 0:
            raise ValueError(f"{vectors} are dependent")

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def det(self) -> int:
        return integer_det(self.vectors)

    @property
    def is_integral(self) -> bool:
        return abs(self.det) == 1

    def transform(self, g: IntMatrix) -> "RationalApartment":
        return RationalApartment(tuple(g.apply(v) for v in self.vectors))


def flag_key(flag: Flag) -> tuple:
    return tuple(V.sort_key() for V in flag)


@dataclass
class TitsChain:
    """Rational combination of flags of proper summands; zero coefficients are dropped."""
    n: int
    terms: Dict[Flag, Fraction] = field(default_factory=dict)

    def add(self, flag: Flag, coeff) -> "TitsChain":
        total = self.terms.get(flag, Fraction(0)) + Fraction(coeff)
        if total:
            self.terms[flag] = total
        else:
            self.terms.pop(flag, None)
        return self

    def __add__(self, other: "TitsChain") -> "TitsChain":
        total = TitsChain(self.n, dict(self.terms))
        for flag, coeff in other.terms.items():
            total.add(flag, coeff)
        return total

    def scaled(self, factor) -> "TitsChain":
        return TitsChain(self.n, {f: c * factor for f, c in self.terms.items() if c * factor})

    def __sub__(self, other: "TitsChain") -> "TitsChain":
        return self + other.scaled(-1)

    def is_zero(self) -> bool:
        return not self.terms

    def boundary(self) -> "TitsChain":
        """Alternating sum of faces; a 0-chain goes to its augmentation on the empty flag."""
        result = TitsChain(self.n)
        for flag, coeff in self.terms.items():
            for i in range(len(flag)):
                result.add(flag[:i] + flag[i + 1:], coeff * (-1) ** i)
        return result

    def is_cycle(self) -> bool:
        return self.boundary().is_zero()

    def to_json(self) -> dict:
        ordered = sorted(self.terms.items(), key=lambda kv: flag_key(kv[0]))
        return {"n": self.n, "terms": [{"flag": [V.to_json() for V in flag], "coeff": str(c)} for flag, c in ordered]}


def apartment_chain(a: RationalApartment) -> TitsChain:
    """Σ_σ sign(σ)·(Span⟨w_σ1⟩ ⊂ Span⟨w_σ1, w_σ2⟩ ⊂ ...), spans saturated."""
    chain = TitsChain(a.n)
    for order in permutations(range(a.n)):
        flag = tuple(Summand.span_of([a.vectors[i] for i in order[:k]], a.n) for k in range(1, a.n))
        chain.add(flag, permutation_sign(order))
    return chain


ChainSource = Union[SymbolSum, RationalApartment, Sequence[Tuple[object, RationalApartment]]]


def chain_of(source: ChainSource) -> TitsChain:
    if isinstance(source, RationalApartment):
        return apartment_chain(source)
    if isinstance(source, SymbolSum):
        total = TitsChain(source.n)
        for vectors, coeff in source.terms.items():
            total = total + apartment_chain(RationalApartment(vectors)).scaled(coeff)
        return total
    pairs = list(source)
    if not pairs:
        raise ValueError("Cannot infer the rank of an empty apartment list")
    total = TitsChain(pairs[0][1].n)
    for coeff, apartment in pairs:
        total = total + apartment_chain(apartment).scaled(Fraction(coeff))
    return total


def _longer_flags(summands: List[Summand], length: int) -> List[Flag]:
    ordered = sorted(set(summands), key=Summand.sort_key)
    flags = []
    for chain in combinations(ordered, length):
        if all(a.rank < b.rank and a.is_subsummand_of(b) for a, b in zip(chain, chain[1:])):
            flags.append(chain)
    return flags


def _is_boundary(difference: TitsChain) -> bool:
    """Solve ∂x = difference over Q in the flag complex on the summands that occur."""
    if difference.is_zero():
        return True
    length = len(next(iter(difference.terms)))
    summands = [V for flag in difference.terms for V in flag]
    fillers = _longer_flags(summands, length + 1)
    if not fillers:
        return False
    columns = [TitsChain(difference.n, {f: Fraction(1)}).boundary() for f in fillers]
    rows = sorted({f for c in columns for f in c.terms} | set(difference.terms), key=flag_key)
    index = {f: i for i, f in enumerate(rows)}
    matrix = [[Fraction(0)] * len(columns) for _ in rows]
    for j, column in enumerate(columns):
        for f, c in column.terms.items():
            matrix[index[f]][j] = c
    augmented = [row + [difference.terms.get(f, Fraction(0))] for row, f in zip(matrix, rows)]
    return rational_rank(matrix) == rational_rank(augmented)


def verify_in_tits(lhs: ChainSource, rhs: ChainSource) -> bool:
    """True iff both sides define the same class in H̃_(n−2) of the Tits building."""
    left, right = chain_of(lhs), chain_of(rhs)
    if left.n != right.n:
        raise ValueError(f"Ranks differ: {left.n} vs {right.n}")
    for side, chain in (("left", left), ("right", right)):
        if not chain.is_cycle():
            raise InconclusiveComplexTooSmall(f"The {side} side is not a cycle, so it has no class")
    verdict = _is_boundary(left - right)
    if not verdict:
        logger.info(f"Classes differ in rank {left.n}: {len((left - right).terms)} flags remain")
    return verdict


def _parallelepiped_point(vectors: Sequence[Tuple[int, ...]]) -> Tuple[Tuple[int, ...], Tuple[Fraction, ...]]:
    """Nonzero primitive v = Σ q_i·w_i with q_i ∈ [0, 1), fewest nonzero q_i, then smallest v."""
    n = len(vectors)
    H, _ = hnf(IntMatrix.from_rows(vectors, n))
    inverse = rational_inverse(vectors)
    best = None
    for x in product(*(range(H.entries[i][i]) for i in range(n))):
        if not any(x):
            continue
        q = [sum(Fraction(x[k]) * inverse[k][i] for k in range(n)) for i in range(n)]
        q = [qi - floor(qi) for qi in q]
        if not any(q):
            continue
        v = [sum(q[i] * vectors[i][c] for i in range(n)) for c in range(n)]
        v, content = primitive_part([int(c) for c in v])
        q = tuple(qi / content for qi in q)
        key = (sum(1 for qi in q if qi), v)
        if best is None or key < best[0]:
            best = (key, v, q)
    return best[1], best[2]


def ash_rudolph_reduce(a: RationalApartment, trace: Optional[List[Tuple[int, int]]] = None) -> SymbolSum:
    """Rewrite an apartment class as a combination of integral symbols.

    With D = |det| > 1 a nonzero point v of the half-open fundamental parallelepiped
    gives [w1..wn] = Σ_(q_i ≠ 0) [w1..v (slot i)..wn]; each term has |det| = q_i·D < D.
    `trace` receives the (parent |det|, child |det|) edges of the recursion tree.
    """
    result = SymbolSum(a.n)
    pending: List[Tuple[Tuple[Tuple[int, ...], ...], Fraction]] = [(a.vectors, Fraction(1))]
    while pending:
        vectors, coeff = pending.pop()
        D = abs(integer_det(vectors))
        if D == 1:
            result.add_vectors(vectors, coeff)
            continue
        v, q = _parallelepiped_point(vectors)
        for i, qi in enumerate(q):
            if not qi:
                continue
            child = vectors[:i] + (v,) + vectors[i + 1:]
            if trace is not None:
                trace.append((D, abs(integer_det(child))))
            pending.append((child, coeff))
    logger.debug(f"Reduced apartment with det {a.det} to {len(result)} integral symbols")
    return result
