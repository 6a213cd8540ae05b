import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from joblib import Parallel, delayed

from complexes import (
    BoundedComplexSpec,
    Variant,
    cayley_ball,
    cayley_vertex,
    enumerate_complex,
    one_skeleton,
    plink,
)
from exactlin import IntMatrix
from exactlin.matrices import integer_det
from homology import (
    CoinvariantSpec,
    NoWitness,
    NotAStabilizer,
    chain_complex,
    coinvariant_dim,
    homology,
    orbit_decomposition,
    orientation_character,
    phi_witness,
    relative_chain_complex,
    stabilizer,
)
from lattice import (
    LineSetSimplex,
    SimplexKind,
    classify,
    is_partial_frame,
    standard_augmented_frame,
    standard_frame,
)
from retractions import LevelFunctional, extension_group_order, omega, omega_bar, retract, subdivide
from steinberg import (
    InconclusiveComplexTooSmall,
    RationalApartment,
    SymbolSum,
    ash_rudolph_reduce,
    presentation_matrices,
    r1_boundary,
    verify_in_tits,
)

logger = logging.getLogger(__name__)

MAX_FAILURES = 20


@dataclass
class SuiteResult:
    """Outcome of one property suite with its counterexamples"""
    suite: str
    params: dict
    gating: bool = True
    cases: int = 0
    failures: List[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.gating or not self.failures

    def fail(self, **counterexample):
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(counterexample)
        self.details['failure_count'] = self.details.get('failure_count', 0) + 1

    def to_json(self) -> dict:
        return {
            'suite': self.suite,
            'params': self.params,
            'gating': self.gating,
            'passed': self.passed,
            'cases': self.cases,
            'failures': self.failures,
            'details': self.details,
        }


def random_unimodular(n: int, rng: random.Random, steps: int = 8) -> IntMatrix:
    """Product of random elementary matrices with coefficients ±1 and a random sign flip"""
    rows = [list(row) for row in IntMatrix.identity(n).entries]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        factor = rng.choice((1, -1))
        rows[i] = [a + factor * b for a, b in zip(rows[i], rows[j])]
    if rng.random() < 0.5:
        rows[0] = [-x for x in rows[0]]
    return IntMatrix.from_rows(rows, n)


def random_basis(n: int, rng: random.Random, bound: int) -> List[Tuple[int, ...]]:
    """Basis of Z^n with entries in [-bound, bound], by rejection"""
    while True:
        vectors = [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n)]
        if abs(integer_det(vectors)) == 1:
            return vectors


def random_augmented_frame(n: int, rng: random.Random, bound: int = 3) -> Tuple[LineSetSimplex, List[Tuple[int, ...]]]:
    """Augmented frame with its orientation (v0, v1, ..., vn), v0 = v1 + v2"""
    basis = random_basis(n, rng, bound)
    v0 = tuple(a + b for a, b in zip(basis[0], basis[1]))
    orientation = [v0] + basis
    return LineSetSimplex.of(orientation, n), orientation


def cocycle_failures(N: int) -> Iterator[Tuple[int, int, int]]:
    """
    Every (a, b, c) in [0, N²)³ with ω(a,b) + ω(a+b,c) != ω(a,b+c) + ω(b,c).

    Row x of ω is packed into one int with two bits per column, so a whole c-range is
    compared at once; each packed digit stays below 4 and sums never carry.
    """
    size = N * N
    span = 2 * size
    packed = [sum(omega(N, x, y) << (2 * y) for y in range(span)) for x in range(span)]
    mask = (1 << (2 * size)) - 1
    ones = sum(1 << (2 * c) for c in range(size))
    for a in range(size):
        for b in range(size):
            left = (packed[a + b] & mask) + omega(N, a, b) * ones
            right = ((packed[a] >> (2 * b)) & mask) + (packed[b] & mask)
            if left == right:
                continue
            for c in range(size):
                if omega(N, a, b) + omega(N, a + b, c) != omega(N, a, b + c) + omega(N, b, c):
                    yield a, b, c


def _coinvariant_case(kind: str, n: int, k: int) -> Tuple[str, int, int, int, int]:
    sigma = standard_augmented_frame(n) if kind == 'augmented' else standard_frame(n)
    group = stabilizer(sigma, 'SL')
    dim = coinvariant_dim(CoinvariantSpec(group, k, sigma))
    return kind, n, k, group.order, dim


class PropertyCheckCollector:
    """
    Runs the property suites behind `check` and keeps per-suite statistics
    Suites are looked up by name; every suite returns a SuiteResult
    """

    def __init__(self, cache=None, validator=None, seed: int = 20240, n_jobs: int = 1):
        self.cache = cache
        self.validator = validator
        self.seed = seed
        self.n_jobs = n_jobs

        # Collection statistics
        self.collection_stats = defaultdict(int)

        # Callbacks for finished suites
        self.result_callbacks = []

        self.suites: Dict[str, Callable[..., SuiteResult]] = {
            'retraction': self.check_retraction,
            'cocycle': self.check_cocycle,
            'cayley': self.check_cayley,
            'stabilizer': self.check_stabilizer,
            'phi': self.check_phi,
            'presentation': self.check_presentation,
            'relations': self.check_relations,
            'reduce': self.check_reduce,
            'augmented-vanishing': self.check_augmented_vanishing,
            'frame-vanishing': self.check_frame_vanishing,
            'exploratory': self.check_exploratory,
        }

    def add_result_callback(self, callback: Callable):
        """Add callback receiving every finished SuiteResult"""
        self.result_callbacks.append(callback)

    def _complex(self, spec: BoundedComplexSpec, max_dim: Optional[int] = None):
        if self.cache is not None:
            X = self.cache.get_or_enumerate(spec, max_dim, self.n_jobs)
        else:
            X = enumerate_complex(spec, max_dim, self.n_jobs)
        if self.validator:
            is_valid, issues = self.validator.validate_complex(X, max_dim)
            if not is_valid:
                raise RuntimeError(f"{spec.label} failed validation: {issues[:3]}")
        return X

    def run_suite(self, name: str, **params) -> SuiteResult:
        if name not in self.suites:
            raise ValueError(f"Unknown suite {name!r}; choose from {sorted(self.suites)}")
        result = self.suites[name](**params)

        self.collection_stats['suites'] += 1
        self.collection_stats['cases'] += result.cases
        self.collection_stats[f'{name}_failures'] += len(result.failures)
        if not result.passed:
            self.collection_stats['failed_suites'] += 1

        for callback in self.result_callbacks:
            try:
                callback(result)
            except Exception as e:
                logger.error(f"Error in result callback: {e}")

        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"Suite {name}: {result.cases} cases, {len(result.failures)} failures")
        return result

    # ---------- retractions ----------

    def check_retraction(self, n: int = 3, m: int = 0, ball: int = 2, N: int = 2) -> SuiteResult:
        """PLink(⟨w⟩) in bounded BA_n^m, subdivided and retracted onto the |F| < N sublevel"""
        result = SuiteResult('retraction', {'n': n, 'm': m, 'ball': ball, 'N': N})
        ctx = LevelFunctional.standard(n, m, N)
        spec = BoundedComplexSpec(n, m, max(ball, N), Variant.BA)
        X = self._complex(spec)
        anchor = LineSetSimplex((ctx.w_line,), n, m)
        P = plink(X, anchor)
        mapping = retract(subdivide(P, ctx), ctx, strict=False, n_jobs=self.n_jobs)

        result.cases = len(mapping.images)
        for defect in mapping.defects:
            result.fail(**defect)
        if mapping.r_after >= N:
            result.fail(reason='r_max after retraction reaches N', r_max=mapping.r_after)
        result.details.update({
            'context': ctx.to_json(),
            'class_counts': dict(sorted(mapping.class_counts.items())),
            'collapses': len(mapping.collapses),
            'r_max_before': mapping.r_before,
            'r_max_after': mapping.r_after,
        })
        return result

    def check_cocycle(self, N: int = 20) -> SuiteResult:
        """
        ω_N is normalized with values in {0, 1} on [0, N²)², a cocycle on Z/N, and the
        extension it defines is cyclic of order N². The integer cocycle identity is checked
        on every triple of [0, N²)³ for every N up to the given one.
        """
        result = SuiteResult('cocycle', {'N': N})
        for n in range(1, N + 1):
            size = n * n
            for a in range(size):
                result.cases += 1
                if omega(n, 0, a) or omega(n, a, 0):
                    result.fail(N=n, a=a, reason='not normalized')
                for b in range(size):
                    if omega(n, a, b) not in (0, 1):
                        result.fail(N=n, a=a, b=b, reason='value outside {0, 1}')

            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        left = omega_bar(n, a, b) + omega_bar(n, (a + b) % n, c)
                        right = omega_bar(n, a, (b + c) % n) + omega_bar(n, b, c)
                        if left != right:
                            result.fail(N=n, triple=[a, b, c], reason='cocycle identity fails mod N')

            result.cases += size ** 3
            for a, b, c in cocycle_failures(n):
                result.fail(N=n, triple=[a, b, c], reason='cocycle identity fails')

            order = extension_group_order(n)
            if order != size:
                result.fail(N=n, order=order, reason='extension is not cyclic of order N²')
        return result

    def check_cayley(self, m: int = 2, ball: int = 3) -> SuiteResult:
        """Bounded BA_1^m against the sup-norm ball of the Cayley graph of Z^m"""
        result = SuiteResult('cayley', {'m': m, 'ball': ball})
        X = self._complex(BoundedComplexSpec(1, m, ball, Variant.BA))
        skeleton = one_skeleton(X)
        cayley = cayley_ball(m, ball)
        relabelled = nx.relabel_nodes(cayley, {a: cayley_vertex(a) for a in cayley.nodes})

        result.cases = skeleton.number_of_nodes() + skeleton.number_of_edges()
        if set(relabelled.nodes) != set(skeleton.nodes):
            result.fail(reason='vertex sets differ', extra=len(set(skeleton.nodes) ^ set(relabelled.nodes)))
        edges = {frozenset(e) for e in skeleton.edges}
        expected = {frozenset(e) for e in relabelled.edges}
        if edges != expected:
            result.fail(reason='edge sets differ', extra=len(edges ^ expected))
        if not nx.faster_could_be_isomorphic(skeleton, cayley):
            result.fail(reason='degree sequences differ')
        if X.dimension >= 1:
            for s in X.simplices[1]:
                if classify(s).kind is not SimplexKind.EXTERNALLY_ADDITIVE:
                    result.fail(simplex=s.to_json(), reason='edge is not externally additive')
        result.details['f_vector'] = list(X.f_vector)
        return result

    # ---------- groups ----------

    def check_stabilizer(self, n_max: int = 5, orbit_n_max: int = 3, orbit_ball: int = 1) -> SuiteResult:
        """Stabilizer orders 2^n·n! and 12·2^(n-2)·(n-2)!, and one GL-orbit per kind in small balls"""
        result = SuiteResult('stabilizer', {'n_max': n_max, 'orbit_n_max': orbit_n_max, 'orbit_ball': orbit_ball})
        orders = {}
        for n in range(2, n_max + 1):
            expected = {
                'frame': 2 ** n * factorial(n),
                'augmented': 12 * 2 ** (n - 2) * factorial(n - 2),
            }
            for kind, sigma in (('frame', standard_frame(n)), ('augmented', standard_augmented_frame(n))):
                result.cases += 1
                gl = stabilizer(sigma, 'GL')
                sl = stabilizer(sigma, 'SL')
                orders[f'{kind}_{n}'] = {'GL': gl.order, 'SL': sl.order}
                if gl.order != expected[kind]:
                    result.fail(kind=kind, n=n, order=gl.order, expected=expected[kind])
                if 2 * sl.order != gl.order:
                    result.fail(kind=kind, n=n, reason='SL is not of index 2', sl_order=sl.order)
                if n <= 3 and not gl.check_closure():
                    result.fail(kind=kind, n=n, reason='element list is not closed')

        orbit_counts = {}
        for n in range(2, orbit_n_max + 1):
            X = self._complex(BoundedComplexSpec(n, 0, orbit_ball, Variant.BA))
            frames = [s for s in X.simplices[n - 1] if is_partial_frame(s)] if X.dimension >= n - 1 else []
            augmented = list(X.simplices[n]) if X.dimension >= n else []
            for kind, simplices in (('frame', frames), ('augmented', augmented)):
                if not simplices:
                    continue
                result.cases += len(simplices)
                orbits = orbit_decomposition(simplices, 'GL')
                orbit_counts[f'{kind}_{n}'] = len(orbits)
                if len(orbits) != 1:
                    result.fail(kind=kind, n=n, orbits=len(orbits), representatives=[o[0].to_json() for o in orbits[:3]])
        result.details.update({'orders': orders, 'orbit_counts': orbit_counts})
        return result

    def check_phi(self, cases: int = 100, n_max: int = 6, k_max: int = 2) -> SuiteResult:
        """φ ∈ SL_n(Z) stabilizes σ, reverses its orientation and fixes the indexed vectors"""
        result = SuiteResult('phi', {'cases': cases, 'n_max': n_max, 'k_max': k_max})
        rng = random.Random(self.seed)
        for _ in range(cases):
            n = rng.randint(3, n_max)
            k = rng.randint(0, min(k_max, n - 3))
            indices = tuple(sorted(rng.sample(range(1, n + 1), k)))
            g = random_unimodular(n, rng)
            basis = [g.column(i) for i in range(n)]
            orientation = [tuple(a + b for a, b in zip(basis[0], basis[1]))] + basis
            sigma = LineSetSimplex.of(orientation, n)
            result.cases += 1
            try:
                phi = phi_witness(sigma, indices, orientation)
                reason = None
                if phi.det() != 1:
                    reason = 'det is not 1'
                elif orientation_character(phi, orientation) != -1:
                    reason = 'orientation is preserved'
                elif any(phi.apply(basis[i - 1]) != basis[i - 1] for i in indices):
                    reason = 'an indexed vector moves'
            except (NoWitness, NotAStabilizer) as e:
                reason = str(e)
            if reason:
                result.fail(n=n, indices=list(indices), orientation=[list(v) for v in orientation], reason=reason)
        return result

    # ---------- Steinberg module ----------

    def check_presentation(self, n: int = 2, generators_ball: int = 2, relations_ball: int = 2) -> SuiteResult:
        """Every relation column is the R1 boundary of its augmented frame; for n = 2 rows are the Farey edges"""
        result = SuiteResult('presentation', {'n': n, 'generators_ball': generators_ball, 'relations_ball': relations_ball})
        presentation = presentation_matrices(n, generators_ball, relations_ball)
        result.cases = len(presentation.relations)
        boundary = presentation.boundary
        row_of = {vectors: i for i, vectors in enumerate(presentation.symbols)}
        for j, af in enumerate(presentation.relations):
            expected = {row_of[vectors]: coeff for vectors, coeff in r1_boundary(af).terms.items()}
            if boundary.column_entries(j) != expected:
                result.fail(relation=af.to_json(), reason='column differs from the R1 boundary')
        details = {
            'symbols': len(presentation.symbols),
            'relations': len(presentation.relations),
            'skipped_relations': presentation.skipped,
            'cokernel_rank': presentation.cokernel_rank(),
        }
        if n == 2:
            edges = self._complex(BoundedComplexSpec(2, 0, generators_ball, Variant.B)).f_vector
            details['farey_edges'] = edges[1] if len(edges) > 1 else 0
            if details['farey_edges'] != len(presentation.symbols):
                result.fail(reason='symbols do not match the Farey edges', farey_edges=details['farey_edges'])
        result.details.update(details)
        return result

    def check_relations(self, dims: Sequence[int] = (2, 3), cases: int = 50, bound: int = 3) -> SuiteResult:
        """R1 boundaries of random augmented frames vanish in the top homology of the Tits building"""
        result = SuiteResult('relations', {'dims': list(dims), 'cases': cases, 'bound': bound})
        rng = random.Random(self.seed)
        for n in dims:
            for _ in range(cases):
                af, orientation = random_augmented_frame(n, rng, bound)
                result.cases += 1
                try:
                    if not verify_in_tits(r1_boundary(af, orientation), SymbolSum(n)):
                        result.fail(orientation=[list(v) for v in orientation], reason='relation is not zero')
                except InconclusiveComplexTooSmall as e:
                    result.fail(orientation=[list(v) for v in orientation], reason=str(e))
        return result

    def check_reduce(self, plan: Sequence[Tuple[int, int, int, int]] = ((2, 30, 50, 7), (3, 10, 12, 3)),
                     verify_upto: int = 2) -> SuiteResult:
        """
        Ash-Rudolph reduction on seeded apartments; each plan entry is
        (n, instances, max |det|, entry bound)
        """
        result = SuiteResult('reduce', {'plan': [list(p) for p in plan], 'verify_upto': verify_upto})
        rng = random.Random(self.seed)
        largest_tree = 0
        for n, instances, max_det, bound in plan:
            for _ in range(instances):
                while True:
                    vectors = [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n)]
                    if 0 < abs(integer_det(vectors)) <= max_det:
                        break
                apartment = RationalApartment(tuple(vectors))
                trace: List[Tuple[int, int]] = []
                reduced = ash_rudolph_reduce(apartment, trace)
                result.cases += 1
                largest_tree = max(largest_tree, len(trace))
                label = [list(v) for v in vectors]
                if any(abs(integer_det(symbol)) != 1 for symbol in reduced.terms):
                    result.fail(apartment=label, reason='non-unimodular term')
                if any(child >= parent for parent, child in trace):
                    result.fail(apartment=label, reason='|det| does not decrease')
                if n <= verify_upto and not verify_in_tits(apartment, reduced):
                    result.fail(apartment=label, reason='classes differ in the Tits building')
        result.details['largest_trace'] = largest_tree
        return result

    # ---------- coinvariants ----------

    def _coinvariant_sweep(self, name: str, kind: str, offset: int, n_max: int, k_max: int) -> SuiteResult:
        result = SuiteResult(name, {'n_max': n_max, 'k_max': k_max})
        cases = [(kind, n, k) for k in range(k_max + 1) for n in range(offset + k, n_max + 1)]
        if self.n_jobs == 1:
            rows = [_coinvariant_case(*c) for c in cases]
        else:
            rows = Parallel(n_jobs=self.n_jobs)(delayed(_coinvariant_case)(*c) for c in cases)
        table = []
        for kind, n, k, order, dim in sorted(rows, key=lambda r: (r[1], r[2])):
            result.cases += 1
            table.append({'n': n, 'k': k, 'group_order': order, 'dim': dim})
            if dim != 0:
                result.fail(n=n, k=k, dim=dim, reason='coinvariants do not vanish')
        result.details['table'] = table
        return result

    def check_augmented_vanishing(self, n_max: int = 6, k_max: int = 2) -> SuiteResult:
        """Augmented-frame stabilizers in SL_n(Z) kill (Q_σ ⊗ V^{⊗k}) for n >= 3 + k"""
        return self._coinvariant_sweep('augmented-vanishing', 'augmented', 3, n_max, k_max)

    def check_frame_vanishing(self, n_max: int = 6, k_max: int = 2) -> SuiteResult:
        """Frame stabilizers in SL_n(Z) kill (Q_σ ⊗ V^{⊗k}) for n >= 2 + k"""
        return self._coinvariant_sweep('frame-vanishing', 'frame', 2, n_max, k_max)

    # ---------- exploratory ----------

    def check_exploratory(self, n: int = 2, max_ball: int = 3) -> SuiteResult:
        """Rational homology of bounded BA_n and of (BA_n, BA'_n); reported, never gating"""
        result = SuiteResult('exploratory', {'n': n, 'max_ball': max_ball}, gating=False)
        rows = []
        for ball in range(1, max_ball + 1):
            X = self._complex(BoundedComplexSpec(n, 0, ball, Variant.BA))
            A = self._complex(BoundedComplexSpec(n, 0, ball, Variant.BAPRIME))
            absolute = chain_complex(X)
            relative = relative_chain_complex(X, A)
            result.cases += 1
            rows.append({
                'ball': ball,
                'f_vector': list(X.f_vector),
                'betti_Q': [homology(absolute, d, 'Q')[0] for d in range(2)],
                'relative_betti_Q': {str(n - 1): homology(relative, n - 1, 'Q')[0]},
            })
        result.details['rows'] = rows
        return result
