from fractions import Fraction

import pytest

from exactlin import IntMatrix
from exactlin.matrices import integer_det
from lattice import LineSetSimplex, standard_augmented_frame, standard_frame
from steinberg import (
    NotABasis,
    NotAugmentedFrame,
    RationalApartment,
    SymbolSum,
    TitsChain,
    apartment_chain,
    ash_rudolph_reduce,
    canonicalize,
    chain_of,
    default_orientation,
    presentation_matrices,
    r1_boundary,
    verify_in_tits,
)


def test_canonicalize_sorts_lines_with_sign():
    symbol = canonicalize([(0, 1), (1, 0)])
    assert symbol.vectors == ((1, 0), (0, 1)) and symbol.sign == -1
    symbol = canonicalize([(1, 1), (0, -1)])
    assert symbol.vectors == ((0, 1), (1, 1)) and symbol.sign == -1
    assert canonicalize([(1, 0), (0, 1)]).sign == 1


def test_canonicalize_rejects_non_bases():
    with pytest.raises(NotABasis):
        canonicalize([(2, 0), (0, 1)])
    with pytest.raises(NotABasis):
        canonicalize([(1, 0, 0), (0, 1, 0)])


def test_symbol_sum_cancels_to_empty():
    total = SymbolSum(2).add_vectors([(1, 0), (0, 1)]).add_vectors([(0, 1), (1, 0)])
    assert len(total) == 0
    assert SymbolSum.from_json(SymbolSum(2).add_vectors([(1, 1), (0, 1)], 3).to_json()).terms == {
        ((0, 1), (1, 1)): Fraction(-3)
    }


def test_r1_boundary_has_three_faces():
    boundary = r1_boundary(standard_augmented_frame(2))
    assert set(boundary.terms) == {((1, 0), (0, 1)), ((0, 1), (1, 1)), ((1, 0), (1, 1))}
    assert all(abs(c) == 1 for c in boundary.terms.values())


@pytest.mark.parametrize("n", [2, 3])
def test_r1_boundary_vanishes_in_tits_building(n):
    boundary = r1_boundary(standard_augmented_frame(n))
    assert len(boundary) == 3
    assert verify_in_tits(boundary, SymbolSum(n))


def test_r1_boundary_rejects_frames_and_bad_orientations():
    with pytest.raises(NotAugmentedFrame):
        r1_boundary(standard_frame(2))
    with pytest.raises(NotAugmentedFrame):
        r1_boundary(standard_augmented_frame(2), [(1, 0), (0, 1), (1, 1)])


def test_presentation_rank_two():
    presentation = presentation_matrices(2, 1, 1)
    assert len(presentation.symbols) == 5
    assert len(presentation.relations) == 2
    assert presentation.skipped == 0
    assert len(presentation.boundary.data) == 6
    assert presentation.cokernel_rank() == 3


def test_presentation_needs_rank_two():
    with pytest.raises(ValueError):
        presentation_matrices(1, 1, 1)


def test_rational_apartment_validation():
    with pytest.raises(ValueError):
        RationalApartment(((1, 2), (2, 4)))
    with pytest.raises(ValueError):
        RationalApartment(((1,),))
    assert RationalApartment(((1, 0), (5, 3))).det == 3
    assert not RationalApartment(((1, 0), (5, 3))).is_integral


def test_apartment_chain_is_a_cycle():
    chain = apartment_chain(RationalApartment(((1, 0, 0), (0, 1, 0), (1, 1, 2))))
    assert len(chain.terms) == 6
    assert chain.is_cycle()
    assert not TitsChain(3, {next(iter(chain.terms)): Fraction(1)}).is_cycle()


def test_ash_rudolph_on_det_three():
    apartment = RationalApartment(((1, 0), (5, 3)))
    trace = []
    reduced = ash_rudolph_reduce(apartment, trace)
    assert len(reduced) == 2
    assert trace == [(3, 1), (3, 1)]
    assert all(abs(integer_det(vectors)) == 1 for vectors in reduced.terms)
    assert verify_in_tits(apartment, reduced)


@pytest.mark.parametrize("vectors", [
    ((1, 0), (0, 7)),
    ((2, 1), (1, 5)),
    ((1, 0, 0), (0, 1, 0), (1, 1, 2)),
    ((3, 0, 1), (0, 1, 0), (1, 1, 4)),
])
def test_ash_rudolph_preserves_the_class(vectors):
    apartment = RationalApartment(vectors)
    trace = []
    reduced = ash_rudolph_reduce(apartment, trace)
    assert all(child < parent for parent, child in trace)
    assert verify_in_tits(apartment, reduced)


def test_unimodular_apartment_is_its_own_symbol():
    reduced = ash_rudolph_reduce(RationalApartment(((0, 1), (1, 0))))
    assert reduced.terms == {((1, 0), (0, 1)): Fraction(-1)}


def test_classes_can_differ():
    assert not verify_in_tits(RationalApartment(((1, 0), (0, 1))), SymbolSum(2))
    assert not verify_in_tits([(2, RationalApartment(((1, 0), (0, 1))))], [(1, RationalApartment(((1, 0), (0, 1))))])


def test_chain_of_sums_pairs():
    pairs = [(1, RationalApartment(((1, 0), (0, 1)))), (-1, RationalApartment(((1, 0), (0, 1))))]
    assert chain_of(pairs).is_zero()
    with pytest.raises(ValueError):
        chain_of([])


@pytest.mark.parametrize("rows", [[[1, 1], [0, 1]], [[0, -1], [1, 0]], [[2, 1], [1, 1]]])
def test_boundary_is_equivariant(rows):
    g = IntMatrix.from_rows(rows)
    af = standard_augmented_frame(2)
    orientation = default_orientation(af)
    moved = [g.apply(v) for v in orientation]
    image = r1_boundary(LineSetSimplex.of(moved, 2), moved)
    assert image.terms == r1_boundary(af, orientation).transform(g).terms
