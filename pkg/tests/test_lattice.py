from itertools import combinations

import pytest

from exactlin import IntMatrix
from lattice import (
    Line,
    LineSetSimplex,
    NotASimplex,
    NotPrimitive,
    SimplexKind,
    additive_orientation,
    classify,
    in_coordinates,
    in_span,
    is_partial_augmented_frame,
    is_partial_frame,
    line_of,
    permutation_sign,
    primitive_part,
    standard_augmented_frame,
    standard_frame,
    transport,
)


def test_line_of_picks_canonical_representative():
    assert line_of((-1, 2)).rep == (1, -2)
    assert line_of((0, -3, 1)).rep == (0, 3, -1)
    assert line_of((2, 1)) == line_of((-2, -1))


@pytest.mark.parametrize("vector", [(0, 0), (2, 4), (0, -6, 3)])
def test_line_of_rejects_non_primitive(vector):
    with pytest.raises(NotPrimitive):
        line_of(vector)


def test_line_constructor_requires_canonical_form():
    with pytest.raises(NotPrimitive):
        Line((-1, 0))


def test_primitive_part():
    assert primitive_part((4, -6)) == ((2, -3), 2)


def test_lines_compare_from_the_last_coordinate():
    assert line_of((0, 1)) > line_of((1, 0))
    assert line_of((1, 1)) > line_of((0, 1))
    assert sorted([line_of((1, 1)), line_of((1, 0)), line_of((0, 1))])[0].rep == (1, 0)


def test_simplex_rejects_repeats_and_implicit_lines():
    with pytest.raises(NotASimplex):
        LineSetSimplex((line_of((1, 0)), line_of((-1, 0))), 2)
    with pytest.raises(NotASimplex):
        LineSetSimplex.of([(1, 0, 0)], 2, 1)
    with pytest.raises(NotASimplex):
        LineSetSimplex.of([(1, 0, 0)], 2)


def test_frames_and_augmented_frames():
    assert is_partial_frame(standard_frame(3))
    assert is_partial_frame(LineSetSimplex.of([(1, 1, 0)], 3))
    assert not is_partial_frame(LineSetSimplex.of([(1, 1), (1, -1)], 2))
    assert is_partial_augmented_frame(standard_augmented_frame(3))
    assert not is_partial_augmented_frame(LineSetSimplex.of([(1, 1), (1, -1)], 2))


def test_classify_kinds():
    assert classify(standard_frame(2)).kind is SimplexKind.STANDARD
    internal = classify(standard_augmented_frame(3))
    assert internal.kind is SimplexKind.INTERNALLY_ADDITIVE
    assert {l.rep for l in internal.core} == {(1, 0, 0), (0, 1, 0), (1, 1, 0)}
    # in Z^2 with m = 1: ⟨e2⟩ and ⟨e1 + e2⟩ differ by the implicit e1
    external = classify(LineSetSimplex.of([(0, 1), (1, 1)], 1, 1))
    assert external.kind is SimplexKind.EXTERNALLY_ADDITIVE
    assert external.external_index == 0
    with pytest.raises(NotASimplex):
        classify(LineSetSimplex.of([(1, 1), (1, -1)], 2))


def test_additive_orientation_sums():
    s = LineSetSimplex.of([(1, 0), (0, 1), (1, -1)], 2)
    v0, v1, v2 = additive_orientation(s)
    assert v0 == tuple(a + b for a, b in zip(v1, v2))
    assert line_of(v0) == max(s.lines)


def test_permutation_sign():
    assert permutation_sign([1, 2, 3]) == 1
    assert permutation_sign([2, 1, 3]) == -1
    assert permutation_sign([3, 1, 2]) == 1


def test_span_and_transport():
    assert in_span((2, 2, 0), [(1, 1, 0)])
    assert not in_span((1, 0, 0), [(1, 1, 0)])
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert transport(LineSetSimplex.of([(1, 0), (1, 1)], 2), swap) == LineSetSimplex.of([(0, 1), (1, 1)], 2)


def test_in_coordinates_includes_implicit_lines():
    s = LineSetSimplex.of([(0, 1, 1)], 2, 1)
    local = in_coordinates(s, [(1, 0, 0), (0, 1, 1)])
    assert local.m == 0
    assert {l.rep for l in local.lines} == {(1, 0), (0, 1)}


def test_json_exchange():
    s = standard_augmented_frame(3)
    assert LineSetSimplex.from_json(s.to_json()) == s


@pytest.mark.parametrize("dim", [2, 3])
def test_sum_with_doubled_term_is_not_augmented(dim):
    pad = (0,) * (dim - 2)
    s = LineSetSimplex.of([(1, 0) + pad, (0, 1) + pad, (1, 2) + pad], dim)
    assert not is_partial_augmented_frame(s)
    assert not is_partial_frame(s)


@pytest.mark.parametrize("lines, n, m", [
    ([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)], 3, 0),
    ([(1, 2, 0), (0, 1, 0), (1, 3, 0), (0, 0, 1)], 3, 0),
    ([(0, 1, 0), (1, 1, 0), (0, 0, 1)], 2, 1),
    ([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3, 0),
])
def test_frames_are_closed_under_subsets(lines, n, m):
    s = LineSetSimplex.of(lines, n, m)
    assert is_partial_augmented_frame(s)
    frame = is_partial_frame(s)
    for size in range(1, len(lines)):
        for subset in combinations(s.lines, size):
            face = LineSetSimplex(subset, n, m)
            assert is_partial_augmented_frame(face)
            if frame:
                assert is_partial_frame(face)
