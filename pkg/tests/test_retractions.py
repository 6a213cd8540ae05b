from math import gcd

import pytest

from collector.collector import PropertyCheckCollector
from complexes import BoundedComplex, BoundedComplexSpec, Variant, enumerate_complex, link, plink
from lattice import LineSetSimplex, SimplexKind, classify, line_of, standard_augmented_frame, standard_frame
from retractions import (
    LevelFunctional,
    MorseValue,
    NotInternallyAdditive,
    RetractionClass,
    extension_group_order,
    f_nonneg_rep,
    is_carrying,
    morse_profile,
    omega,
    omega_bar,
    pihat,
    pl_morse,
    plink_class,
    r_max,
    r_value,
    retract,
    retract_link_simple,
    subdivide,
    tau_image,
)

W = (0, 0, 1, 10)
V1 = (1, 0, 0, 9)
V2 = (0, 1, 0, 9)
V0 = (1, 1, 0, 18)


@pytest.fixture
def ctx():
    return LevelFunctional((0, 0, 0, 1), 10, W)


@pytest.fixture
def carrying_plink():
    spec = BoundedComplexSpec(4, 0, 18, Variant.BA)
    X = BoundedComplex.from_simplices(spec, [LineSetSimplex.of([V0, V1, V2, W], 4)])
    return plink(X, LineSetSimplex.of([W], 4))


def test_level_functional_validation():
    with pytest.raises(ValueError):
        LevelFunctional((0, 1), 3, (1, 2))
    with pytest.raises(ValueError):
        LevelFunctional((1, 1), 0, (1, -1))
    ctx = LevelFunctional.standard(3, 0, 2)
    assert ctx.F == (0, 0, 1) and ctx.w == (1, 0, 2)
    assert LevelFunctional.standard(2, 1, 3).w == (0, 1, 3)


def test_omega_examples():
    assert omega(10, 9, 1) == 1
    assert omega(10, 3, 4) == 0
    assert omega_bar(10, 19, 11) == 1


@pytest.mark.parametrize("N", range(1, 9))
def test_extension_is_cyclic_of_order_n_squared(N):
    assert extension_group_order(N) == N * N


@pytest.mark.parametrize("N", range(1, 7))
def test_omega_vanishes_on_multiples_of_n(N):
    assert all(omega(N, k * N, b) == 0 for k in range(N + 1) for b in range(N * N))
    assert all(omega(N, a, k * N) == 0 for k in range(N + 1) for a in range(N * N))


def test_pihat_moves_high_lines_down(ctx):
    assert pihat(line_of((1, 1, 0, 18)), ctx) == line_of((1, 1, -1, 8))
    assert pihat(line_of((1, 0, 0, 9)), ctx) == line_of((1, 0, 0, 9))
    # F-nonnegative representative of a line with negative last coordinate
    assert f_nonneg_rep(line_of((1, 0, 0, -12)), ctx) == (-1, 0, 0, 12)
    assert abs(ctx(pihat(line_of((1, 0, 0, -12)), ctx).rep)) < 10


def test_pihat_outside_the_link():
    ctx = LevelFunctional((0, 1), 2, (1, 2))
    # (3, 2) - w = (2, 0) is not primitive
    assert pihat(line_of((3, 2)), ctx) == line_of((1, 0))
    assert pihat(ctx.w_line, ctx) == ctx.w_line

    lines = {line_of((a, b)) for a in range(-4, 5) for b in range(-4, 5) if gcd(a, b) == 1}
    for line in lines - {ctx.w_line}:
        image = pihat(line, ctx)
        assert abs(ctx(image.rep)) < ctx.N
        assert pihat(image, ctx) == image


def test_carrying_detection(ctx):
    c = LineSetSimplex.of([V0, V1, V2], 4)
    assert is_carrying(c, ctx)
    assert plink_class(c, ctx) is RetractionClass.CARRYING
    assert not is_carrying(LineSetSimplex.of([(1, 1, 0, 6), (1, 0, 0, 3), (0, 1, 0, 3)], 4), ctx)
    with pytest.raises(NotInternallyAdditive):
        is_carrying(LineSetSimplex.of([V1, V2], 4), ctx)


def test_subdivided_carrying_triangle_retracts(ctx, carrying_plink):
    Y = subdivide(carrying_plink, ctx)
    assert len(Y.tau_vertices) == 1
    assert tau_image(Y.tau_vertices[0], ctx) == line_of((1, 0, -1, -1))

    mapping = retract(Y, ctx, strict=False)
    assert mapping.is_valid, mapping.defects
    assert mapping.r_after < 10 <= mapping.r_before
    assert not mapping.collapses

    tau = Y.tau_vertices[0]
    kinds = []
    for keep in ([V1, V2], [V0, V1], [V0, V2]):
        source = frozenset([tau] + [line_of(v) for v in keep])
        image = [mapping.vertex_map[v] for v in source]
        kinds.append(classify(LineSetSimplex(tuple(image) + (line_of(W),), 4)))
    alpha, gamma, beta = kinds
    assert alpha.kind is SimplexKind.INTERNALLY_ADDITIVE and line_of(W) in alpha.core
    assert gamma.kind is SimplexKind.INTERNALLY_ADDITIVE and line_of(W) in gamma.core
    assert beta.kind is SimplexKind.INTERNALLY_ADDITIVE and line_of(W) not in beta.core


@pytest.mark.parametrize("n, m, N", [(2, 0, 2), (2, 1, 2), (3, 0, 2)])
def test_retraction_suite_has_no_defects(n, m, N):
    result = PropertyCheckCollector().run_suite('retraction', n=n, m=m, ball=N, N=N)
    assert result.passed, result.failures
    assert result.details['r_max_after'] < N


@pytest.mark.slow
@pytest.mark.parametrize("n, m, N", [(2, 0, 3), (2, 1, 3), (3, 0, 3)])
def test_retraction_suite_ball_three(n, m, N):
    result = PropertyCheckCollector().run_suite('retraction', n=n, m=m, ball=3, N=N)
    assert result.passed, result.failures


def test_r_values():
    F = (0, 0, 1)
    assert r_value(line_of((1, 0, -3)), F) == 3
    assert r_max([line_of((1, 0, -3)), line_of((0, 1, 2))], F) == 3
    assert r_max([], F) == 0


def test_pl_morse_cases():
    assert pl_morse(standard_frame(2)) == MorseValue(1, 1, 0, -1)
    assert pl_morse(standard_augmented_frame(2)) == MorseValue(1, 2, -1, -2)
    profile = morse_profile([standard_frame(2), standard_augmented_frame(2)])
    assert list(profile) == sorted(profile)


def test_link_retraction_of_additive_simplex():
    ctx = LevelFunctional.standard(3, 0, 2)
    X = enumerate_complex(BoundedComplexSpec(3, 0, 2, Variant.BA))
    sigma = LineSetSimplex.of([(1, 0, 2), (1, 0, 1), (0, 0, 1)], 3)
    L = link(X, sigma)
    assert L.vertices
    mapping = retract_link_simple(L, sigma, ctx, strict=False)
    assert mapping.is_valid, mapping.defects
    assert mapping.r_after < 2


def test_link_retraction_rejects():
    ctx = LevelFunctional.standard(3, 0, 2)
    X = enumerate_complex(BoundedComplexSpec(3, 0, 1, Variant.BA))
    with pytest.raises(ValueError):
        retract_link_simple(X, LineSetSimplex.of([(1, 0, 1)], 3), ctx)
    with pytest.raises(ValueError):
        retract_link_simple(X, LineSetSimplex.of([(1, 0, 2), (0, 1, 0)], 3), ctx)


def test_link_retraction_in_frame_complex():
    ctx = LevelFunctional.standard(3, 0, 2)
    X = enumerate_complex(BoundedComplexSpec(3, 0, 2, Variant.B))
    L = link(X, LineSetSimplex.of([ctx.w], 3))
    assert line_of((0, 1, 2)) in L.vertices
    mapping = retract_link_simple(L, LineSetSimplex.of([ctx.w], 3), ctx, strict=False)
    assert mapping.is_valid, mapping.defects
    assert mapping.vertex_map[line_of((0, 1, 2))] == line_of((-1, 1, 0))
    assert mapping.r_before == 2 and mapping.r_after < 2


def test_w_additive_edge_collapses(ctx):
    sum_line = (1, 0, 1, 19)
    spec = BoundedComplexSpec(4, 0, 19, Variant.BA)
    X = BoundedComplex.from_simplices(spec, [LineSetSimplex.of([sum_line, V1, W], 4)])
    P = plink(X, LineSetSimplex.of([W], 4))
    edge = LineSetSimplex.of([sum_line, V1], 4)
    assert plink_class(edge, ctx) is RetractionClass.W_ADDITIVE

    mapping = retract(subdivide(P, ctx), ctx)
    assert mapping.is_valid
    assert mapping.vertex_map[line_of(sum_line)] == line_of(V1)
    assert [image for _, image in mapping.collapses] == [(line_of(V1),)]
