import pytest

from complexes import AbstractComplex, BoundedComplexSpec, Variant, enumerate_complex
from exactlin import IntMatrix, SparseMatrix
from homology import (
    ChainComplexData,
    CoinvariantSpec,
    NoWitness,
    NotAStabilizer,
    NotFullSpan,
    assembled_coinvariant_dim,
    chain_complex,
    coinvariant_dim,
    homology,
    homology_profile,
    hook_lengths,
    orbit_decomposition,
    orbit_witness,
    orientation_character,
    partition_weight,
    phi_witness,
    projector_rank,
    relative_chain_complex,
    stabilizer,
    tensor_power,
    vcd,
    weyl_dimension,
    young_projector,
)
from lattice import LineSetSimplex, line_of, standard_augmented_frame, standard_frame
from steinberg import presentation_matrices

RP2_FACETS = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
              (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)]

AUGMENTED4_ORIENTATION = [(1, 1, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]


def test_circle():
    cc = chain_complex(AbstractComplex.from_facets([(0, 1), (1, 2), (0, 2)]))
    assert cc.dims == (3, 3)
    assert homology(cc, 0) == (1, [])
    assert homology(cc, 1) == (1, [])
    assert homology(cc, 0, reduced=True) == (0, [])
    assert cc.euler_characteristic() == 0


def test_projective_plane_torsion():
    cc = chain_complex(AbstractComplex.from_facets(RP2_FACETS))
    assert cc.dims == (6, 15, 10)
    assert homology(cc, 1, "Z") == (0, [2])
    assert homology(cc, 1, "Q") == (0, [])
    assert homology(cc, 2, "Z") == (0, [])
    assert [entry["betti"] for entry in homology_profile(cc, "Q", reduced=True)] == [0, 0, 0]


def test_chain_complex_rejects_bad_boundaries():
    d1 = SparseMatrix.from_dense([[1], [1]], 1)
    with pytest.raises(ValueError):
        ChainComplexData((3, 1), (SparseMatrix(0, 3), d1))
    with pytest.raises(ValueError):
        ChainComplexData((2, 1, 1), (SparseMatrix(0, 2), d1, SparseMatrix.from_dense([[1]], 1)))
    with pytest.raises(ValueError):
        homology(chain_complex(AbstractComplex.from_facets([(0, 1)])), 0, ring="F2")


def test_relative_homology_matches_presentation():
    X = enumerate_complex(BoundedComplexSpec(2, 0, 1, Variant.BA))
    A = enumerate_complex(BoundedComplexSpec(2, 0, 1, Variant.BAPRIME))
    cc = relative_chain_complex(X, A)
    assert cc.dims == (0, 5, 2)
    betti, torsion = homology(cc, 1, "Z")
    assert betti == presentation_matrices(2, 1, 1).cokernel_rank() == 3
    assert torsion == []


@pytest.mark.parametrize("simplex, group, order", [
    (standard_frame(3), "GL", 48),
    (standard_frame(3), "SL", 24),
    (standard_augmented_frame(4), "GL", 96),
    (standard_frame(2), "SL", 4),
    (standard_augmented_frame(2), "SL", 6),
])
def test_stabilizer_orders(simplex, group, order):
    G = stabilizer(simplex, group)
    assert G.order == order
    assert G.check_closure()


def test_stabilizer_needs_full_span():
    with pytest.raises(NotFullSpan):
        stabilizer(LineSetSimplex.of([(1, 0, 0), (0, 1, 0)], 3))
    with pytest.raises(ValueError):
        stabilizer(standard_frame(2), "PGL")


def test_orientation_character():
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert orientation_character(swap, standard_frame(2)) == -1
    assert orientation_character(IntMatrix.from_rows([[-1, 0], [0, -1]]), standard_frame(2)) == 1
    assert orientation_character(swap, standard_augmented_frame(2)) == -1
    with pytest.raises(NotAStabilizer):
        orientation_character(IntMatrix.from_rows([[1, 1], [0, 1]]), standard_frame(2))


@pytest.mark.parametrize("indices", [(), (1,), (3,), (4,)])
def test_phi_witness(augmented4, indices):
    phi = phi_witness(augmented4, indices, AUGMENTED4_ORIENTATION)
    assert phi.det() == 1
    assert orientation_character(phi, augmented4) == -1
    for i in indices:
        assert phi.apply(AUGMENTED4_ORIENTATION[i]) == AUGMENTED4_ORIENTATION[i]


def test_phi_witness_rejects():
    with pytest.raises(NoWitness):
        phi_witness(standard_augmented_frame(3), (3,))
    with pytest.raises(NoWitness):
        phi_witness(standard_frame(3))
    with pytest.raises(NoWitness):
        phi_witness(standard_augmented_frame(4), (5,))


def test_orbit_witness():
    a = standard_frame(2)
    b = LineSetSimplex.of([(1, 0), (1, 1)], 2)
    g = orbit_witness(a, b)
    assert {line_of(g.apply(l.rep)) for l in a.lines} == set(b.lines)
    assert orbit_witness(a, standard_augmented_frame(2)) is None


def test_orbits_of_augmented_frames(ba2_ball2):
    triangles = list(ba2_ball2.simplices[2])
    assert len(orbit_decomposition(triangles, "GL")) == 1
    assert len(orbit_decomposition(triangles, "SL")) == 1


def test_young_projectors():
    assert young_projector((1,), 3).to_dense() == IntMatrix.identity(3).to_lists()
    assert young_projector((2,), 2).rank() == 3
    assert young_projector((1, 1), 3).rank() == 3
    P = young_projector((2, 1), 2)
    assert (P @ P).to_dense() == P.to_dense()
    assert P.rank() == weyl_dimension((2, 1), 2) == 2


def test_weyl_dimensions_and_hooks():
    assert hook_lengths((2, 1)) == [[3, 1], [1]]
    assert weyl_dimension((2,), 2) == 3
    assert weyl_dimension((1, 1), 3) == 3
    assert weyl_dimension((2, 1), 3) == 8
    assert partition_weight((2, 1), 3) == 3
    assert partition_weight((1, 1, 1), 3) == 0
    assert vcd(4) == 6
    with pytest.raises(ValueError):
        weyl_dimension((1, 2), 3)


def test_tensor_power_of_identity():
    assert tensor_power(IntMatrix.identity(2), 2) == {(i, i): 1 for i in range(4)}


@pytest.mark.parametrize("simplex, n, k, group", [
    ("frame", 3, 0, "GL"),
    ("frame", 2, 0, "SL"),
    ("augmented", 3, 0, "SL"),
    ("augmented", 4, 1, "SL"),
])
def test_twisted_coinvariants_vanish(simplex, n, k, group):
    sigma = standard_augmented_frame(n) if simplex == "augmented" else standard_frame(n)
    spec = CoinvariantSpec(stabilizer(sigma, group), k, sigma)
    assert coinvariant_dim(spec) == 0
    assert projector_rank(spec) == 0


def test_coinvariants_in_rank_two_survive():
    sigma = standard_augmented_frame(2)
    assert coinvariant_dim(CoinvariantSpec(stabilizer(sigma, "SL"), 0, sigma)) == 1
    assert coinvariant_dim(CoinvariantSpec(stabilizer(standard_frame(3), "GL"))) == 1


def test_partition_and_plain_power_agree():
    sigma = standard_augmented_frame(3)
    G = stabilizer(sigma, "SL")
    plain = CoinvariantSpec(G, 1, sigma)
    schur = CoinvariantSpec(G, 1, sigma, partition=(1,))
    assert coinvariant_dim(plain) == coinvariant_dim(schur) == projector_rank(plain)
    assert projector_rank(plain, work_bound=0) is None


def test_coinvariant_spec_validation():
    G = stabilizer(standard_frame(2), "GL")
    with pytest.raises(ValueError):
        CoinvariantSpec(G, -1)
    with pytest.raises(ValueError):
        CoinvariantSpec(G, 2, partition=(1,))
    with pytest.raises(ValueError):
        CoinvariantSpec(G, 3, partition=(1, 1, 1))
    with pytest.raises(ValueError):
        CoinvariantSpec(G, 0, det_restriction="det=-1")


def test_assembled_coinvariants():
    X = enumerate_complex(BoundedComplexSpec(2, 0, 1, Variant.BA))
    assert assembled_coinvariant_dim(X.simplices[2], 0, "SL") == (1, 1)


@pytest.mark.slow
@pytest.mark.parametrize("n, k", [(n, k) for n in range(3, 7) for k in range(0, 3) if n >= 3 + k])
def test_augmented_sweep(n, k):
    sigma = standard_augmented_frame(n)
    assert coinvariant_dim(CoinvariantSpec(stabilizer(sigma, "SL"), k, sigma)) == 0
