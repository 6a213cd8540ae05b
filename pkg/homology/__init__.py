from homology.chains import ChainComplexData, chain_complex, homology, homology_profile, relative_chain_complex
from homology.coinvariants import (
    CoinvariantSpec,
    assembled_coinvariant_dim,
    averaging_projector,
    coinvariant_dim,
    hook_lengths,
    partition_weight,
    projector_rank,
    tensor_power,
    vcd,
    weyl_dimension,
    young_projector,
)
from homology.groups import (
    FiniteMatrixGroup,
    NoWitness,
    NotAStabilizer,
    NotFullSpan,
    orbit_decomposition,
    orbit_witness,
    orientation_character,
    phi_witness,
    stabilizer,
)
