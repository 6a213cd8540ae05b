from exactlin.matrices import IntMatrix, SparseMatrix, rational_rank, rational_inverse
from exactlin.normalforms import (
    NotASummandBasis,
    SNFResult,
    coordinates_in,
    det,
    hnf,
    inverse_unimodular,
    is_summand_basis,
    saturate,
    snf,
    unimodular_complete,
)
