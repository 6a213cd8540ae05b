from lattice.lines import (
    Line,
    LineSetSimplex,
    NotASimplex,
    NotPrimitive,
    SimplexClass,
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
    signed_relation,
    standard_augmented_frame,
    standard_frame,
    transport,
    unit_vector,
)
