from complexes.bounded import (
    BoundedComplex,
    BoundedComplexSpec,
    InvalidSpec,
    NotStandard,
    SimplexNotInComplex,
    Variant,
    candidate_lines,
    enumerate_complex,
    link,
    link_iso,
    plink,
    simplex_key,
    standard_model,
)
from complexes.posets import (
    AbstractComplex,
    PosetRealization,
    cayley_ball,
    cayley_vertex,
    one_skeleton,
    poset_realization,
)
from complexes.tits import FullSpan, Summand, TitsPosetTruncation, fiber, fiber_in_coordinates, span_map
