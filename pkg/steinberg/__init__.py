from steinberg.apartments import (
    InconclusiveComplexTooSmall,
    RationalApartment,
    TitsChain,
    apartment_chain,
    ash_rudolph_reduce,
    chain_of,
    verify_in_tits,
)
from steinberg.symbols import (
    FrameSymbol,
    NotABasis,
    NotAugmentedFrame,
    Presentation,
    SymbolSum,
    canonicalize,
    default_orientation,
    presentation_matrices,
    r1_boundary,
)
