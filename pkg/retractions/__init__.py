from retractions.morse import MorseValue, last_coordinate_r, morse_profile, pl_morse, r_max, r_value
from retractions.retract import (
    LevelFunctional,
    NotInternallyAdditive,
    NotSimplicial,
    RetractionClass,
    SimplicialMap,
    SubdividedComplex,
    TauVertex,
    carrying_core,
    extension_group_order,
    f_nonneg_rep,
    is_carrying,
    omega,
    omega_bar,
    pihat,
    plink_class,
    retract,
    retract_link_simple,
    subdivide,
    tau_image,
)
