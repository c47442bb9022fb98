from .cache import GroupCache, GroupFamily
from .engine import (
    EnumerationLimitError,
    GroupSet,
    ModMatrix,
    NonInvertibleError,
    braid_image,
    close,
    congruence_kernel,
    filter_matrices,
    gamma_prime_quotient_group,
    gamma_quotient_group,
    intersection,
    is_internal_direct_product,
    reduce,
    set_product,
    sp_group,
    stabilizer_subgroup,
)
from .permutations import (
    Presentation,
    PresentationError,
    default_presentation,
    find_presentation_section,
    permutation_image,
    permutation_matrix,
)

__all__ = [
    "EnumerationLimitError",
    "GroupCache",
    "GroupFamily",
    "GroupSet",
    "ModMatrix",
    "NonInvertibleError",
    "Presentation",
    "PresentationError",
    "braid_image",
    "close",
    "congruence_kernel",
    "default_presentation",
    "filter_matrices",
    "find_presentation_section",
    "gamma_prime_quotient_group",
    "gamma_quotient_group",
    "intersection",
    "is_internal_direct_product",
    "permutation_image",
    "permutation_matrix",
    "reduce",
    "set_product",
    "sp_group",
    "stabilizer_subgroup",
]
