"""Dense complex state substrate: layouts, states, partial traces, exact entropies."""

from .generators import (
    DECOMPOSABLE_LAYOUT,
    DecompositionSpec,
    decomposable_state,
    haar_random_pure,
    planted_common_subspace_state,
    random_density,
)
from .io import atomic_write_text, load_state, save_state, state_from_json, state_to_json
from .layout import DimensionError, RegisterLayout
from .states import (
    DensityMatrix,
    PureState,
    Spectrum,
    conditional_entropy_exact,
    eigensystem,
    entropy_exact,
    entropy_from_eigenvalues,
    exchange_AB,
    marginal_entropy,
    overlap,
    purify,
    reduce,
    tensor_product,
)

__all__ = [
    "atomic_write_text",
    "DECOMPOSABLE_LAYOUT",
    "DecompositionSpec",
    "DensityMatrix",
    "DimensionError",
    "PureState",
    "RegisterLayout",
    "Spectrum",
    "conditional_entropy_exact",
    "decomposable_state",
    "eigensystem",
    "entropy_exact",
    "entropy_from_eigenvalues",
    "exchange_AB",
    "haar_random_pure",
    "load_state",
    "marginal_entropy",
    "overlap",
    "planted_common_subspace_state",
    "purify",
    "random_density",
    "reduce",
    "save_state",
    "state_from_json",
    "state_to_json",
    "tensor_product",
]
