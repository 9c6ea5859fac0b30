"""Upper and lower bounds on quantum uncommon information."""

from ..qcore import DecompositionSpec
from .decomposition import RatesReport, decomposition_rates, epr, ghz, tight_lower
from .entropies import EntropyEvaluator, pad_to_qubits
from .loose import loose_lower, loose_upper
from .report import BoundReport, compute_bounds
from .stretched import build_stretched, stretched_conditional_entropy, tight_upper
from .subspace import (
    CommonSubspace,
    align_state,
    class_symmetry_test,
    exchange_fidelity,
    find_common_subspace,
    nonzero_classes,
    spectral_align,
)

__all__ = [
    "BoundReport",
    "CommonSubspace",
    "DecompositionSpec",
    "EntropyEvaluator",
    "RatesReport",
    "align_state",
    "build_stretched",
    "class_symmetry_test",
    "compute_bounds",
    "decomposition_rates",
    "epr",
    "exchange_fidelity",
    "find_common_subspace",
    "ghz",
    "loose_lower",
    "loose_upper",
    "nonzero_classes",
    "pad_to_qubits",
    "spectral_align",
    "stretched_conditional_entropy",
    "tight_lower",
    "tight_upper",
]
