"""Marginal entropies in oracle mode (eigendecomposition) or estimator mode (QDV)."""

from __future__ import annotations

from typing import Dict, Iterable, Optional, Union

import numpy as np

from ..estimator import EntropyEstimate, EstimatorConfig, minimize
from ..qcore import DensityMatrix, entropy_exact, reduce
from ..qcore.states import State

MODES = ("oracle", "estimator")
RANK_TOL = 1e-10


def pad_to_qubits(mat: np.ndarray) -> np.ndarray:
    """Embed a ``d x d`` matrix into the next power-of-two dimension with zeros.

    Entropy and rank are unchanged; this is how a qudit marginal is loaded into
    a qubit register before variational estimation.
    """
    d = mat.shape[0]
    size = 1 << max(1, (d - 1).bit_length())
    if size == d:
        return mat
    out = np.zeros((size, size), dtype=complex)
    out[:d, :d] = mat
    return out


def numerical_rank(mat: np.ndarray, tol: float = RANK_TOL) -> int:
    return max(1, int(np.sum(np.linalg.eigvalsh(mat) > tol)))


class EntropyEvaluator:
    """Computes marginal entropies in bits and remembers every QDV run.

    In estimator mode the rank handed to the estimator is the numerical rank of
    the marginal (the method assumes the rank is known) unless ``rank`` is given.
    """

    def __init__(self, mode: str = "oracle", config: Optional[EstimatorConfig] = None, rank: Optional[int] = None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.mode = mode
        self.config = config or EstimatorConfig()
        self.rank = rank
        self.estimates: Dict[str, EntropyEstimate] = {}
        self.exact: Dict[str, float] = {}

    def of_matrix(self, rho: Union[DensityMatrix, np.ndarray], label: str) -> float:
        mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
        exact = entropy_exact(mat)
        self.exact[label] = exact
        if self.mode == "oracle" or mat.shape[0] == 1:
            return exact
        padded = pad_to_qubits(mat)
        rank = self.rank or numerical_rank(mat)
        est = minimize(padded, self.config.replace(rank=min(rank, padded.shape[0])))
        self.estimates[label] = est
        return est.value_bits

    def __call__(self, state: State, registers: Iterable[str], label: Optional[str] = None) -> float:
        registers = sorted(set(registers))
        if not registers:
            return 0.0
        label = label or "S(" + "".join(registers) + ")"
        return self.of_matrix(reduce(state, registers), label)


def as_evaluator(mode: Union[str, EntropyEvaluator], config: Optional[EstimatorConfig] = None) -> EntropyEvaluator:
    if isinstance(mode, EntropyEvaluator):
        return mode
    return EntropyEvaluator(mode, config)
