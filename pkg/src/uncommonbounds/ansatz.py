"""Layered rotation + CNOT-ladder circuit and its parameter-shift derivatives.

Qubit 0 is the most significant bit of the flat basis index. Each layer applies
``Rx``, ``Ry``, ``Rz`` (in that time order, independent angles) to every qubit
and then a CNOT ladder ``0->1, 1->2, ..., (n-2)->(n-1)``. The angle of axis
``a`` on qubit ``q`` in layer ``l`` is ``theta[(l * n + q) * 3 + a]``.
Rotations are ``R_P(alpha) = exp(-i alpha P / 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple, Union

import numpy as np

from .qcore import DensityMatrix, DimensionError

SHIFT = np.pi / 2


@dataclass(frozen=True)
class AnsatzSpec:
    n_qubits: int
    layers: int

    def __post_init__(self):
        if self.n_qubits < 1 or self.layers < 1:
            raise ValueError(f"need n_qubits >= 1 and layers >= 1, got {self}")

    @property
    def n_params(self) -> int:
        return 3 * self.n_qubits * self.layers

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @classmethod
    def for_dim(cls, dim: int, layers: Optional[int] = None, rank: int = 1) -> "AnsatzSpec":
        n = qubit_count(dim)
        return cls(n, default_layers(n, rank) if layers is None else layers)


def default_layers(n_qubits: int, rank: int = 1) -> int:
    """Depth with about 1.5x the angles needed to place a rank-``rank`` frame.

    Orthonormal ``r``-frames in ``C^d`` modulo column phases have real dimension
    ``2 d r - r^2 - r``; the floor is 4 layers up to 4 qubits and 6 above.
    """
    d = 2**n_qubits
    dof = 2 * d * rank - rank * rank - rank
    base = 4 if n_qubits <= 4 else 6
    return max(base, math.ceil(1.5 * dof / (3 * n_qubits)))


def qubit_count(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two >= 2")
    return n


def _rotation(axis: int, angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    if axis == 0:
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == 1:
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[c - 1j * s, 0], [0, c + 1j * s]])


@lru_cache(maxsize=None)
def _cnot_perm(n: int, control: int, target: int) -> np.ndarray:
    idx = np.arange(2**n)
    cbit = (idx >> (n - 1 - control)) & 1
    return idx ^ (cbit << (n - 1 - target))


# ("rot", qubit, axis, param index) | ("cnot", control, target)
Gate = Tuple[str, int, int, int]


@lru_cache(maxsize=None)
def gate_sequence(spec: AnsatzSpec) -> Tuple[Gate, ...]:
    n = spec.n_qubits
    gates: List[Gate] = []
    for layer in range(spec.layers):
        for q in range(n):
            for axis in range(3):
                gates.append(("rot", q, axis, (layer * n + q) * 3 + axis))
        for q in range(n - 1):
            gates.append(("cnot", q, q + 1, -1))
    return tuple(gates)


def _apply_1q(mat: np.ndarray, gate: np.ndarray, q: int, n: int) -> np.ndarray:
    """Left-multiply the rows of ``mat`` (shape ``(2**n, m)``) by ``gate`` on qubit ``q``."""
    t = mat.reshape(2**q, 2, -1)
    return np.matmul(gate, t).reshape(mat.shape)


def _apply_gate(mat: np.ndarray, g: Gate, theta: np.ndarray, n: int, extra: float = 0.0) -> np.ndarray:
    kind, a, b, j = g
    if kind == "rot":
        return _apply_1q(mat, _rotation(b, theta[j] + extra), a, n)
    return mat[_cnot_perm(n, a, b)]


def _conjugate_back(rho: np.ndarray, g: Gate, theta: np.ndarray, n: int) -> np.ndarray:
    """``G^dagger rho G`` for one gate."""
    kind, a, b, j = g
    if kind == "rot":
        gd = _rotation(b, theta[j]).conj().T
        half = _apply_1q(rho, gd, a, n)
        return _apply_1q(half.conj().T, gd, a, n).conj().T
    perm = _cnot_perm(n, a, b)
    return rho[np.ix_(perm, perm)]


def _check(spec: AnsatzSpec, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != spec.n_params:
        raise ValueError(f"expected {spec.n_params} angles for {spec}, got {theta.shape[0]}")
    return theta


def apply_circuit(spec: AnsatzSpec, theta, mat: np.ndarray) -> np.ndarray:
    """U(theta) @ mat."""
    theta = _check(spec, theta)
    out = np.asarray(mat, dtype=complex)
    for g in gate_sequence(spec):
        out = _apply_gate(out, g, theta, spec.n_qubits)
    return out


def build_unitary(spec: AnsatzSpec, theta) -> np.ndarray:
    return apply_circuit(spec, theta, np.eye(spec.dim, dtype=complex))


def _rho_matrix(rho: Union[DensityMatrix, np.ndarray], spec: AnsatzSpec) -> np.ndarray:
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    qubit_count(mat.shape[0])
    if mat.shape != (spec.dim, spec.dim):
        raise DimensionError(f"state of dimension {mat.shape[0]} does not fit {spec}")
    return mat


def _check_rank(r: int, dim: int) -> None:
    if not 1 <= r <= dim:
        raise ValueError(f"rank {r} outside [1, {dim}]")


def _diag_expect(cols: np.ndarray, rho: np.ndarray) -> np.ndarray:
    e = np.sum(cols.conj() * (rho @ cols), axis=0).real
    return np.clip(e, 0.0, 1.0)


def _sample(e: np.ndarray, shots: int, rng: Optional[np.random.Generator]) -> np.ndarray:
    if not shots:
        return e
    if rng is None:
        raise ValueError("shot mode needs a numpy Generator")
    return rng.binomial(shots, e) / shots


def diagonal_expectations(
    rho,
    spec: AnsatzSpec,
    theta,
    r: int,
    shots: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """``e_i = <i| U^dagger rho U |i>`` for the first ``r`` basis states.

    With ``shots > 0`` each value is replaced by a binomial estimate.
    """
    mat = _rho_matrix(rho, spec)
    _check_rank(r, spec.dim)
    cols = apply_circuit(spec, theta, np.eye(spec.dim, r, dtype=complex))
    return _sample(_diag_expect(cols, mat), shots, rng)


def shift_gradient(
    rho,
    spec: AnsatzSpec,
    theta,
    t,
    c: float,
    shots: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Parameter-shift derivative of ``-c * sum_i t_i e_i(theta)``.

    Each component is ``[g(theta_j + pi/2) - g(theta_j - pi/2)] / 2``. A forward
    sweep stores the circuit columns before every gate and a backward sweep
    carries ``A^dagger rho A`` for the gates after it, so each shifted circuit
    costs one gate application instead of a full rebuild.
    """
    mat = _rho_matrix(rho, spec)
    theta = _check(spec, theta)
    t = np.asarray(t, dtype=float)
    r = t.shape[0]
    _check_rank(r, spec.dim)
    n = spec.n_qubits
    gates = gate_sequence(spec)

    before = []
    cols = np.eye(spec.dim, r, dtype=complex)
    for g in gates:
        before.append(cols)
        cols = _apply_gate(cols, g, theta, n)

    grad = np.zeros_like(theta)
    back = mat
    for g, cols in zip(reversed(gates), reversed(before)):
        if g[0] == "rot":
            plus = _sample(_diag_expect(_apply_gate(cols, g, theta, n, SHIFT), back), shots, rng)
            minus = _sample(_diag_expect(_apply_gate(cols, g, theta, n, -SHIFT), back), shots, rng)
            grad[g[3]] = -c * (t @ plus - t @ minus) / 2
        back = _conjugate_back(back, g, theta, n)
    return grad
