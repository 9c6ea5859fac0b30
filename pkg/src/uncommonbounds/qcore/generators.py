"""Seeded state generators.

Every generator takes ``seed`` as either an integer or a
``numpy.random.Generator``; passing a generator lets callers thread one PRNG
through several draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .layout import RegisterLayout
from .states import DensityMatrix, PureState, _as_layout, reduce

Seed = Union[int, np.random.Generator, None]


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_random_pure(layout, seed: Seed = None) -> PureState:
    """Unitarily invariant random pure state (normalized complex Gaussian vector)."""
    layout = _as_layout(layout)
    return PureState.from_unnormalized(layout, _complex_gaussian(_rng(seed), layout.total_dim))


def random_density(dim, rank: int, seed: Seed = None) -> DensityMatrix:
    """Random density matrix of the given rank.

    Obtained as the marginal of a Haar-random pure state on ``dim x rank``.
    ``dim`` may be an integer or a :class:`RegisterLayout` for the result.
    """
    layout = _as_layout(dim)
    d = layout.total_dim
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} outside [1, {d}]")
    joint = RegisterLayout([("_sys", d), ("_env", rank)])
    psi = haar_random_pure(joint, seed)
    rho = reduce(psi, {"_sys"})
    return DensityMatrix(layout, rho.matrix, rank=rank)


def planted_common_subspace_state(
    n_A: int, k: int, n_R: int, mix: float = 0.5, seed: Seed = None
) -> PureState:
    """Pure state on (A, B, R) with an exchange-symmetric block on span{|0>..|k-1>}.

    The component on ``C x C x R`` (``C`` = first ``k`` basis states) is a random
    tensor symmetrized over A <-> B; the component on ``C' x C' x R`` (``C'`` the
    complement) is unstructured. They are combined with weights ``sqrt(mix)``
    and ``sqrt(1 - mix)``. When ``k`` covers the whole space only the symmetric
    part remains.
    """
    d_A, d_R = 2**n_A, 2**n_R
    if not 1 <= k <= d_A:
        raise ValueError(f"k={k} outside [1, {d_A}]")
    if not 0.0 < mix < 1.0:
        raise ValueError(f"mix must lie in (0, 1), got {mix}")
    rng = _rng(seed)

    sym = _complex_gaussian(rng, (k, k, d_R))
    sym = sym + sym.transpose(1, 0, 2)
    sym /= np.linalg.norm(sym)

    psi = np.zeros((d_A, d_A, d_R), dtype=complex)
    if k == d_A:
        psi[:, :, :] = sym
    else:
        rest = _complex_gaussian(rng, (d_A - k, d_A - k, d_R))
        rest /= np.linalg.norm(rest)
        psi[:k, :k, :] = np.sqrt(mix) * sym
        psi[k:, k:, :] = np.sqrt(1.0 - mix) * rest
    layout = RegisterLayout([("A", d_A), ("B", d_A), ("R", d_R)])
    return PureState.from_unnormalized(layout, psi.reshape(-1))


@dataclass(frozen=True)
class DecompositionSpec:
    """Coefficients of the EPR/GHZ-decomposable family on (A:6, B:6, R:6)."""

    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        c = self.coefficients
        if np.any(c < 0):
            raise ValueError(f"coefficients must be nonnegative, got {tuple(c)}")
        if abs(np.sum(c**2) - 1.0) > 1e-12:
            raise ValueError(f"squared coefficients must sum to 1, got {np.sum(c**2)!r}")

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4], dtype=float)

    @classmethod
    def random(cls, seed: Seed = None) -> "DecompositionSpec":
        """Uniform draw from the positive orthant of the unit 3-sphere."""
        c = np.abs(_rng(seed).standard_normal(4))
        c /= np.linalg.norm(c)
        return cls(*(float(x) for x in c))

    @classmethod
    def from_unnormalized(cls, *values: float) -> "DecompositionSpec":
        c = np.abs(np.asarray(values, dtype=float))
        c /= np.linalg.norm(c)
        return cls(*(float(x) for x in c))


DECOMPOSABLE_LAYOUT = RegisterLayout([("A", 6), ("B", 6), ("R", 6)])

# (a, b, r, coefficient slot, weight)
_DECOMPOSABLE_TERMS = (
    (0, 0, 0, 0, 1 / np.sqrt(2)),
    (1, 0, 1, 0, 1 / np.sqrt(2)),
    (2, 1, 2, 1, 1 / np.sqrt(2)),
    (2, 2, 3, 1, 1 / np.sqrt(2)),
    (3, 3, 4, 2, 1 / np.sqrt(2)),
    (4, 4, 4, 2, 1 / np.sqrt(2)),
    (5, 5, 5, 3, 1.0),
)


def decomposable_state(spec: DecompositionSpec) -> PureState:
    """c1 EPR_AR-like + c2 EPR_BR-like + c3 EPR_AB-like + c4 |555> on six-level registers."""
    c = spec.coefficients
    psi = np.zeros((6, 6, 6), dtype=complex)
    for a, b, r, slot, weight in _DECOMPOSABLE_TERMS:
        psi[a, b, r] = c[slot] * weight
    return PureState(DECOMPOSABLE_LAYOUT, psi.reshape(-1))
