"""Dense pure states, density matrices and the exact-entropy oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .layout import DimensionError, RegisterLayout

ATOL = 1e-10


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.flags.writeable = False
    return arr


def _as_layout(layout) -> RegisterLayout:
    if isinstance(layout, RegisterLayout):
        return layout
    if isinstance(layout, (int, np.integer)):
        return RegisterLayout([("S", int(layout))])
    return RegisterLayout(layout)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over a :class:`RegisterLayout`."""

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "layout", _as_layout(self.layout))
        amps = _frozen(self.amplitudes).reshape(-1)
        if amps.shape[0] != self.layout.total_dim:
            raise DimensionError(
                f"{amps.shape[0]} amplitudes for layout of dimension {self.layout.total_dim}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > ATOL:
            raise ValueError(f"state is not normalized (squared norm {norm2!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, layout, vector) -> "PureState":
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(layout, vector / norm)

    @classmethod
    def basis(cls, layout, *digits: int) -> "PureState":
        layout = _as_layout(layout)
        amps = np.zeros(layout.total_dim, dtype=complex)
        amps[layout.flat_index(digits)] = 1.0
        return cls(layout, amps)

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per register."""
        return self.amplitudes.reshape(self.layout.dims)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()), rank=1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix over a layout."""

    layout: RegisterLayout
    matrix: np.ndarray
    rank: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "layout", _as_layout(self.layout))
        mat = _frozen(self.matrix)
        d = self.layout.total_dim
        if mat.shape != (d, d):
            raise DimensionError(f"matrix shape {mat.shape} does not match layout dimension {d}")
        if np.max(np.abs(mat - mat.conj().T), initial=0.0) > ATOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"density matrix trace {tr!r} != 1")
        if np.linalg.eigvalsh(mat)[0] < -ATOL:
            raise ValueError("density matrix has a negative eigenvalue")
        if self.rank is not None and not 1 <= self.rank <= d:
            raise ValueError(f"rank {self.rank} outside [1, {d}]")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def numerical_rank(self, tol: float = ATOL) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > tol))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in descending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


State = Union[PureState, DensityMatrix]


def tensor_product(x: State, y: State) -> State:
    """Kronecker product; the register list of ``y`` is appended to that of ``x``."""
    layout = x.layout.concat(y.layout)
    if isinstance(x, PureState) and isinstance(y, PureState):
        return PureState(layout, np.kron(x.amplitudes, y.amplitudes))
    if isinstance(x, DensityMatrix) and isinstance(y, DensityMatrix):
        return DensityMatrix(layout, np.kron(x.matrix, y.matrix))
    raise TypeError("tensor_product needs two states of the same kind")


def reduce(state: State, keep: Iterable[str]) -> DensityMatrix:
    """Partial trace onto the registers in ``keep`` (declared order preserved)."""
    keep = set(keep)
    if not keep:
        raise ValueError("keep must name at least one register")
    layout = state.layout
    kept = layout.positions(keep)
    traced = tuple(p for p in range(len(layout.dims)) if p not in kept)
    sub = layout.subset(keep)
    dk = sub.total_dim

    if isinstance(state, PureState):
        t = np.transpose(state.tensor(), kept + traced).reshape(dk, -1)
        rho = t @ t.conj().T
    else:
        n = len(layout.dims)
        t = state.matrix.reshape(layout.dims + layout.dims)
        row = list(range(n))
        col = [p if p in traced else p + n for p in range(n)]
        out = [p for p in kept] + [p + n for p in kept]
        rho = np.einsum(t, row + col, out).reshape(dk, dk)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(sub, rho)


def eigensystem(dm: Union[DensityMatrix, np.ndarray]) -> Spectrum:
    mat = dm.matrix if isinstance(dm, DensityMatrix) else np.asarray(dm, dtype=complex)
    if np.max(np.abs(mat - mat.conj().T), initial=0.0) > ATOL:
        raise ValueError("eigensystem needs a Hermitian matrix")
    vals, vecs = np.linalg.eigh(mat)
    order = np.argsort(-vals, kind="stable")
    return Spectrum(vals[order], vecs[:, order])


def _log(base: str):
    if base == "bits":
        return np.log2
    if base == "nats":
        return np.log
    raise ValueError(f"base must be 'bits' or 'nats', got {base!r}")


def entropy_from_eigenvalues(eigenvalues, base: str = "bits") -> float:
    lam = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, None)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * _log(base)(lam))))


def entropy_exact(dm: Union[DensityMatrix, np.ndarray], base: str = "bits") -> float:
    """von Neumann entropy from the eigenvalues, with 0 log 0 = 0.

    Eigenvalues within the PSD slack (down to -1e-10) are clamped to zero.
    """
    mat = dm.matrix if isinstance(dm, DensityMatrix) else np.asarray(dm, dtype=complex)
    return entropy_from_eigenvalues(np.linalg.eigvalsh(mat), base)


def marginal_entropy(state: State, registers: Iterable[str], base: str = "bits") -> float:
    registers = set(registers)
    if not registers:
        return 0.0
    return entropy_exact(reduce(state, registers), base)


def conditional_entropy_exact(state: State, X: Iterable[str], Y: Iterable[str]) -> float:
    """S(X|Y) = S(XY) - S(Y) in bits. May be negative."""
    X, Y = set(X), set(Y)
    if X & Y:
        raise ValueError(f"conditioning sets overlap: {sorted(X & Y)}")
    return marginal_entropy(state, X | Y) - marginal_entropy(state, Y)


def overlap(x: PureState, y: PureState) -> complex:
    """Inner product <x|y>."""
    if x.layout.dims != y.layout.dims:
        raise DimensionError(f"layout dims differ: {x.layout.dims} vs {y.layout.dims}")
    return complex(np.vdot(x.amplitudes, y.amplitudes))


def exchange_AB(psi: PureState, A: str = "A", B: str = "B") -> PureState:
    """Swap the contents of two equal-dimension registers."""
    layout = psi.layout
    pa, pb = layout.position(A), layout.position(B)
    if layout.dims[pa] != layout.dims[pb]:
        raise DimensionError(f"cannot exchange {A} (dim {layout.dims[pa]}) and {B} (dim {layout.dims[pb]})")
    swapped = np.swapaxes(psi.tensor(), pa, pb)
    return PureState(layout, swapped.reshape(-1))


def purify(dm: DensityMatrix, ref_name: str = "R") -> PureState:
    """Canonical purification sum_i sqrt(l_i) |v_i>|i>_ref.

    The reference register has dimension equal to ``dm.rank`` when known,
    otherwise the number of eigenvalues above 1e-10.
    """
    spec = eigensystem(dm)
    r = dm.rank if dm.rank is not None else max(1, int(np.sum(spec.eigenvalues > ATOL)))
    lam = np.clip(spec.eigenvalues[:r], 0.0, None)
    vecs = spec.eigenvectors[:, :r] * np.sqrt(lam)
    layout = dm.layout.concat(RegisterLayout([(ref_name, r)]))
    return PureState.from_unnormalized(layout, vecs.reshape(-1))
