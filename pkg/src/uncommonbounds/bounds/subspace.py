"""Common-subspace discovery.

The procedure diagonalizes both local marginals so that equal eigenvalues share
basis positions, splits the aligned basis into classes of indices linked by
nonzero amplitudes ``c_abk`` or ``c_bak``, and keeps the union of classes whose
projected component is invariant under exchanging A and B.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse.csgraph import connected_components

from ..qcore import DimensionError, PureState, eigensystem, reduce
from ..qcore.states import DensityMatrix

SYMMETRY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CommonSubspace:
    """Basis indices (in the aligned basis) plus the local aligning unitaries."""

    indices: Tuple[int, ...]
    align_U: np.ndarray
    align_W: np.ndarray

    @property
    def dim(self) -> int:
        return self.align_U.shape[0]

    @property
    def complement(self) -> Tuple[int, ...]:
        chosen = set(self.indices)
        return tuple(i for i in range(self.dim) if i not in chosen)

    @classmethod
    def fixed(cls, indices: Sequence[int], dim: int) -> "CommonSubspace":
        """A subspace given in advance in the computational basis (no alignment)."""
        indices = tuple(sorted(set(int(i) for i in indices)))
        if any(not 0 <= i < dim for i in indices):
            raise ValueError(f"indices {indices} outside [0, {dim})")
        eye = np.eye(dim, dtype=complex)
        return cls(indices, eye, eye)

    def projector(self, side: str = "A") -> np.ndarray:
        """Projector onto C in the original (unaligned) basis of A or B."""
        V = self.align_U if side == "A" else self.align_W
        P = np.zeros(self.dim)
        P[list(self.indices)] = 1.0
        return V.conj().T @ np.diag(P) @ V

    def align(self, psi: PureState, A: str = "A", B: str = "B") -> PureState:
        return align_state(psi, self.align_U, self.align_W, A, B)


def _abr(psi: PureState, A: str = "A", B: str = "B") -> Tuple[np.ndarray, List[int]]:
    """Amplitude tensor with axes (A, B, rest) and the permutation used."""
    layout = psi.layout
    pa, pb = layout.position(A), layout.position(B)
    if layout.dims[pa] != layout.dims[pb]:
        raise DimensionError(f"{A} and {B} must have equal dimension, got {layout.dims[pa]} and {layout.dims[pb]}")
    rest = [p for p in range(len(layout.dims)) if p not in (pa, pb)]
    order = [pa, pb] + rest
    t = np.transpose(psi.tensor(), order)
    d = layout.dims[pa]
    return t.reshape(d, d, -1), order


def _from_abr(psi: PureState, t: np.ndarray, order: List[int]) -> np.ndarray:
    dims = psi.layout.dims
    full = t.reshape([dims[p] for p in order])
    return np.transpose(full, np.argsort(order)).reshape(-1)


def align_state(psi: PureState, U: np.ndarray, W: np.ndarray, A: str = "A", B: str = "B") -> PureState:
    """(U on A) (W on B) |psi>."""
    t, order = _abr(psi, A, B)
    t = np.einsum("ia,jb,abk->ijk", U, W, t)
    return PureState.from_unnormalized(psi.layout, _from_abr(psi, t, order))


def _two_pointer(alpha: np.ndarray, beta: np.ndarray, tol: float) -> List[Tuple[int, int]]:
    pairs = []
    i = j = 0
    while i < len(alpha) and j < len(beta):
        if abs(alpha[i] - beta[j]) <= tol:
            pairs.append((i, j))
            i += 1
            j += 1
        elif alpha[i] > beta[j]:
            i += 1
        else:
            j += 1
    return pairs


def _clusters(alpha: np.ndarray, beta: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Cluster ids for both spectra: values chained by gaps <= tol share an id."""
    values = np.concatenate((alpha, beta))
    order = np.argsort(-values, kind="stable")
    ids = np.empty(len(values), dtype=int)
    current = 0
    for pos, idx in enumerate(order):
        if pos and values[order[pos - 1]] - values[idx] > tol:
            current += 1
        ids[idx] = current
    return ids[: len(alpha)], ids[len(alpha) :]


def _dominant_index(v: np.ndarray) -> int:
    p = np.abs(v) ** 2
    return int(np.flatnonzero(p >= p.max() - 1e-12)[0])


def spectral_align(
    rhoA: Union[DensityMatrix, np.ndarray], rhoB: Union[DensityMatrix, np.ndarray], tol: float = 1e-9
) -> Tuple[np.ndarray, np.ndarray, int]:
    """Unitaries U, W diagonalizing rhoA, rhoB with matched eigenvalues in front.

    Eigenvalues are paired by a greedy two-pointer pass over both descending
    spectra (``|alpha - beta| <= tol``); ``k`` is the number of pairs and the
    pairs occupy positions ``0..k-1`` in both aligned bases. Within a group of
    (near-)equal eigenvalues the A eigenvectors are kept and the B eigenvectors
    are rotated to overlap them as much as possible, which fixes the phase and
    degeneracy freedom so that identical blocks get identical bases. Matched
    pairs are ordered by the dominant computational index of the A vector, so
    diagonal inputs keep their natural labels where possible.
    """
    a, b = eigensystem(rhoA), eigensystem(rhoB)
    n = len(a.eigenvalues)
    if len(b.eigenvalues) != n:
        raise DimensionError(f"marginals have different dimensions {n} and {len(b.eigenvalues)}")
    pairs = _two_pointer(a.eigenvalues, b.eigenvalues, tol)
    ca, cb = _clusters(a.eigenvalues, b.eigenvalues, tol)

    VA, VB = a.eigenvectors, b.eigenvectors.copy()
    matched: List[Tuple[np.ndarray, np.ndarray, float]] = []
    unmatched_a: List[Tuple[float, np.ndarray]] = []
    unmatched_b: List[Tuple[float, np.ndarray]] = []

    for cid in np.unique(np.concatenate((ca, cb))):
        ia = np.flatnonzero(ca == cid)
        ib = np.flatnonzero(cb == cid)
        m = sum(1 for i, _ in pairs if ca[i] == cid)
        SA, SB = VA[:, ia], VB[:, ib]
        if m == 0:
            unmatched_a += [(a.eigenvalues[i], VA[:, i]) for i in ia]
            unmatched_b += [(b.eigenvalues[j], VB[:, j]) for j in ib]
            continue
        # A vectors with the largest weight inside B's eigenspace get matched
        weight = np.linalg.norm(SB.conj().T @ SA, axis=0)
        pick = np.sort(np.argsort(-weight, kind="stable")[:m])
        rest = np.setdiff1d(np.arange(len(ia)), pick)
        SA_m = SA[:, pick]
        X, _, Yh = np.linalg.svd(SB.conj().T @ SA_m, full_matrices=True)
        SB_m = SB @ (X[:, :m] @ Yh)
        SB_rest = SB @ X[:, m:]
        for col in range(m):
            matched.append((SA_m[:, col], SB_m[:, col], a.eigenvalues[ia[pick[col]]]))
        unmatched_a += [(a.eigenvalues[ia[i]], SA[:, i]) for i in rest]
        unmatched_b += [(b.eigenvalues[ib[0]], SB_rest[:, i]) for i in range(SB_rest.shape[1])]

    matched.sort(key=lambda item: (_dominant_index(item[0]), -item[2]))
    unmatched_a.sort(key=lambda item: -item[0])
    unmatched_b.sort(key=lambda item: -item[0])

    basis_a = np.column_stack([m[0] for m in matched] + [v for _, v in unmatched_a])
    basis_b = np.column_stack([m[1] for m in matched] + [v for _, v in unmatched_b])
    return basis_a.conj().T, basis_b.conj().T, len(pairs)


def nonzero_classes(psi_aligned: PureState, tol: float = 1e-9, A: str = "A", B: str = "B") -> List[Tuple[int, ...]]:
    """Connected components of ``a ~ b`` iff some ``|c_abk| > tol`` or ``|c_bak| > tol``.

    Indices that never appear form singleton classes. Classes are sorted tuples,
    ordered by their smallest element.
    """
    t, _ = _abr(psi_aligned, A, B)
    adj = np.any(np.abs(t) > tol, axis=2)
    adj = adj | adj.T
    n_comp, labels = connected_components(adj.astype(np.int8), directed=False)
    classes = [tuple(int(i) for i in np.flatnonzero(labels == c)) for c in range(n_comp)]
    return sorted(classes, key=lambda cls: cls[0])


def class_projection(psi: PureState, cls: Sequence[int], A: str = "A", B: str = "B") -> np.ndarray:
    """Unnormalized tensor (A, B, rest) of psi projected onto span(cls) x span(cls)."""
    t, _ = _abr(psi, A, B)
    mask = np.zeros(t.shape[0], dtype=bool)
    mask[list(cls)] = True
    out = np.zeros_like(t)
    out[np.ix_(mask, mask)] = t[np.ix_(mask, mask)]
    return out


def exchange_fidelity(psi: PureState, cls: Sequence[int], A: str = "A", B: str = "B") -> Optional[float]:
    """``|<psi_x|psi_x,ex>| / ||psi_x||^2`` for the class projection, None if it vanishes."""
    px = class_projection(psi, cls, A, B)
    norm2 = float(np.vdot(px, px).real)
    if norm2 < SYMMETRY_TOL:
        return None
    return abs(np.vdot(px, px.transpose(1, 0, 2))) / norm2


def class_symmetry_test(
    psi: PureState,
    cls: Sequence[int],
    mode: str = "exact",
    shots: int = 1000,
    threshold: float = 0.95,
    seed=None,
    A: str = "A",
    B: str = "B",
) -> bool:
    """Is the projection of psi onto cls x cls x R exchange-symmetric?

    ``mode="swap"`` simulates a swap test between the projected component and
    its exchanged copy: each of ``shots`` trials accepts with probability
    ``1/2 + F^2/2`` and the class passes if the accept fraction reaches
    ``threshold``.
    """
    if len(cls) == 0:
        raise ValueError("class must be nonempty")
    fid = exchange_fidelity(psi, cls, A, B)
    if fid is None:
        return False
    if mode == "exact":
        return fid >= 1 - SYMMETRY_TOL
    if mode == "swap":
        rng = np.random.default_rng(seed)
        p_accept = min(1.0, 0.5 + 0.5 * fid**2)
        return rng.binomial(shots, p_accept) / shots >= threshold
    raise ValueError(f"mode must be 'exact' or 'swap', got {mode!r}")


def find_common_subspace(
    psi: PureState,
    tol: float = 1e-9,
    test: str = "exact",
    shots: int = 1000,
    threshold: float = 0.95,
    seed=None,
    A: str = "A",
    B: str = "B",
) -> CommonSubspace:
    """Union of exchange-symmetric classes after spectral alignment (possibly empty)."""
    rhoA = reduce(psi, {A})
    rhoB = reduce(psi, {B})
    U, W, _ = spectral_align(rhoA, rhoB, tol)
    aligned = align_state(psi, U, W, A, B)
    rng = np.random.default_rng(seed)
    keep: List[int] = []
    for cls in nonzero_classes(aligned, tol, A, B):
        if class_symmetry_test(aligned, cls, test, shots, threshold, rng, A, B):
            keep.extend(cls)
    return CommonSubspace(tuple(sorted(keep)), U, W)
