"""Stretched state and the common-subspace upper bound u[C] = S(R|A) on it.

Given an aligned state ``psi' = psi_c + psi_u`` split by a common subspace
``C``, the stretched state on ``(A, B, R, A', B')`` is

    psi_s = psi_c (x) |x>_A' |x>_B'  +  |y>_A |y>_B (x) psi_u[A' B' R].

Two placements of the fixed states are supported:

``"isometric"`` (default)
    ``x`` in ``C`` and ``y`` in the complement. Then the two branches are
    orthogonal on A'B' for every state, the map psi' -> psi_s is a local
    isometry on each side, and psi_s is normalized without rescaling.
``"literal"``
    ``x`` in the complement and ``y`` in ``C``. The branches can overlap when
    ``psi_u`` has weight on ``|x x>`` and ``psi_c`` on ``|y y>``; the result is
    renormalized. When ``C`` is the whole space no ``x`` exists and
    ``u = S(B) - S(A)`` is returned directly.
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np

from ..estimator import EstimatorConfig
from ..qcore import PureState, RegisterLayout
from .entropies import EntropyEvaluator, as_evaluator
from .loose import loose_upper
from .subspace import CommonSubspace, _abr, find_common_subspace

CONVENTIONS = ("isometric", "literal")
CONDITIONINGS = ("A", "AA'")


def _split(psi_aligned: PureState, C: CommonSubspace, A: str, B: str):
    t, _ = _abr(psi_aligned, A, B)
    d = t.shape[0]
    inside = np.zeros(d, dtype=bool)
    inside[list(C.indices)] = True
    tc = np.where(inside[:, None, None] & inside[None, :, None], t, 0)
    tu = np.where(~inside[:, None, None] & ~inside[None, :, None], t, 0)
    leftover = np.linalg.norm(t - tc - tu)
    if leftover > 1e-9:
        raise ValueError(f"state has weight {leftover:.3g} on mixed C/C-perp blocks; not a common subspace")
    return tc, tu


def _default_xy(C: CommonSubspace, convention: str):
    comp = C.complement
    if convention == "isometric":
        x = C.indices[0] if C.indices else 0
        y = comp[0] if comp else 0
    else:
        x = comp[0] if comp else None
        y = C.indices[0] if C.indices else 0
    return x, y


def build_stretched(
    psi_aligned: PureState,
    C: CommonSubspace,
    x_index: Optional[int] = None,
    y_index: Optional[int] = None,
    convention: str = "isometric",
    A: str = "A",
    B: str = "B",
) -> PureState:
    """Assemble the five-register stretched state.

    ``psi_aligned`` must already be in the aligned basis of ``C`` (see
    :meth:`CommonSubspace.align`). Registers are ordered ``(A, B, rest..., A', B')``.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    tc, tu = _split(psi_aligned, C, A, B)
    d = tc.shape[0]
    dx, dy = _default_xy(C, convention)
    x = dx if x_index is None else int(x_index)
    y = dy if y_index is None else int(y_index)
    inside = set(C.indices)
    if convention == "isometric":
        if inside and x not in inside:
            raise ValueError(f"x_index {x} must lie in C={C.indices}")
        if C.complement and y in inside:
            raise ValueError(f"y_index {y} must lie outside C={C.indices}")
    else:
        if x is None:
            raise ValueError("C is the whole space: no x in its complement")
        if x in inside:
            raise ValueError(f"x_index {x} must lie outside C={C.indices}")
        if inside and y not in inside:
            raise ValueError(f"y_index {y} must lie in C={C.indices}")

    rest_dim = tc.shape[2]
    s = np.zeros((d, d, rest_dim, d, d), dtype=complex)
    s[:, :, :, x, x] += tc
    s[y, y, :, :, :] += np.transpose(tu, (2, 0, 1))

    others = [(n, dim) for n, dim in psi_aligned.layout.registers if n not in (A, B)]
    layout = RegisterLayout([(A, d), (B, d)] + others + [(A + "'", d), (B + "'", d)])
    vec = s.reshape(-1)
    if convention == "isometric":
        return PureState(layout, vec)
    return PureState.from_unnormalized(layout, vec)


def stretched_conditional_entropy(
    psi: PureState,
    C: Optional[CommonSubspace] = None,
    mode: Union[str, EntropyEvaluator] = "oracle",
    config: Optional[EstimatorConfig] = None,
    convention: str = "isometric",
    conditioning: str = "A",
    A: str = "A",
    B: str = "B",
) -> float:
    """u[C] = S(R A)_{psi_s} - S(A)_{psi_s} in bits (no clipping by S(AB)).

    ``conditioning="AA'"`` conditions on Alice's register together with her
    ancilla instead of the original register alone.
    """
    if conditioning not in CONDITIONINGS:
        raise ValueError(f"conditioning must be one of {CONDITIONINGS}")
    ev = as_evaluator(mode, config)
    C = find_common_subspace(psi, A=A, B=B) if C is None else C
    aligned = C.align(psi, A, B)
    if convention == "literal" and not C.complement:
        return ev(aligned, {B}, "S(B)") - ev(aligned, {A}, "S(A)")
    psi_s = build_stretched(aligned, C, convention=convention, A=A, B=B)
    cond = {A} if conditioning == "A" else {A, A + "'"}
    refs = {n for n in psi.layout.names if n not in (A, B)}
    return ev(psi_s, refs | cond, "S(RA)_s") - ev(psi_s, cond, "S(A)_s")


def tight_upper(
    psi: PureState,
    C: Optional[CommonSubspace] = None,
    mode: Union[str, EntropyEvaluator] = "oracle",
    config: Optional[EstimatorConfig] = None,
    convention: str = "isometric",
    conditioning: str = "A",
    A: str = "A",
    B: str = "B",
) -> float:
    """min(u[C], S(AB)) in bits; C is discovered when not given."""
    ev = as_evaluator(mode, config)
    u = stretched_conditional_entropy(psi, C, ev, convention=convention, conditioning=conditioning, A=A, B=B)
    return min(u, loose_upper(psi, ev, A=A, B=B))
