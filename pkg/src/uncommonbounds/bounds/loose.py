"""Merge-and-send upper bound and the entropy-difference lower bound."""

from __future__ import annotations

from typing import Optional, Union

from ..estimator import EstimatorConfig
from ..qcore import PureState
from .entropies import EntropyEvaluator, as_evaluator


def _require_ab(psi: PureState, A: str, B: str) -> None:
    missing = {A, B} - set(psi.layout.names)
    if missing:
        raise KeyError(f"state has no register(s) {sorted(missing)}")


def loose_upper(
    psi: PureState,
    mode: Union[str, EntropyEvaluator] = "oracle",
    config: Optional[EstimatorConfig] = None,
    A: str = "A",
    B: str = "B",
) -> float:
    """S(AB) in bits."""
    _require_ab(psi, A, B)
    return as_evaluator(mode, config)(psi, {A, B}, label="S(AB)")


def loose_lower(
    psi: PureState,
    mode: Union[str, EntropyEvaluator] = "oracle",
    config: Optional[EstimatorConfig] = None,
    A: str = "A",
    B: str = "B",
) -> float:
    """|S(B) - S(A)| in bits."""
    _require_ab(psi, A, B)
    ev = as_evaluator(mode, config)
    return abs(ev(psi, {B}, label="S(B)") - ev(psi, {A}, label="S(A)"))
