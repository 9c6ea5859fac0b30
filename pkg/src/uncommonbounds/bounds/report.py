"""Assembled bound values for one state."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ..estimator import EntropyEstimate, EstimatorConfig
from ..qcore import DecompositionSpec, PureState
from .decomposition import tight_lower
from .entropies import EntropyEvaluator
from .loose import loose_lower, loose_upper
from .stretched import stretched_conditional_entropy
from .subspace import CommonSubspace, find_common_subspace

WHICH = ("loose", "tight-upper", "tight-lower")


@dataclass
class BoundReport:
    mode: str
    loose_upper_bits: float
    loose_lower_bits: float
    tight_upper_bits: Optional[float] = None
    tight_lower_bits: Optional[float] = None
    common_subspace_indices: Tuple[int, ...] = ()
    estimates: Dict[str, EntropyEstimate] = field(default_factory=dict, repr=False)

    def to_dict(self, trace_paths: Optional[Dict[str, str]] = None) -> dict:
        return {
            "mode": self.mode,
            "loose_upper_bits": self.loose_upper_bits,
            "loose_lower_bits": self.loose_lower_bits,
            "tight_upper_bits": self.tight_upper_bits,
            "tight_lower_bits": self.tight_lower_bits,
            "common_subspace_indices": list(self.common_subspace_indices),
            "traces": dict(trace_paths or {}),
        }

    def to_json(self, trace_paths: Optional[Dict[str, str]] = None) -> str:
        return json.dumps(self.to_dict(trace_paths), indent=2) + "\n"


def compute_bounds(
    psi: PureState,
    which: str = "loose",
    mode: str = "oracle",
    config: Optional[EstimatorConfig] = None,
    spec: Optional[DecompositionSpec] = None,
    subspace: Optional[CommonSubspace] = None,
    convention: str = "isometric",
    conditioning: str = "A",
) -> BoundReport:
    """Loose bounds always; plus the tight bound selected by ``which``.

    ``tight-upper`` reports min(u[C], S(AB)); ``tight-lower`` needs the
    decomposition coefficients of the state.
    """
    if which not in WHICH:
        raise ValueError(f"which must be one of {WHICH}, got {which!r}")
    ev = EntropyEvaluator(mode, config)
    upper = loose_upper(psi, ev)
    lower = loose_lower(psi, ev)
    report = BoundReport(mode, upper, lower)
    if which == "tight-upper":
        C = subspace if subspace is not None else find_common_subspace(psi)
        u = stretched_conditional_entropy(psi, C, ev, convention=convention, conditioning=conditioning)
        report.tight_upper_bits = min(u, upper)
        report.common_subspace_indices = C.indices
    elif which == "tight-lower":
        if spec is None:
            raise ValueError("tight-lower needs the decomposition coefficients")
        report.tight_lower_bits = tight_lower(spec, ev)
    report.estimates = dict(ev.estimates)
    return report
