"""Rates of the EPR/GHZ decomposition and the resulting lower bound."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..estimator import EstimatorConfig
from ..qcore import DecompositionSpec, PureState, RegisterLayout
from .entropies import EntropyEvaluator, as_evaluator


@dataclass(frozen=True)
class RatesReport:
    r1: float
    r2: float
    r3: float
    r4: float  # bits

    def as_tuple(self):
        return (self.r1, self.r2, self.r3, self.r4)


def decomposition_rates(spec: DecompositionSpec) -> RatesReport:
    """r1..r3 = c1^2..c3^2 and r4 = Shannon entropy (bits) of {c_i^2}."""
    p = spec.coefficients**2
    nz = p[p > 0]
    r4 = float(max(0.0, -np.sum(nz * np.log2(nz))))
    return RatesReport(float(p[0]), float(p[1]), float(p[2]), r4)


def epr(a: str, b: str) -> PureState:
    return PureState(RegisterLayout([(a, 2), (b, 2)]), np.array([1, 0, 0, 1]) / np.sqrt(2))


def ghz(a: str, b: str, r: str) -> PureState:
    amps = np.zeros(8)
    amps[0] = amps[7] = 1 / np.sqrt(2)
    return PureState(RegisterLayout([(a, 2), (b, 2), (r, 2)]), amps)


def tight_lower(
    spec: DecompositionSpec,
    mode: Union[str, EntropyEvaluator] = "oracle",
    config: Optional[EstimatorConfig] = None,
) -> float:
    """l = r1 S(A1) + r2 S(B1) + r4 (S(B3 R3) - S(A3 R3)) on EPR/EPR/GHZ targets, in bits.

    The fourth target is the tripartite GHZ state; its extra reference register
    is taken to be trivial for this family.
    """
    ev = as_evaluator(mode, config)
    rates = decomposition_rates(spec)
    psi1 = epr("A1", "R1")
    psi2 = epr("B1", "R2")
    psi4 = ghz("A3", "B3", "R3")
    s_a1 = ev(psi1, {"A1"}, "S(A1)")
    s_b1 = ev(psi2, {"B1"}, "S(B1)")
    s_b3r3 = ev(psi4, {"B3", "R3"}, "S(B3R3)")
    s_a3r3 = ev(psi4, {"A3", "R3"}, "S(A3R3)")
    return rates.r1 * s_a1 + rates.r2 * s_b1 + rates.r4 * (s_b3r3 - s_a3r3)
