"""Convergence experiments for the four bound estimators.

Each experiment builds its target state from a seed, runs one QDV estimation
per entropy term and combines the per-step best-so-far estimates into a bound
trajectory, which is compared against the exact value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .bounds import CommonSubspace, build_stretched, decomposition_rates, epr, ghz
from .bounds.entropies import EntropyEvaluator
from .estimator import LN2, EstimatorConfig
from .qcore import (
    DecompositionSpec,
    RegisterLayout,
    planted_common_subspace_state,
    purify,
    random_density,
)

FIGURES = ("loose-upper", "loose-lower", "tight-upper", "tight-lower")
SIZES = {
    "loose-upper": (4, 6, 8),
    "loose-lower": (4, 6, 8),
    "tight-upper": (4, 8),
    "tight-lower": (4, 6, 8),
}
# total qubits -> (qubits per side, common-subspace dim, reference qubits)
PLANTED_SPLITS = {4: (1, 1, 2), 8: (2, 2, 4)}


@dataclass
class Experiment:
    figure: str
    size: int
    seed: int
    oracle_bits: float
    trace_bits: np.ndarray
    terms: Dict[str, dict] = field(default_factory=dict)
    evaluator: Optional[EntropyEvaluator] = None

    @property
    def final_bits(self) -> float:
        return float(self.trace_bits[-1])

    @property
    def final_gap_bits(self) -> float:
        return abs(self.final_bits - self.oracle_bits)

    def summary(self) -> dict:
        return {
            "figure": self.figure,
            "size": self.size,
            "seed": self.seed,
            "oracle_bits": self.oracle_bits,
            "final_bits": self.final_bits,
            "final_gap_bits": self.final_gap_bits,
            "steps": int(len(self.trace_bits)),
            "stabilization_step": stabilization_step(self.trace_bits, 0.1),
            "stabilization_step_strict": stabilization_step(self.trace_bits, 0.02),
            "terms": self.terms,
        }

    def trace_csv(self) -> str:
        lines = ["step,value_bits,oracle_bits"]
        lines += [f"{k},{v:.17g},{self.oracle_bits:.17g}" for k, v in enumerate(self.trace_bits)]
        return "\n".join(lines) + "\n"


def stabilization_step(trace, tol: float) -> int:
    """First step after which every value stays within ``tol`` of the final one."""
    trace = np.asarray(trace, dtype=float)
    off = np.flatnonzero(np.abs(trace - trace[-1]) > tol)
    return 0 if off.size == 0 else int(off[-1] + 1)


def file_label(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_")


def _running(ev: EntropyEvaluator, label: str, length: int) -> np.ndarray:
    """Best-so-far estimate of one term, held at its final value after it stopped."""
    est = ev.estimates.get(label)
    if est is None:
        return np.full(length, ev.exact[label])
    run = est.running_min_bits()
    return np.concatenate((run, np.full(length - len(run), run[-1])))


def _combine(ev: EntropyEvaluator, combine: Callable[..., np.ndarray], labels: List[str]) -> np.ndarray:
    length = max([len(e.trace) for e in ev.estimates.values()] or [1])
    return combine(*(_running(ev, lab, length) for lab in labels))


def _terms(ev: EntropyEvaluator) -> Dict[str, dict]:
    out = {}
    for label, exact in ev.exact.items():
        est = ev.estimates.get(label)
        out[label] = {
            "oracle_bits": exact,
            "estimate_bits": est.value_bits if est else exact,
            "steps_used": est.steps_used if est else 0,
            "converged": est.converged if est else True,
        }
    return out


def loose_state(size: int, rank: int, seed: int):
    """Purified random rank-``rank`` state on ``size`` qubits split evenly into A and B."""
    half = size // 2
    layout = RegisterLayout([("A", 2**half), ("B", 2 ** (size - half))])
    return purify(random_density(layout, rank, seed), "R")


def run_experiment(
    figure: str,
    size: int,
    config: EstimatorConfig = EstimatorConfig(),
    full: bool = False,
) -> Experiment:
    """Reproduce one convergence experiment.

    ``config.rank`` sets the rank of the random two-party state in the loose
    experiments (``full`` raises it to the dimension of one side); the
    estimator itself always receives the numerical rank of each marginal.
    """
    if figure not in FIGURES:
        raise ValueError(f"figure must be one of {FIGURES}, got {figure!r}")
    if size not in SIZES[figure]:
        raise ValueError(f"{figure} supports sizes {SIZES[figure]}, got {size}")
    seed = config.seed
    ev = EntropyEvaluator("estimator", config)

    if figure in ("loose-upper", "loose-lower"):
        rank = 2 ** (size // 2) if full else config.rank
        psi = loose_state(size, rank, seed)
        if figure == "loose-upper":
            ev(psi, {"A", "B"}, "S(AB)")
            trace = _combine(ev, lambda s: s, ["S(AB)"])
            oracle = ev.exact["S(AB)"]
        else:
            ev(psi, {"A"}, "S(A)")
            ev(psi, {"B"}, "S(B)")
            trace = _combine(ev, lambda a, b: np.abs(b - a), ["S(A)", "S(B)"])
            oracle = abs(ev.exact["S(B)"] - ev.exact["S(A)"])

    elif figure == "tight-upper":
        n_A, k, n_R = PLANTED_SPLITS[size]
        psi = planted_common_subspace_state(n_A, k, n_R, seed=seed)
        C = CommonSubspace.fixed(range(k), 2**n_A)
        psi_s = build_stretched(psi, C)
        ev(psi_s, {"R", "A"}, "S(RA)_s")
        ev(psi_s, {"A"}, "S(A)_s")
        trace = _combine(ev, lambda ra, a: ra - a, ["S(RA)_s", "S(A)_s"])
        oracle = ev.exact["S(RA)_s"] - ev.exact["S(A)_s"]

    else:
        spec = DecompositionSpec.random(seed)
        rates = decomposition_rates(spec)
        ev(epr("A1", "R1"), {"A1"}, "S(A1)")
        ev(epr("B1", "R2"), {"B1"}, "S(B1)")
        g = ghz("A3", "B3", "R3")
        ev(g, {"B3", "R3"}, "S(B3R3)")
        ev(g, {"A3", "R3"}, "S(A3R3)")

        def lower(a1, b1, b3r3, a3r3):
            return rates.r1 * a1 + rates.r2 * b1 + rates.r4 * (b3r3 - a3r3)

        labels = ["S(A1)", "S(B1)", "S(B3R3)", "S(A3R3)"]
        trace = _combine(ev, lower, labels)
        oracle = lower(*(np.array([ev.exact[lab]]) for lab in labels))[0]
        terms_extra = {"coefficients": spec.coefficients.tolist(), "rates": list(rates.as_tuple())}

    exp = Experiment(figure, size, seed, float(oracle), np.asarray(trace, dtype=float), _terms(ev), ev)
    if figure == "tight-lower":
        exp.terms["decomposition"] = terms_extra
    return exp


__all__ = ["Experiment", "FIGURES", "LN2", "SIZES", "file_label", "loose_state", "run_experiment", "stabilization_step"]
