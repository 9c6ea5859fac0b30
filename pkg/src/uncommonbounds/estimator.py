"""Variational von Neumann entropy estimation.

The trial operator is ``T = sum_i t_i U(theta)|i><i|U(theta)^dagger`` with
``t = softmax(w)`` on ``r`` basis states, and the minimized cost is

    f(theta, t) = -c sum_i t_i <i|U^dagger rho U|i> + ln(d - r + sum_i exp(c t_i)).

By the Gibbs variational principle ``f >= S(rho)`` (natural log) for every
parameter setting, and the infimum approaches the entropy for large enough
``c``. All internal quantities are in nats.
"""

from __future__ import annotations

import io
import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp, softmax

from .ansatz import AnsatzSpec, diagonal_expectations, qubit_count, shift_gradient
from .qcore import DensityMatrix, DimensionError

log = logging.getLogger(__name__)

LN2 = float(np.log(2.0))
C_CLAMP = 500.0


def choose_c(r: int, d: int, epsilon: float) -> float:
    """Smallest admissible inverse temperature, ``2 r ln d - r ln epsilon``."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not 1 <= r <= d:
        raise ValueError(f"rank {r} outside [1, {d}]")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    return 2 * r * np.log(d) - r * np.log(epsilon)


@dataclass(frozen=True)
class EstimatorConfig:
    rank: int = 2
    epsilon: float = 0.01
    c_override: Optional[float] = None
    c_clamp: Optional[float] = C_CLAMP
    learning_rate: float = 0.05
    max_steps: int = 1000
    conv_window: int = 25
    conv_tol: float = 1e-4
    seed: int = 0
    layers: Optional[int] = None
    shots: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.c_override is not None and self.c_override <= 0:
            raise ValueError("c_override must be positive")
        if self.learning_rate <= 0 or self.conv_tol <= 0:
            raise ValueError("learning_rate and conv_tol must be positive")
        if self.max_steps < 1 or self.conv_window < 1:
            raise ValueError("max_steps and conv_window must be positive")
        if self.shots < 0:
            raise ValueError("shots must be nonnegative")
        if self.layers is not None and self.layers < 1:
            raise ValueError("layers must be positive")

    def c_for(self, d: int) -> float:
        c = self.c_override if self.c_override is not None else choose_c(self.rank, d, self.epsilon)
        if self.c_clamp is not None:
            c = min(c, self.c_clamp)
        return float(c)

    def replace(self, **changes) -> "EstimatorConfig":
        return EstimatorConfig(**{**asdict(self), **changes})


@dataclass
class EntropyEstimate:
    value_nats: float
    value_bits: float
    steps_used: int
    converged: bool
    c: float
    trace: List[Tuple[int, float, float]] = field(default_factory=list)
    theta: Optional[np.ndarray] = field(default=None, repr=False)
    weights: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def costs(self) -> np.ndarray:
        return np.array([row[1] for row in self.trace])

    def running_min_bits(self) -> np.ndarray:
        """Best-so-far estimate after each step, in bits."""
        return np.minimum.accumulate(self.costs) / LN2

    def to_dict(self) -> dict:
        return {
            "value_nats": self.value_nats,
            "value_bits": self.value_bits,
            "steps_used": self.steps_used,
            "converged": self.converged,
            "c": self.c,
        }

    def trace_csv(self) -> str:
        out = io.StringIO()
        out.write("step,cost_nats,cost_bits,grad_norm\n")
        for step, cost, gnorm in self.trace:
            out.write(f"{step},{cost:.17g},{cost / LN2:.17g},{gnorm:.17g}\n")
        return out.getvalue()


def _matrix(rho) -> np.ndarray:
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {mat.shape}")
    return mat


def _log_partition(t: np.ndarray, c: float, d: int) -> float:
    r = t.shape[0]
    return float(logsumexp(np.concatenate(([0.0], c * t)), b=np.concatenate(([d - r], np.ones(r)))))


def cost_from_expectations(e: np.ndarray, t: np.ndarray, c: float, d: int) -> float:
    return float(-c * (t @ e) + _log_partition(t, c, d))


def cost(rho, spec: AnsatzSpec, theta, w, c: float, shots: int = 0, rng=None) -> float:
    """QDV cost in nats for angles ``theta`` and simplex logits ``w``."""
    mat = _matrix(rho)
    w = np.asarray(w, dtype=float)
    t = softmax(w)
    e = diagonal_expectations(mat, spec, theta, w.shape[0], shots=shots, rng=rng)
    return cost_from_expectations(e, t, c, mat.shape[0])


def _weight_gradient(e: np.ndarray, t: np.ndarray, c: float, d: int) -> np.ndarray:
    # df/dt_i = -c e_i + c exp(c t_i) / (d - r + sum_j exp(c t_j)), pulled back through softmax
    df_dt = -c * e + c * np.exp(c * t - _log_partition(t, c, d))
    return t * (df_dt - t @ df_dt)


def gradient(rho, spec: AnsatzSpec, theta, w, c: float, shots: int = 0, rng=None):
    """(d cost / d theta, d cost / d w)."""
    mat = _matrix(rho)
    w = np.asarray(w, dtype=float)
    t = softmax(w)
    d = mat.shape[0]
    e = diagonal_expectations(mat, spec, theta, w.shape[0], shots=shots, rng=rng)
    dtheta = shift_gradient(mat, spec, theta, t, c, shots=shots, rng=rng)
    return dtheta, _weight_gradient(e, t, c, d)


class Adam:
    """Plain Adam on a flat parameter vector."""

    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = self.v = None
        self.k = 0

    def step(self, x: np.ndarray, g: np.ndarray) -> np.ndarray:
        if self.m is None:
            self.m = np.zeros_like(x)
            self.v = np.zeros_like(x)
        self.k += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * g
        self.v = self.beta2 * self.v + (1 - self.beta2) * g * g
        mhat = self.m / (1 - self.beta1**self.k)
        vhat = self.v / (1 - self.beta2**self.k)
        return x - self.lr * mhat / (np.sqrt(vhat) + self.eps)


def minimize(rho, config: EstimatorConfig = EstimatorConfig()) -> EntropyEstimate:
    """Estimate S(rho) by Adam descent on the QDV cost.

    Angles start uniform in [0, 2 pi) from ``config.seed``; logits start at 0.
    Stops after ``max_steps`` or once the cost moved less than ``conv_tol`` over
    the last ``conv_window`` steps. The reported value is the smallest cost seen,
    which is always an upper bound on the entropy up to shot noise.
    """
    mat = _matrix(rho)
    d = mat.shape[0]
    qubit_count(d)
    if config.rank > d:
        raise ValueError(f"rank {config.rank} exceeds dimension {d}")
    spec = AnsatzSpec.for_dim(d, config.layers, config.rank)
    c = config.c_for(d)
    r = config.rank

    rng = np.random.default_rng(config.seed)
    theta = rng.uniform(0.0, 2 * np.pi, spec.n_params)
    w = np.zeros(r)
    shot_rng = rng if config.shots else None
    opt = Adam(config.learning_rate)

    trace: List[Tuple[int, float, float]] = []
    best = (np.inf, theta, w)
    converged = False
    for step in range(config.max_steps):
        t = softmax(w)
        e = diagonal_expectations(mat, spec, theta, r, shots=config.shots, rng=shot_rng)
        f = cost_from_expectations(e, t, c, d)
        g_theta = shift_gradient(mat, spec, theta, t, c, shots=config.shots, rng=shot_rng)
        g_w = _weight_gradient(e, t, c, d)
        gnorm = float(np.sqrt(g_theta @ g_theta + g_w @ g_w))
        trace.append((step, f, gnorm))
        if f < best[0]:
            best = (f, theta.copy(), w.copy())
        if step >= config.conv_window and abs(f - trace[step - config.conv_window][1]) < config.conv_tol:
            converged = True
            break
        x = opt.step(np.concatenate((theta, w)), np.concatenate((g_theta, g_w)))
        theta, w = x[: spec.n_params], x[spec.n_params :]

    value = float(best[0])
    log.debug("QDV d=%d r=%d c=%.3f: %.6f nats after %d steps", d, r, c, value, len(trace))
    return EntropyEstimate(
        value_nats=value,
        value_bits=value / LN2,
        steps_used=len(trace),
        converged=converged,
        c=c,
        trace=trace,
        theta=best[1],
        weights=best[2],
    )
