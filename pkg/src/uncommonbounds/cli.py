"""Command-line harness: ``uncommonbounds {gen-state, estimate-entropy, bounds, reproduce}``.

Settings are resolved as built-in defaults, then the ``--config`` JSON file,
then explicit flags. ``UB_DEFAULT_SEED`` supplies the seed only when neither a
flag nor the config file sets one. Exit codes: 0 success, 2 invalid input or
config, 3 dimension or compatibility error, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .bounds import CommonSubspace, compute_bounds
from .bounds.entropies import numerical_rank
from .estimator import EstimatorConfig, minimize
from .experiments import FIGURES, file_label, run_experiment
from .qcore import (
    DecompositionSpec,
    DimensionError,
    PureState,
    RegisterLayout,
    atomic_write_text,
    decomposable_state,
    entropy_exact,
    haar_random_pure,
    load_state,
    planted_common_subspace_state,
    reduce,
    save_state,
    state_to_json,
)

EXIT_OK, EXIT_INPUT, EXIT_DIMENSION, EXIT_IO = 0, 2, 3, 4
COMMANDS = ("gen-state", "estimate-entropy", "bounds", "reproduce")
KINDS = ("haar", "planted", "decomposable")
SEED_ENV = "UB_DEFAULT_SEED"
SPEC_SUFFIX = ".spec.json"

log = logging.getLogger(__name__)


class CompatibilityError(DimensionError):
    """The state does not fit the requested bound."""


@dataclass
class RunConfig:
    """Every setting of one CLI invocation, with explicit defaults."""

    command: str = "estimate-entropy"
    seed: int = 0
    steps: int = 1000
    lr: float = 0.05
    layers: Optional[int] = None
    epsilon: float = 0.01
    rank: Optional[int] = None
    shots: int = 0
    oracle: bool = False
    out: Optional[str] = None
    trace: Optional[str] = None
    format: str = "json"
    full: bool = False
    # gen-state
    kind: str = "haar"
    dims: List[int] = field(default_factory=lambda: [2, 2, 4])
    names: Optional[List[str]] = None
    n_a: int = 1
    k: int = 1
    n_r: int = 2
    mix: float = 0.5
    coeffs: Optional[List[float]] = None
    # estimate-entropy / bounds
    state: Optional[str] = None
    target: Optional[List[str]] = None
    which: str = "loose"
    subspace: Optional[List[int]] = None
    convention: str = "isometric"
    conditioning: str = "A"
    # reproduce
    figure: str = "loose-upper"
    size: int = 4

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"command must be one of {COMMANDS}")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def estimator(self, rank: Optional[int] = None) -> EstimatorConfig:
        return EstimatorConfig(
            rank=rank or self.rank or 2,
            epsilon=self.epsilon,
            learning_rate=self.lr,
            max_steps=self.steps,
            seed=self.seed,
            layers=self.layers,
            shots=self.shots,
        )


def _ints(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _floats(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _names(text: str) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, help="PRNG seed (u64)")
    common.add_argument("--steps", type=int, help="maximum optimizer steps")
    common.add_argument("--lr", type=float, help="Adam learning rate")
    common.add_argument("--layers", type=int, help="ansatz layers (default: rank-aware)")
    common.add_argument("--epsilon", type=float, help="QDV accuracy parameter")
    common.add_argument("--rank", type=int, help="rank given to the estimator")
    common.add_argument("--shots", type=int, help="measurement shots (0 = exact)")
    common.add_argument("--oracle", action="store_true", help="use or report the exact entropy")
    common.add_argument("--out", help="output path (directory for reproduce)")
    common.add_argument("--trace", help="trace CSV path")
    common.add_argument("--format", choices=("json", "csv"), help="stdout format")
    common.add_argument("--config", dest="config_path", help="JSON config file")
    common.add_argument("-v", "--verbose", action="store_true", default=False)

    parser = argparse.ArgumentParser(prog="uncommonbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-state", parents=[common], argument_default=argparse.SUPPRESS, help="write a seeded test state")
    gen.add_argument("kind", choices=KINDS)
    gen.add_argument("--dims", type=_ints, help="haar: register dims, e.g. 2,2,4")
    gen.add_argument("--names", type=_names, help="haar: register names (default A,B,R)")
    gen.add_argument("--n-a", dest="n_a", type=int, help="planted: qubits per side")
    gen.add_argument("--k", type=int, help="planted: common-subspace dimension")
    gen.add_argument("--n-r", dest="n_r", type=int, help="planted: reference qubits")
    gen.add_argument("--mix", type=float, help="planted: weight of the symmetric block")
    gen.add_argument("--coeffs", type=_floats, help="decomposable: c1,c2,c3,c4")

    est = sub.add_parser("estimate-entropy", parents=[common], argument_default=argparse.SUPPRESS, help="QDV estimate of a marginal entropy")
    est.add_argument("state")
    est.add_argument("--target", type=_names, help="registers kept, e.g. A,B (default: all)")

    bnd = sub.add_parser("bounds", parents=[common], argument_default=argparse.SUPPRESS, help="loose and tight bounds")
    bnd.add_argument("state")
    bnd.add_argument("--which", choices=("loose", "tight-upper", "tight-lower"))
    bnd.add_argument("--coeffs", type=_floats, help="tight-lower: c1,c2,c3,c4")
    bnd.add_argument("--subspace", type=_ints, help="tight-upper: fixed common-subspace indices")
    bnd.add_argument("--convention", choices=("isometric", "literal"))
    bnd.add_argument("--conditioning", choices=("A", "AA'"))

    rep = sub.add_parser("reproduce", parents=[common], argument_default=argparse.SUPPRESS, help="run a convergence experiment")
    rep.add_argument("figure", choices=FIGURES)
    rep.add_argument("--size", type=int)
    rep.add_argument("--full", action="store_true", help="full-rank loose states, no accuracy guarantee")
    return parser


def resolve_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    """Defaults, then the config file, then flags; env seed fills a missing seed."""
    flags = vars(args).copy()
    flags.pop("verbose", None)
    path = flags.pop("config_path", None)
    data: dict = {}
    if path is not None:
        data = json.loads(Path(path).read_text())
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
    data.update(flags)
    if "seed" not in data and environ.get(SEED_ENV):
        data["seed"] = int(environ[SEED_ENV])
    return RunConfig.from_dict(data)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        atomic_write_text(path, text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_gen_state(cfg: RunConfig) -> int:
    if cfg.kind == "haar":
        names = cfg.names or ["A", "B", "R", "R2", "R3", "R4"][: len(cfg.dims)]
        if len(names) != len(cfg.dims):
            raise ValueError("--names and --dims differ in length")
        psi = haar_random_pure(RegisterLayout(list(zip(names, cfg.dims))), cfg.seed)
        spec = None
    elif cfg.kind == "planted":
        psi = planted_common_subspace_state(cfg.n_a, cfg.k, cfg.n_r, cfg.mix, cfg.seed)
        spec = None
    else:
        spec = DecompositionSpec(*cfg.coeffs) if cfg.coeffs else DecompositionSpec.random(cfg.seed)
        psi = decomposable_state(spec)
    if cfg.out:
        save_state(psi, cfg.out)
        if spec is not None:
            atomic_write_text(cfg.out + SPEC_SUFFIX, _dumps(dict(zip(("c1", "c2", "c3", "c4"), spec.coefficients.tolist()))))
    else:
        sys.stdout.write(state_to_json(psi))
    summary = {
        "kind": cfg.kind,
        "registers": psi.layout.to_dict(),
        "norm": float(psi.norm()),
        "nonzero_amplitudes": int(np.count_nonzero(np.abs(psi.amplitudes) > 1e-15)),
    }
    (sys.stdout if cfg.out else sys.stderr).write(_dumps(summary))
    return EXIT_OK


def _target_matrix(cfg: RunConfig):
    state = load_state(cfg.state)
    target = cfg.target or list(state.layout.names)
    missing = set(target) - set(state.layout.names)
    if missing:
        raise ValueError(f"unknown registers {sorted(missing)}")
    return reduce(state, target), target


def cmd_estimate_entropy(cfg: RunConfig) -> int:
    rho, target = _target_matrix(cfg)
    mat = rho.matrix
    rank = cfg.rank or numerical_rank(mat)
    est = minimize(mat, cfg.estimator(min(rank, mat.shape[0])))
    report = {"target": target, "dim": int(mat.shape[0]), "rank": rank, **est.to_dict()}
    if cfg.oracle:
        exact = entropy_exact(mat)
        report["oracle_bits"] = exact
        report["gap_bits"] = abs(est.value_bits - exact)
    if cfg.trace:
        atomic_write_text(cfg.trace, est.trace_csv())
    if cfg.format == "csv":
        _emit(est.trace_csv(), cfg.out)
    else:
        _emit(_dumps(report), cfg.out)
    if cfg.oracle and cfg.out:
        sys.stdout.write(f"estimate {est.value_bits:.6f} bits, exact {report['oracle_bits']:.6f} bits, gap {report['gap_bits']:.6f}\n")
    return EXIT_OK


def _load_spec(cfg: RunConfig) -> DecompositionSpec:
    if cfg.coeffs:
        return DecompositionSpec(*cfg.coeffs)
    sidecar = Path(cfg.state + SPEC_SUFFIX)
    if not sidecar.exists():
        raise CompatibilityError("tight-lower needs --coeffs or a decomposable-spec sidecar")
    data = json.loads(sidecar.read_text())
    return DecompositionSpec(data["c1"], data["c2"], data["c3"], data["c4"])


def cmd_bounds(cfg: RunConfig) -> int:
    psi = load_state(cfg.state)
    if not isinstance(psi, PureState):
        raise CompatibilityError("bounds need a pure state on (A, B, R)")
    if not {"A", "B"} <= set(psi.layout.names):
        raise CompatibilityError("state must contain registers A and B")
    spec = subspace = None
    if cfg.which == "tight-lower":
        spec = _load_spec(cfg)
        expected = decomposable_state(spec)
        if psi.layout != expected.layout or not np.allclose(psi.amplitudes, expected.amplitudes, atol=1e-9):
            raise CompatibilityError("state does not match its decomposition coefficients")
    if cfg.which == "tight-upper" and cfg.subspace is not None:
        if psi.layout.dim("A") != psi.layout.dim("B"):
            raise CompatibilityError("A and B must have equal dimension")
        subspace = CommonSubspace.fixed(cfg.subspace, psi.layout.dim("A"))
    mode = "oracle" if cfg.oracle else "estimator"
    config = cfg.estimator()
    report = compute_bounds(
        psi, cfg.which, mode, config, spec=spec, subspace=subspace,
        convention=cfg.convention, conditioning=cfg.conditioning,
    )
    traces = {}
    if cfg.trace and report.estimates:
        base = Path(cfg.trace)
        for label, est in sorted(report.estimates.items()):
            path = base.with_name(f"{base.stem}-{file_label(label)}{base.suffix or '.csv'}")
            atomic_write_text(path, est.trace_csv())
            traces[label] = str(path)
    _emit(report.to_json(traces), cfg.out)
    return EXIT_OK


def cmd_reproduce(cfg: RunConfig) -> int:
    exp = run_experiment(cfg.figure, cfg.size, cfg.estimator(), full=cfg.full)
    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{cfg.figure}-{cfg.size}"
    summary = exp.summary()
    summary["config"] = asdict(cfg)
    paths = {"convergence": str(out / f"{stem}.csv")}
    atomic_write_text(out / f"{stem}.csv", exp.trace_csv())
    for label, est in sorted(exp.evaluator.estimates.items()):
        path = out / f"{stem}-{file_label(label)}.csv"
        atomic_write_text(path, est.trace_csv())
        paths[label] = str(path)
    summary["traces"] = paths
    text = _dumps(summary)
    atomic_write_text(out / f"{stem}-summary.json", text)
    sys.stdout.write(exp.trace_csv() if cfg.format == "csv" else text)
    return EXIT_OK


HANDLERS = {
    "gen-state": cmd_gen_state,
    "estimate-entropy": cmd_estimate_entropy,
    "bounds": cmd_bounds,
    "reproduce": cmd_reproduce,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        return HANDLERS[cfg.command](cfg)
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
