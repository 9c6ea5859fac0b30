"""Run the four convergence experiments and write plot-ready CSVs.

    python3 demos/04_convergence.py [out_dir]

Equivalent to calling ``uncommonbounds reproduce <figure> --size <n>`` for
each case. Each CSV has columns ``step,value_bits,oracle_bits``.
"""

import sys
from pathlib import Path

from uncommonbounds.estimator import EstimatorConfig
from uncommonbounds.experiments import run_experiment
from uncommonbounds.qcore import atomic_write_text

CASES = [
    ("loose-upper", 4),
    ("loose-upper", 6),
    ("loose-lower", 4),
    ("loose-lower", 6),
    ("tight-upper", 4),
    ("tight-lower", 4),
]


def main(out_dir="runs"):
    out = Path(out_dir)
    print(f"{'experiment':16s} {'oracle':>8s} {'final':>8s} {'gap':>7s} {'stable 0.1':>11s} {'stable 0.02':>12s}")
    for figure, size in CASES:
        exp = run_experiment(figure, size, EstimatorConfig(seed=0))
        s = exp.summary()
        atomic_write_text(out / f"{figure}-{size}.csv", exp.trace_csv())
        print(
            f"{figure + '-' + str(size):16s} {s['oracle_bits']:8.4f} {s['final_bits']:8.4f} "
            f"{s['final_gap_bits']:7.4f} {s['stabilization_step']:11d} {s['stabilization_step_strict']:12d}"
        )
    print(f"traces written to {out}/")


if __name__ == "__main__":
    main(*sys.argv[1:2])
