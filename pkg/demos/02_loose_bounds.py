"""Loose bounds |S(B) - S(A)| <= Upsilon <= S(AB) on random states.

    python3 demos/02_loose_bounds.py
"""

from uncommonbounds.bounds import compute_bounds
from uncommonbounds.estimator import EstimatorConfig
from uncommonbounds.experiments import loose_state


def main():
    # A random rank-2 state on A B (equal halves of the qubits) is purified
    # into R. Both loose bounds need only marginal entropies.
    for size in (4, 6):
        psi = loose_state(size, rank=2, seed=size)
        oracle = compute_bounds(psi, "loose", "oracle")
        est = compute_bounds(psi, "loose", "estimator", EstimatorConfig(seed=0))
        print(f"{size} qubits, registers {psi.layout}")
        print(f"  upper S(AB):        exact {oracle.loose_upper_bits:.4f}  estimated {est.loose_upper_bits:.4f}")
        print(f"  lower |S(B)-S(A)|:  exact {oracle.loose_lower_bits:.4f}  estimated {est.loose_lower_bits:.4f}")
        for label, run in sorted(est.estimates.items()):
            print(f"    {label:6s} {run.steps_used:4d} steps")


if __name__ == "__main__":
    main()
