"""Estimate a von Neumann entropy variationally and compare with the exact value.

    python3 demos/01_entropy_estimation.py
"""

import numpy as np

from uncommonbounds.estimator import EstimatorConfig, choose_c, minimize
from uncommonbounds.qcore import entropy_exact, random_density

# The estimator minimizes
#
#   f(theta, t) = -c sum_i t_i <i|U(theta)^dagger rho U(theta)|i> + ln(d - r + sum_i exp(c t_i))
#
# over circuit angles theta and simplex weights t. Every value of f is an
# upper bound on S(rho) in nats, so the running minimum only moves down
# towards the entropy.


def main():
    for d in (4, 16):
        rho = random_density(d, 2, seed=d)
        exact = entropy_exact(rho)
        cfg = EstimatorConfig(rank=2, seed=1)
        est = minimize(rho, cfg)
        print(f"d={d:2d} rank=2  c={choose_c(2, d, cfg.epsilon):6.2f}")
        print(f"  exact     {exact:.6f} bits")
        print(f"  estimate  {est.value_bits:.6f} bits after {est.steps_used} steps (converged={est.converged})")

        # a coarse view of the trajectory
        run = est.running_min_bits()
        marks = sorted({0, 10, 25, 50, 100, 200, len(run) - 1} & set(range(len(run))))
        for k in marks:
            print(f"    step {k:4d}: {run[k]:.4f} bits (gap {run[k] - exact:+.4f})")

    # A maximally mixed state is reached exactly: with r = d and uniform t the
    # cost equals ln d for any circuit.
    est = minimize(np.eye(4) / 4, EstimatorConfig(rank=4, max_steps=50))
    print(f"I/4: {est.value_bits:.6f} bits")


if __name__ == "__main__":
    main()
