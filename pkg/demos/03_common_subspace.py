"""Common subspaces, the stretched state and the tight bounds.

    python3 demos/03_common_subspace.py
"""

import numpy as np

from uncommonbounds.bounds import (
    DecompositionSpec,
    class_symmetry_test,
    decomposition_rates,
    find_common_subspace,
    loose_lower,
    loose_upper,
    nonzero_classes,
    stretched_conditional_entropy,
    tight_lower,
)
from uncommonbounds.qcore import decomposable_state, planted_common_subspace_state


def show_family(spec):
    psi = decomposable_state(spec)
    print(f"coefficients {np.round(spec.coefficients, 3)}")

    # In its own basis the state has index classes {0,1,2}, {3}, {4}, {5};
    # only the singletons are symmetric under A <-> B.
    for cls in nonzero_classes(psi):
        print(f"  class {cls}: symmetric={class_symmetry_test(psi, cls)}")

    # Discovery first aligns the marginals, so indices refer to the aligned
    # basis; the projector shows the subspace itself.
    C = find_common_subspace(psi)
    diag = np.round(np.diag(C.projector("A")).real, 6)
    print(f"  found C = {C.indices} (aligned labels); projector diagonal in original basis {diag}")

    u_iso = stretched_conditional_entropy(psi, C)
    u_lit = stretched_conditional_entropy(psi, C, convention="literal")
    rates = decomposition_rates(spec)
    print(f"  rates r1..r4 = {np.round(rates.as_tuple(), 4)}")
    print(f"  |S(B)-S(A)| = {loose_lower(psi):.4f}  <=  l = {tight_lower(spec):.4f}")
    print(f"  u = {u_iso:.4f} (isometric placement), {u_lit:.4f} (literal placement)  <=  S(AB) = {loose_upper(psi):.4f}")


def main():
    show_family(DecompositionSpec(0.5, 0.5, 0.5, 0.5))
    show_family(DecompositionSpec.random(3))

    # Planted states: with two qubits per side the symmetric block on
    # span{|0>, |1>} is found exactly. With one qubit per side the complement
    # is a single vector, so the whole state is symmetric and C covers everything.
    for n_A, k in ((2, 2), (1, 1)):
        psi = planted_common_subspace_state(n_A, k, 2 * n_A, seed=0)
        C = find_common_subspace(psi)
        print(f"planted n_A={n_A} k={k}: found {C.indices}, u = {stretched_conditional_entropy(psi, C):.4f}, S(AB) = {loose_upper(psi):.4f}")


if __name__ == "__main__":
    main()
