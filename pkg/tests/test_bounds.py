import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uncommonbounds.bounds import (
    CommonSubspace,
    DecompositionSpec,
    EntropyEvaluator,
    build_stretched,
    class_symmetry_test,
    compute_bounds,
    decomposition_rates,
    find_common_subspace,
    loose_lower,
    loose_upper,
    nonzero_classes,
    pad_to_qubits,
    spectral_align,
    stretched_conditional_entropy,
    tight_lower,
    tight_upper,
)
from uncommonbounds.estimator import EstimatorConfig
from uncommonbounds.qcore import (
    DimensionError,
    PureState,
    RegisterLayout,
    decomposable_state,
    entropy_exact,
    exchange_AB,
    haar_random_pure,
    marginal_entropy,
    planted_common_subspace_state,
    purify,
    random_density,
    reduce,
)

from conftest import bell_ab_zero_r, epr_ar_zero_b

UNIFORM = DecompositionSpec(0.5, 0.5, 0.5, 0.5)


def symmetric_diagonal(gammas, d_r=None):
    """sum_a gamma_a |a a a>, exchange-symmetric by construction."""
    d = len(gammas)
    t = np.zeros((d, d, d_r or d), dtype=complex)
    for a, g in enumerate(gammas):
        t[a, a, a] = g
    return PureState.from_unnormalized(RegisterLayout.of(A=d, B=d, R=d_r or d), t.reshape(-1))


def random_symmetric(d, d_r, seed):
    rng = np.random.default_rng(seed)
    t = rng.normal(size=(d, d, d_r)) + 1j * rng.normal(size=(d, d, d_r))
    t = t + t.transpose(1, 0, 2)
    return PureState.from_unnormalized(RegisterLayout.of(A=d, B=d, R=d_r), t.reshape(-1))


class TestEntropyEvaluator:
    def test_padding_keeps_spectrum(self):
        rho = random_density(6, 3, seed=2).matrix
        padded = pad_to_qubits(rho)
        assert padded.shape == (8, 8)
        assert entropy_exact(padded) == pytest.approx(entropy_exact(rho), abs=1e-12)

    def test_invalid_mode(self):
        with pytest.raises(ValueError):
            EntropyEvaluator("guess")

    def test_estimator_records_runs(self):
        ev = EntropyEvaluator("estimator", EstimatorConfig(max_steps=50))
        ev(epr_ar_zero_b(), {"A"}, "S(A)")
        assert set(ev.estimates) == {"S(A)"} and ev.exact["S(A)"] == pytest.approx(1.0)


class TestLoose:
    def test_bell_ab(self):
        assert loose_upper(bell_ab_zero_r()) == pytest.approx(0.0, abs=1e-12)

    def test_epr_ar(self):
        psi = epr_ar_zero_b()
        assert loose_upper(psi) == pytest.approx(1.0, abs=1e-12)
        assert loose_lower(psi) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_lower_is_zero(self):
        assert loose_lower(random_symmetric(3, 4, 1)) == pytest.approx(0.0, abs=1e-12)

    def test_estimator_upper(self):
        for s in range(3):
            psi = purify(random_density(RegisterLayout.of(A=2, B=2), 2, seed=s))
            est = loose_upper(psi, "estimator", EstimatorConfig(seed=s))
            assert est == pytest.approx(loose_upper(psi), abs=0.05)

    def test_estimator_lower(self):
        psi = haar_random_pure(RegisterLayout.of(A=4, B=4, R=2), 3)
        assert loose_lower(psi, "estimator") == pytest.approx(loose_lower(psi), abs=0.05)

    def test_requires_ab(self):
        psi = haar_random_pure(RegisterLayout.of(X=2, Y=2), 0)
        with pytest.raises(KeyError):
            loose_upper(psi)

    def test_araki_lieb_ordering(self):
        for s in range(100):
            psi = haar_random_pure(RegisterLayout.of(A=2, B=3, R=4), s)
            assert loose_lower(psi) <= loose_upper(psi) + 1e-9


class TestSpectralAlign:
    def test_degenerate_full_match(self):
        _, _, k = spectral_align(np.eye(2) / 2, np.eye(2) / 2)
        assert k == 2

    def test_partial_match(self):
        _, _, k = spectral_align(np.diag([0.5, 0.3, 0.2]), np.diag([0.5, 0.25, 0.25]))
        assert k == 1

    def test_matched_values_lead(self):
        psi = planted_common_subspace_state(2, 2, 3, seed=4)
        ra, rb = reduce(psi, {"A"}).matrix, reduce(psi, {"B"}).matrix
        U, W, k = spectral_align(ra, rb)
        da, db = U @ ra @ U.conj().T, W @ rb @ W.conj().T
        assert np.abs(da - np.diag(np.diag(da))).max() <= 1e-10
        assert np.abs(db - np.diag(np.diag(db))).max() <= 1e-10
        np.testing.assert_allclose(np.diag(da)[:k], np.diag(db)[:k], atol=1e-10)

    def test_unitaries(self):
        rho = random_density(4, 4, seed=1).matrix
        U, W, k = spectral_align(rho, rho)
        assert k == 4
        np.testing.assert_allclose(U @ U.conj().T, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(U, W, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            spectral_align(np.eye(2) / 2, np.eye(3) / 3)


class TestClasses:
    def test_decomposable_classes(self):
        for spec in (UNIFORM, DecompositionSpec.random(5)):
            assert nonzero_classes(decomposable_state(spec)) == [(0, 1, 2), (3,), (4,), (5,)]

    def test_symmetric_diagonal_singletons(self):
        assert nonzero_classes(symmetric_diagonal([0.6, 0.3, 0.1])) == [(0,), (1,), (2,)]

    @given(st.integers(0, 10_000))
    def test_classes_invariant_under_exchange(self, seed):
        psi = planted_common_subspace_state(2, 1 + seed % 3, 1, seed=seed)
        assert nonzero_classes(psi) == nonzero_classes(exchange_AB(psi))

    def test_symmetry_test_on_decomposable(self):
        psi = decomposable_state(UNIFORM)
        assert class_symmetry_test(psi, (3,))
        assert not class_symmetry_test(psi, (0, 1, 2))

    def test_swap_mode_on_symmetric_state(self):
        psi = random_symmetric(3, 2, 0)
        for s in range(20):
            assert class_symmetry_test(psi, (0, 1, 2), mode="swap", seed=s)

    def test_swap_mode_rejects_asymmetric_class(self):
        psi = decomposable_state(UNIFORM)
        assert not class_symmetry_test(psi, (0, 1, 2), mode="swap", seed=0)

    def test_empty_class_rejected(self):
        with pytest.raises(ValueError):
            class_symmetry_test(decomposable_state(UNIFORM), ())


class TestFindCommonSubspace:
    def test_uniform_decomposable(self):
        assert find_common_subspace(decomposable_state(UNIFORM)).indices == (3, 4, 5)

    def test_generic_decomposable_is_span_345(self):
        target = np.diag([0, 0, 0, 1, 1, 1.0])
        for s in range(5):
            C = find_common_subspace(decomposable_state(DecompositionSpec.random(s)))
            assert C.dim == 6 and len(C.indices) == 3
            np.testing.assert_allclose(C.projector("A"), target, atol=1e-10)
            np.testing.assert_allclose(C.projector("B"), target, atol=1e-10)

    def test_planted_eight_qubit(self):
        for s in range(5):
            assert find_common_subspace(planted_common_subspace_state(2, 2, 4, seed=s)).indices == (0, 1)

    @pytest.mark.xfail(
        strict=True,
        reason="n_A=1, k=1 leaves a one-dimensional complement, so the whole state is symmetric and {0,1} is found",
    )
    def test_planted_four_qubit_exact_set(self):
        assert find_common_subspace(planted_common_subspace_state(1, 1, 2, seed=0)).indices == (0,)

    def test_planted_four_qubit_contains_planted(self):
        for s in range(10):
            C = find_common_subspace(planted_common_subspace_state(1, 1, 2, seed=s))
            assert 0 in C.indices

    def test_haar_states_have_none(self):
        for s in range(20):
            assert find_common_subspace(haar_random_pure(RegisterLayout.of(A=4, B=4, R=4), s)).indices == ()

    def test_output_passes_and_is_idempotent(self):
        for psi in (decomposable_state(DecompositionSpec.random(2)), planted_common_subspace_state(2, 2, 4, seed=1)):
            C = find_common_subspace(psi)
            aligned = C.align(psi)
            for cls in nonzero_classes(aligned):
                passed = class_symmetry_test(aligned, cls)
                assert passed == set(cls).issubset(C.indices)
            assert find_common_subspace(aligned).indices == C.indices

    def test_swap_mode_matches_exact(self):
        psi = planted_common_subspace_state(2, 2, 4, seed=3)
        assert find_common_subspace(psi, test="swap", seed=0).indices == (0, 1)


class TestStretched:
    def test_empty_subspace_branch(self):
        psi = haar_random_pure(RegisterLayout.of(A=2, B=2, R=3), 4)
        s = build_stretched(psi, CommonSubspace.fixed([], 2))
        assert s.layout.names == ("A", "B", "R", "A'", "B'")
        t = s.tensor()
        expected = np.transpose(psi.tensor(), (2, 0, 1))
        np.testing.assert_allclose(t[0, 0], expected, atol=1e-15)
        assert np.abs(t[1:]).max() == 0 and np.abs(t[:, 1:]).max() == 0

    def test_symmetric_branch(self):
        psi = symmetric_diagonal([0.8, 0.6, 0.0])
        s = build_stretched(psi, CommonSubspace.fixed([0, 1], 3))
        np.testing.assert_allclose(s.tensor()[..., 0, 0], psi.tensor(), atol=1e-15)
        assert np.isclose(np.linalg.norm(s.tensor()[..., 0, 0]), 1.0)

    @pytest.mark.parametrize("convention", ["isometric", "literal"])
    def test_norm_on_planted(self, convention):
        for s in range(5):
            psi = planted_common_subspace_state(2, 2, 3, seed=s)
            out = build_stretched(psi, CommonSubspace.fixed([0, 1], 4), convention=convention)
            assert out.norm() == pytest.approx(1.0, abs=1e-10)

    def test_isometric_support(self):
        psi = planted_common_subspace_state(2, 1, 2, seed=6)
        C = CommonSubspace.fixed([0], 4)
        t = build_stretched(psi, C).tensor()
        used = {(a, b) for a in range(4) for b in range(4) if np.abs(t[..., a, b]).max() > 0}
        uncommon = psi.tensor()[1:, 1:]
        support = {(a + 1, b + 1) for a in range(3) for b in range(3) if np.abs(uncommon[a, b]).max() > 0}
        assert used == {(0, 0)} | support

    def test_mixed_block_rejected(self):
        with pytest.raises(ValueError):
            build_stretched(haar_random_pure(RegisterLayout.of(A=2, B=2, R=2), 1), CommonSubspace.fixed([0], 2))

    def test_invalid_xy(self):
        psi = planted_common_subspace_state(2, 2, 2, seed=0)
        with pytest.raises(ValueError):
            build_stretched(psi, CommonSubspace.fixed([0, 1], 4), x_index=3)


class TestTightUpper:
    @pytest.mark.parametrize("convention", ["isometric", "literal"])
    def test_empty_subspace_gives_joint_entropy(self, convention):
        for s in range(5):
            psi = haar_random_pure(RegisterLayout.of(A=2, B=2, R=4), s)
            u = stretched_conditional_entropy(psi, CommonSubspace.fixed([], 2), convention=convention)
            assert u == pytest.approx(marginal_entropy(psi, {"A", "B"}), abs=1e-9)

    @pytest.mark.parametrize("convention", ["isometric", "literal"])
    def test_symmetric_state_gives_zero(self, convention):
        for s in range(5):
            psi = random_symmetric(3, 4, s)
            assert stretched_conditional_entropy(psi, convention=convention) == pytest.approx(0.0, abs=1e-9)

    def test_never_above_loose_upper(self):
        for s in range(10):
            psi = planted_common_subspace_state(1 + s % 2, 1, 2, seed=s)
            assert tight_upper(psi) <= loose_upper(psi) + 1e-9

    def test_conditioning_variant_is_available(self):
        psi = decomposable_state(UNIFORM)
        a = stretched_conditional_entropy(psi, conditioning="A")
        aa = stretched_conditional_entropy(psi, conditioning="AA'")
        assert a == pytest.approx(1.0, abs=1e-9)
        assert aa < a

    def test_decomposable_estimator_matches_oracle(self):
        psi = decomposable_state(UNIFORM)
        oracle = stretched_conditional_entropy(psi)
        est = stretched_conditional_entropy(psi, mode="estimator")
        assert est == pytest.approx(oracle, abs=0.1)


class TestDecomposition:
    def test_rates(self):
        assert decomposition_rates(UNIFORM).as_tuple() == pytest.approx((0.25, 0.25, 0.25, 2.0))
        assert decomposition_rates(DecompositionSpec(1, 0, 0, 0)).as_tuple() == (1.0, 0.0, 0.0, 0.0)
        assert decomposition_rates(DecompositionSpec(0, 0, 0, 1)).as_tuple() == (0.0, 0.0, 0.0, 0.0)

    @given(st.integers(0, 10_000))
    def test_r4_is_shannon_and_permutation_invariant(self, seed):
        spec = DecompositionSpec.random(seed)
        p = spec.coefficients**2
        rates = decomposition_rates(spec)
        assert rates.r4 == pytest.approx(-np.sum(p * np.log2(p)), abs=1e-12)
        for perm in itertools.permutations(spec.coefficients):
            assert decomposition_rates(DecompositionSpec(*perm)).r4 == pytest.approx(rates.r4, abs=1e-12)

    @given(st.integers(0, 10_000))
    def test_oracle_lower_bound(self, seed):
        spec = DecompositionSpec.random(seed)
        c = spec.coefficients
        assert tight_lower(spec) == pytest.approx(c[0] ** 2 + c[1] ** 2, abs=1e-9)

    def test_first_term_matches_loose(self):
        assert tight_lower(DecompositionSpec(1, 0, 0, 0)) == pytest.approx(1.0, abs=1e-12)
        assert loose_upper(epr_ar_zero_b()) == pytest.approx(1.0)

    def test_estimator_uniform(self):
        assert tight_lower(UNIFORM, "estimator") == pytest.approx(0.5, abs=0.05)

    def test_lower_below_upper(self):
        for s in range(10):
            spec = DecompositionSpec.random(s)
            psi = decomposable_state(spec)
            assert tight_lower(spec) <= tight_upper(psi) + 1e-6


class TestReport:
    def test_schema(self):
        rep = compute_bounds(decomposable_state(UNIFORM), "tight-lower", spec=UNIFORM)
        d = rep.to_dict()
        assert list(d) == [
            "mode",
            "loose_upper_bits",
            "loose_lower_bits",
            "tight_upper_bits",
            "tight_lower_bits",
            "common_subspace_indices",
            "traces",
        ]
        assert d["tight_lower_bits"] == pytest.approx(0.5)

    def test_tight_upper_report(self):
        psi = planted_common_subspace_state(2, 2, 4, seed=0)
        rep = compute_bounds(psi, "tight-upper")
        assert rep.common_subspace_indices == (0, 1)
        assert rep.tight_upper_bits <= rep.loose_upper_bits + 1e-9

    def test_tight_lower_needs_spec(self):
        with pytest.raises(ValueError):
            compute_bounds(decomposable_state(UNIFORM), "tight-lower")
