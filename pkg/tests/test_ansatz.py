import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uncommonbounds.ansatz import (
    AnsatzSpec,
    build_unitary,
    default_layers,
    diagonal_expectations,
    gate_sequence,
    qubit_count,
    shift_gradient,
)
from uncommonbounds.qcore import DimensionError, random_density

X = np.array([[0, 1], [1, 0]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def _rot(P, a):
    return np.cos(a / 2) * np.eye(2) - 1j * np.sin(a / 2) * P


def _reference_unitary(spec, theta):
    """Dense Kronecker-product construction, independent of the sweep kernels."""
    Y = np.array([[0, -1j], [1j, 0]])
    Z = np.diag([1.0, -1.0]).astype(complex)
    n = spec.n_qubits
    U = np.eye(2**n, dtype=complex)
    for l in range(spec.layers):
        for q in range(n):
            j = (l * n + q) * 3
            g = _rot(Z, theta[j + 2]) @ _rot(Y, theta[j + 1]) @ _rot(X, theta[j])
            U = np.kron(np.kron(np.eye(2**q), g), np.eye(2 ** (n - q - 1))) @ U
        for q in range(n - 1):
            U = np.kron(np.kron(np.eye(2**q), CNOT), np.eye(2 ** (n - q - 2))) @ U
    return U


def _objective(rho, spec, theta, t, c):
    return -c * t @ diagonal_expectations(rho, spec, theta, len(t))


def _finite_difference(rho, spec, theta, t, c, h=1e-5):
    g = np.zeros_like(theta)
    for j in range(len(theta)):
        e = np.zeros_like(theta)
        e[j] = h
        g[j] = (_objective(rho, spec, theta + e, t, c) - _objective(rho, spec, theta - e, t, c)) / (2 * h)
    return g


class TestSpec:
    def test_param_count(self):
        assert AnsatzSpec(3, 5).n_params == 45

    def test_invalid(self):
        with pytest.raises(ValueError):
            AnsatzSpec(0, 1)

    def test_qubit_count(self):
        assert qubit_count(16) == 4
        with pytest.raises(DimensionError):
            qubit_count(6)
        with pytest.raises(DimensionError):
            qubit_count(1)

    def test_default_layer_floor(self):
        assert default_layers(2, 1) == 4
        assert default_layers(3, 1) == 4
        assert default_layers(5, 1) >= 6

    def test_default_layers_cover_frame_dimension(self):
        for n in range(1, 7):
            for r in (1, 2, 4):
                if r > 2**n:
                    continue
                d = 2**n
                assert 3 * n * default_layers(n, r) >= 2 * d * r - r * r - r

    def test_gate_sequence_order(self):
        seq = gate_sequence(AnsatzSpec(2, 1))
        assert [g[0] for g in seq] == ["rot"] * 6 + ["cnot"]
        assert [g[2] for g in seq[:3]] == [0, 1, 2]


class TestBuildUnitary:
    def test_zero_angles_leave_only_ladder(self):
        np.testing.assert_allclose(build_unitary(AnsatzSpec(2, 1), np.zeros(6)), CNOT, atol=1e-15)

    def test_rx_pi(self):
        np.testing.assert_allclose(build_unitary(AnsatzSpec(1, 1), [np.pi, 0, 0]), -1j * X, atol=1e-15)

    def test_unitarity(self, rng):
        for _ in range(50):
            spec = AnsatzSpec(int(rng.integers(1, 5)), int(rng.integers(1, 4)))
            U = build_unitary(spec, rng.uniform(0, 2 * np.pi, spec.n_params))
            assert np.abs(U.conj().T @ U - np.eye(spec.dim)).max() <= 1e-10

    @pytest.mark.parametrize("n,L", [(1, 2), (2, 2), (3, 1), (3, 2)])
    def test_matches_kronecker_reference(self, n, L, rng):
        spec = AnsatzSpec(n, L)
        theta = rng.uniform(0, 2 * np.pi, spec.n_params)
        np.testing.assert_allclose(build_unitary(spec, theta), _reference_unitary(spec, theta), atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            build_unitary(AnsatzSpec(2, 1), np.zeros(5))


class TestDiagonalExpectations:
    def test_maximally_mixed(self, rng):
        spec = AnsatzSpec(3, 2)
        e = diagonal_expectations(np.eye(8) / 8, spec, rng.uniform(0, 6, spec.n_params), 8)
        np.testing.assert_allclose(e, 1 / 8, atol=1e-14)

    def test_ground_state_zero_angles(self):
        e = diagonal_expectations(np.diag([1.0, 0.0]), AnsatzSpec(1, 1), np.zeros(3), 1)
        np.testing.assert_allclose(e, [1.0])

    def test_completeness(self, rng):
        for s in range(10):
            spec = AnsatzSpec(3, 2)
            rho = random_density(8, 3, seed=s)
            e = diagonal_expectations(rho, spec, rng.uniform(0, 6, spec.n_params), 8)
            assert e.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all((e >= 0) & (e <= 1))

    def test_matches_unitary(self, rng):
        spec = AnsatzSpec(2, 3)
        theta = rng.uniform(0, 6, spec.n_params)
        rho = random_density(4, 2, seed=3).matrix
        U = build_unitary(spec, theta)
        np.testing.assert_allclose(
            diagonal_expectations(rho, spec, theta, 3), np.diag(U.conj().T @ rho @ U).real[:3], atol=1e-13
        )

    @pytest.mark.parametrize("n", [1, 2])
    def test_two_zero_layers_are_identity(self, n, rng):
        short, extended = AnsatzSpec(n, 2), AnsatzSpec(n, 4)
        theta = rng.uniform(0, 6, short.n_params)
        padded = np.concatenate((theta, np.zeros(extended.n_params - short.n_params)))
        rho = random_density(2**n, 2, seed=1)
        np.testing.assert_allclose(
            diagonal_expectations(rho, short, theta, 2), diagonal_expectations(rho, extended, padded, 2), atol=1e-13
        )

    def test_rank_out_of_range(self):
        with pytest.raises(ValueError):
            diagonal_expectations(np.eye(2) / 2, AnsatzSpec(1, 1), np.zeros(3), 3)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            diagonal_expectations(np.eye(4) / 4, AnsatzSpec(1, 1), np.zeros(3), 1)

    def test_shot_mode_is_seeded(self):
        spec = AnsatzSpec(2, 1)
        rho = random_density(4, 2, seed=0)
        a = diagonal_expectations(rho, spec, np.ones(6), 2, shots=100, rng=np.random.default_rng(1))
        b = diagonal_expectations(rho, spec, np.ones(6), 2, shots=100, rng=np.random.default_rng(1))
        np.testing.assert_array_equal(a, b)
        np.testing.assert_allclose(a * 100, np.round(a * 100), atol=1e-9)


class TestShiftGradient:
    def test_constant_objective(self, rng):
        spec = AnsatzSpec(2, 2)
        g = shift_gradient(np.eye(4) / 4, spec, rng.uniform(0, 6, spec.n_params), [0.5, 0.5], 7.0)
        assert g.shape == (spec.n_params,)
        np.testing.assert_allclose(g, 0, atol=1e-12)

    def test_finite_difference_oracle(self, rng):
        for s in range(20):
            n = 1 + s % 3
            spec = AnsatzSpec(n, 1 + s % 2)
            r = min(2, 2**n)
            rho = random_density(2**n, r, seed=s)
            theta = rng.uniform(0, 2 * np.pi, spec.n_params)
            t = rng.dirichlet(np.ones(r))
            c = float(rng.uniform(1, 20))
            g = shift_gradient(rho, spec, theta, t, c)
            fd = _finite_difference(rho, spec, theta, t, c)
            assert np.linalg.norm(g - fd) <= 1e-4 * np.linalg.norm(fd)

    @given(st.integers(0, 10_000))
    def test_shift_rule_per_component(self, seed):
        rng = np.random.default_rng(seed)
        spec = AnsatzSpec(2, 1)
        rho = random_density(4, 2, seed=seed)
        theta = rng.uniform(0, 2 * np.pi, spec.n_params)
        t = np.array([0.7, 0.3])
        g = shift_gradient(rho, spec, theta, t, 3.0)
        j = seed % spec.n_params
        e = np.zeros_like(theta)
        e[j] = np.pi / 2
        direct = (_objective(rho, spec, theta + e, t, 3.0) - _objective(rho, spec, theta - e, t, 3.0)) / 2
        assert g[j] == pytest.approx(direct, abs=1e-12)
