import math

import numpy as np
import pytest

from mpslab import linalg, states
from mpslab.errors import InvalidInput
from mpslab.states import DenseState, SchmidtSpectrum

W_ENTROPY = math.log(3) - (2 / 3) * math.log(2)  # spectrum [sqrt(2/3), sqrt(1/3)]


def partial_trace_oracle(amps, n, cut):
    """Reduced density matrix of the left block by explicit index summation."""
    left, right = 2**cut, 2 ** (n - cut)
    rho = np.zeros((left, left), dtype=complex)
    for i in range(left):
        for ip in range(left):
            for j in range(right):
                rho[i, ip] += amps[i * right + j] * np.conj(amps[ip * right + j])
    return rho


class TestDenseState:
    def test_renormalizes_small_drift(self):
        amps = np.zeros(4, dtype=complex)
        amps[0] = math.sqrt(1 + 5e-4)
        st = DenseState(2, 2, amps)
        assert abs(np.linalg.norm(st.amplitudes) - 1) < 1e-12

    def test_rejects_unnormalized(self):
        amps = np.zeros(4, dtype=complex)
        amps[0] = 1.1
        with pytest.raises(InvalidInput):
            DenseState(2, 2, amps)

    def test_rejects_wrong_count(self):
        with pytest.raises(InvalidInput):
            DenseState(2, 2, np.ones(5) / np.sqrt(5))

    def test_rejects_nonfinite(self):
        amps = np.zeros(4, dtype=complex)
        amps[0] = np.inf
        with pytest.raises(InvalidInput):
            DenseState(2, 2, amps)

    def test_rejects_small_local_dim(self):
        with pytest.raises(InvalidInput):
            DenseState(2, 1, np.ones(1))


class TestReducedDensityMatrix:
    def test_product_state(self):
        st = states.basis_state(2, 2, (0, 1))  # |01>
        rho = states.reduced_density_matrix(st, 1, "left")
        assert np.allclose(rho, np.diag([1.0, 0.0]))

    def test_bell(self):
        st = states.flat_entangled_state(1)
        rho = states.reduced_density_matrix(st, 1, "left")
        assert np.allclose(rho, np.eye(2) / 2)

    def test_ghz_cut_two(self):
        rho = states.reduced_density_matrix(states.ghz_state(3), 2, "left")
        oracle = partial_trace_oracle(states.ghz_state(3).amplitudes, 3, 2)
        assert np.allclose(rho, oracle, atol=1e-12)
        assert np.allclose(np.diag(rho), [0.5, 0, 0, 0.5])

    @pytest.mark.parametrize("keep", ["left", "right"])
    @pytest.mark.parametrize("cut", [1, 2, 3])
    def test_density_matrix_contract(self, cut, keep):
        st = states.random_state(4, 2, seed=cut)
        rho = states.reduced_density_matrix(st, cut, keep)
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-10
        assert abs(np.trace(rho) - 1) < 1e-10
        assert linalg.eigh(rho)[0][-1] > -1e-10

    def test_right_matches_oracle(self):
        st = states.random_state(3, 2, seed=9)
        got = states.reduced_density_matrix(st, 1, "right")
        # oracle: trace out the left site by summation
        amps = st.amplitudes
        oracle = np.zeros((4, 4), dtype=complex)
        for j in range(4):
            for jp in range(4):
                for i in range(2):
                    oracle[j, jp] += amps[i * 4 + j] * np.conj(amps[i * 4 + jp])
        assert np.allclose(got, oracle, atol=1e-12)

    def test_rejects_bad_cut(self):
        st = states.ghz_state(3)
        for cut in (0, 3):
            with pytest.raises(InvalidInput):
                states.reduced_density_matrix(st, cut)


class TestSchmidtSpectrum:
    def test_product_state_any_cut(self):
        st = states.product_state([[1, 0], [0.6, 0.8], [1 / 2, np.sqrt(3) / 2]])
        for cut in (1, 2):
            spec = states.schmidt_spectrum(st, cut)
            assert spec.chi == 1
            assert np.allclose(spec.weights, [1.0])

    def test_bell(self):
        spec = states.schmidt_spectrum(states.flat_entangled_state(1), 1)
        assert spec.chi == 2
        assert np.allclose(spec.weights, [1 / np.sqrt(2)] * 2)

    @pytest.mark.parametrize("half", [1, 2, 3])
    def test_flat_state(self, half):
        spec = states.schmidt_spectrum(states.flat_entangled_state(half), half)
        assert spec.chi == 2**half
        assert np.allclose(spec.weights, 2 ** (-half / 2), atol=1e-12)

    def test_spectrum_validation(self):
        with pytest.raises(InvalidInput):
            SchmidtSpectrum(np.array([0.9, 0.1]))  # squared sum far from 1
        with pytest.raises(InvalidInput):
            SchmidtSpectrum(np.array([-1.0]))


class TestEntropy:
    def test_product(self):
        assert states.entropy(SchmidtSpectrum(np.array([1.0]))) == 0.0

    def test_flat_two_level(self):
        spec = SchmidtSpectrum(np.array([1, 1]) / np.sqrt(2))
        assert abs(states.entropy(spec) - math.log(2)) < 1e-12

    def test_w_state_cut_one(self):
        st = states.w_state(3)
        s = states.entropy(states.schmidt_spectrum(st, 1))
        assert abs(s - W_ENTROPY) < 1e-10
        assert abs(W_ENTROPY - 0.636514) < 1e-6

    def test_bounded_by_log_chi(self):
        for seed in range(4):
            st = states.random_state(6, 2, seed)
            for cut in range(1, 6):
                spec = states.schmidt_spectrum(st, cut)
                assert states.entropy(spec) <= math.log(spec.chi) + 1e-10


class TestLeftRightEntropy:
    def test_bell(self):
        s_l, s_r = states.entropy_left_equals_right(states.flat_entangled_state(1), 1)
        assert abs(s_l - math.log(2)) < 1e-10
        assert abs(s_r - math.log(2)) < 1e-10

    def test_random_six_qubits(self):
        st = states.random_state(6, 2, seed=77)
        s_l, s_r = states.entropy_left_equals_right(st, 2)
        assert abs(s_l - s_r) <= 1e-8

    def test_product(self):
        st = states.basis_state(3, 2, (1, 0, 1))
        s_l, s_r = states.entropy_left_equals_right(st, 2)
        assert abs(s_l) < 1e-12 and abs(s_r) < 1e-12


class TestInvariants:
    @pytest.mark.parametrize("seed", range(3))
    def test_svd_eigh_cross_oracle(self, seed):
        st = states.random_state(5, 2, seed)
        for cut in range(1, 5):
            s_svd = states.entropy(states.schmidt_spectrum(st, cut))
            rho = states.reduced_density_matrix(st, cut)
            w = linalg.eigh(rho)[0]
            p = w[w > 1e-16]
            s_eig = float(-np.sum(p * np.log(p)))
            assert abs(s_svd - s_eig) <= 1e-8

    @pytest.mark.parametrize("d", [2, 3])
    def test_volume_bound(self, d):
        st = states.random_state(4, d, seed=d)
        for cut in range(1, 4):
            s = states.entropy(states.schmidt_spectrum(st, cut))
            assert s <= min(cut, 4 - cut) * math.log(d) + 1e-8

    def test_local_unitary_invariance(self):
        st = states.random_state(5, 2, seed=21)
        rng = np.random.default_rng(22)
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        u = np.linalg.qr(g)[0]
        for site in range(5):
            ops = [np.eye(2)] * 5
            ops[site] = u
            full = ops[0]
            for op in ops[1:]:
                full = np.kron(full, op)
            rotated = DenseState(5, 2, full @ st.amplitudes)
            for cut in range(1, 5):
                a = states.schmidt_spectrum(st, cut).weights
                b = states.schmidt_spectrum(rotated, cut).weights
                assert a.shape == b.shape
                assert np.max(np.abs(a - b)) <= 1e-8


class TestQstateFormat:
    def test_roundtrip(self, tmp_path):
        st = states.random_state(4, 2, seed=11)
        path = tmp_path / "s.qstate"
        states.save_qstate(st, path)
        back = states.load_qstate(path)
        assert back.n == st.n and back.d == st.d
        assert np.array_equal(back.amplitudes, st.amplitudes)

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.qstate"
        path.write_text("QSTATE 2\n1 2\n1.0 0.0\n0.0 0.0\n")
        with pytest.raises(InvalidInput):
            states.load_qstate(path)

    def test_rejects_wrong_count(self, tmp_path):
        path = tmp_path / "short.qstate"
        path.write_text("QSTATE 1\n1 2\n1.0 0.0\n")
        with pytest.raises(InvalidInput):
            states.load_qstate(path)

    def test_rejects_nonfinite(self, tmp_path):
        path = tmp_path / "inf.qstate"
        path.write_text("QSTATE 1\n1 2\ninf 0.0\n0.0 0.0\n")
        with pytest.raises(InvalidInput):
            states.load_qstate(path)

    def test_rejects_nonnumeric(self, tmp_path):
        path = tmp_path / "junk.qstate"
        path.write_text("QSTATE 1\n1 2\nxyz 0.0\n0.0 0.0\n")
        with pytest.raises(InvalidInput):
            states.load_qstate(path)
