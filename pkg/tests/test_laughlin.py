import itertools
import math

import numpy as np
import pytest

from mpslab import laughlin, mps, states
from mpslab.errors import InvalidInput, TooLarge

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def sign_oracle(tup):
    """Permutation sign by cycle decomposition (independent of the library)."""
    n = len(tup)
    if sorted(tup) != list(range(n)):
        return 0
    seen = [False] * n
    sign = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = tup[k]
            length += 1
        sign *= (-1) ** (length - 1)
    return sign


class TestBuildClifford:
    def test_lowest_algebra(self):
        rep = laughlin.build_clifford(2)
        assert np.array_equal(rep.gammas[0], X)
        assert np.array_equal(rep.gammas[1], Y)
        assert np.array_equal(rep.gamma5, Z)

    def test_four_generator_anticommutators(self):
        rep = laughlin.build_clifford(4)
        assert rep.dim == 4
        for a in range(4):
            for b in range(4):
                anti = rep.gammas[a] @ rep.gammas[b] + rep.gammas[b] @ rep.gammas[a]
                want = 2.0 * (a == b) * np.eye(4)
                assert np.max(np.abs(anti - want)) <= 1e-15

    def test_six_generator_chirality(self):
        rep = laughlin.build_clifford(6)
        assert rep.dim == 8
        assert np.max(np.abs(rep.gamma5 @ rep.gamma5 - np.eye(8))) <= 1e-12

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_representation_invariants(self, n):
        rep = laughlin.build_clifford(n)
        eye = np.eye(rep.dim)
        for a in range(n):
            g = rep.gammas[a]
            assert np.max(np.abs(g - g.conj().T)) <= 1e-12
            assert np.max(np.abs(g @ g.conj().T - eye)) <= 1e-12
            for b in range(n):
                anti = g @ rep.gammas[b] + rep.gammas[b] @ g
                assert np.max(np.abs(anti - 2.0 * (a == b) * eye)) <= 1e-12
        assert np.max(np.abs(rep.gamma5 - rep.gamma5.conj().T)) <= 1e-12
        assert np.max(np.abs(rep.gamma5 @ rep.gamma5 - eye)) <= 1e-12

    def test_rejects_odd(self):
        with pytest.raises(InvalidInput):
            laughlin.build_clifford(3)

    def test_dimension_guard(self):
        with pytest.raises(TooLarge):
            laughlin.build_clifford(16)


class TestEpsilonViaTrace:
    def test_identity_permutation(self):
        rep = laughlin.build_clifford(4)
        assert laughlin.epsilon_via_trace(rep, (0, 1, 2, 3)) == pytest.approx(1.0)

    def test_transposition(self):
        rep = laughlin.build_clifford(4)
        assert laughlin.epsilon_via_trace(rep, (1, 0, 2, 3)) == pytest.approx(-1.0)

    def test_exhaustive_n4(self):
        rep = laughlin.build_clifford(4)
        for tup in itertools.product(range(4), repeat=4):
            got = laughlin.epsilon_via_trace(rep, tup)
            assert abs(got - sign_oracle(tup)) <= 1e-12, tup

    def test_sampled_n8(self):
        rep = laughlin.build_clifford(8)
        rng = np.random.default_rng(2024)
        for _ in range(10_000):
            tup = tuple(int(v) for v in rng.integers(0, 8, size=8))
            got = laughlin.epsilon_via_trace(rep, tup)
            assert abs(got - sign_oracle(tup)) <= 1e-10, tup

    def test_cyclic_rotation_sign(self):
        # rotating n=4 indices once is an odd permutation: sign (-1)^{n-1}
        rep = laughlin.build_clifford(4)
        for tup in itertools.permutations(range(4)):
            rotated = tup[1:] + tup[:1]
            lhs = laughlin.epsilon_via_trace(rep, rotated)
            rhs = -laughlin.epsilon_via_trace(rep, tup)
            assert abs(lhs - rhs) <= 1e-12

    def test_rejects_out_of_range(self):
        rep = laughlin.build_clifford(4)
        with pytest.raises(InvalidInput):
            laughlin.epsilon_via_trace(rep, (0, 1, 2, 4))

    def test_library_sign_matches_oracle(self):
        for tup in itertools.product(range(4), repeat=4):
            assert laughlin.permutation_sign(tup) == sign_oracle(tup)


class TestSlaterState:
    def test_two_particle_antisymmetry(self):
        rep = laughlin.build_clifford(2)
        state = laughlin.slater_from_trace(rep)
        assert state.amplitude((0, 1)) == pytest.approx(1 / math.sqrt(2))
        assert state.amplitude((1, 0)) == pytest.approx(-1 / math.sqrt(2))
        assert state.amplitude((0, 0)) == pytest.approx(0.0)
        assert state.amplitude((1, 1)) == pytest.approx(0.0)

    def test_exclusion(self):
        rep = laughlin.build_clifford(4)
        state = laughlin.slater_from_trace(rep)
        assert state.amplitude((0, 0, 2, 3)) == pytest.approx(0.0)

    def test_table_fully_antisymmetric(self):
        rep = laughlin.build_clifford(4)
        table = laughlin.slater_from_trace(rep).amplitude_table()
        base = (0, 1, 2, 3)
        for perm in itertools.permutations(range(4)):
            reordered = tuple(base[p] for p in perm)
            want = sign_oracle(perm) * table[base]
            assert abs(table[reordered] - want) <= 1e-12

    def test_table_is_normalized(self):
        rep = laughlin.build_clifford(4)
        table = laughlin.slater_from_trace(rep).amplitude_table()
        assert abs(np.linalg.norm(table) - 1.0) <= 1e-12

    def test_table_guard(self):
        rep = laughlin.build_clifford(10)
        with pytest.raises(TooLarge):
            laughlin.slater_from_trace(rep).amplitude_table()


class TestHalfCutEntropy:
    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_matches_binomial_formula(self, n):
        rep = laughlin.build_clifford(n)
        got = laughlin.half_cut_entropy(rep)
        want = math.log(math.comb(n, n // 2))
        assert abs(got - want) <= 1e-8

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_below_ring_capacity(self, n):
        rep = laughlin.build_clifford(n)
        assert laughlin.binomial_entropy(n) <= laughlin.capacity_bound(rep) + 1e-12
        assert laughlin.capacity_bound(rep) == pytest.approx(n * math.log(2))

    def test_frozen_values(self):
        assert laughlin.binomial_entropy(4) == pytest.approx(1.791759469228055)
        assert laughlin.binomial_entropy(6) == pytest.approx(2.995732273553991)


class TestExportPeriodicMps:
    def test_two_site_pattern(self):
        ring = laughlin.export_periodic_mps(laughlin.build_clifford(2))
        r = {
            (0, 1): 1.0,
            (1, 0): -1.0,
            (0, 0): 0.0,
            (1, 1): 0.0,
        }
        for tup, want in r.items():
            assert mps.periodic_amplitude(ring, tup) == pytest.approx(want)

    def test_matches_epsilon_on_all_tuples(self):
        rep = laughlin.build_clifford(4)
        ring = laughlin.export_periodic_mps(rep)
        for tup in itertools.product(range(4), repeat=4):
            got = mps.periodic_amplitude(ring, tup)
            want = laughlin.epsilon_via_trace(rep, tup)
            assert abs(got - want) <= 1e-12

    def test_parameter_count(self):
        for n in (2, 4, 6):
            ring = laughlin.export_periodic_mps(laughlin.build_clifford(n))
            assert ring.parameter_count() == n * n * (2 ** (n // 2)) ** 2

    def test_dense_state_entropy_via_ring(self):
        # half-cut entropy read off the exported ring, not the trace table
        ring = laughlin.export_periodic_mps(laughlin.build_clifford(4))
        dense = mps.periodic_to_dense(ring)
        s = states.entropy_at_cut(dense, 2)
        assert abs(s - math.log(6)) <= 1e-8
