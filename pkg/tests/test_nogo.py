import numpy as np
import pytest
from scipy.optimize import minimize

from biparti import nogo, qlin, scenarios
from biparti.nogo import NoCheatError, NotConcealingError, SecurityReport, UnreadableResultError
from biparti.qlin import DensityOperator, StateVector, UnitaryMatrix
from biparti.randomized import (random_density, random_low_rank_state, random_one_sided_protocol,
                                random_state, random_unitary)
from biparti.selftest import _direct_table

import oracles


def quantum_oot_outputs():
    return [StateVector(oracles.tabulated_out_vector(c)) for c in (0, 1)]


class TestSecurityReport:
    def test_derived_fields(self):
        r = SecurityReport(0.5, tolerance=1e-9)
        assert r.guess_probability == 0.75
        assert r.verdict == nogo.BROKEN

    def test_boundary_is_secure(self):
        assert SecurityReport(1e-9, tolerance=1e-9).verdict == nogo.SECURE

    def test_to_dict(self):
        d = SecurityReport(0.0, cheat_unitary=qlin.standard_gate("pauli_x"), label="x").to_dict()
        assert d["verdict"] == nogo.SECURE and d["guess_probability"] == 0.5
        assert d["cheat_unitary"]["re"] == [[0.0, 1.0], [1.0, 0.0]]


class TestCheckEqualReduced:
    def test_identical(self, rng):
        v = random_state(rng, 3)
        r = nogo.check_equal_reduced(v, v, [0])
        assert r.concealment_distance == 0 and r.verdict == nogo.SECURE
        assert r.cheat_unitary is None

    def test_orthogonal_reductions(self):
        r = nogo.check_equal_reduced(StateVector.basis("00"), StateVector.basis("11"), [0])
        assert r.concealment_distance == pytest.approx(1, abs=1e-12)
        assert r.verdict == nogo.BROKEN

    def test_quantum_oot_alice_distinguishes(self):
        v0, v1 = quantum_oot_outputs()
        r = nogo.check_equal_reduced(v0, v1, side=[3, 4, 5])
        assert r.verdict == nogo.BROKEN
        assert r.concealment_distance == pytest.approx(oracles.ALICE_TRACE_DISTANCE_QUANTUM, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(qlin.QlinError, match="dimension"):
            nogo.check_equal_reduced(StateVector.basis("0"), StateVector.basis("00"), [0])

    @pytest.mark.parametrize("side", [[], [0, 1]])
    def test_side_must_be_proper(self, side):
        v = StateVector.basis("00")
        with pytest.raises(qlin.QlinError):
            nogo.check_equal_reduced(v, v, side)

    def test_symmetric(self, rng):
        for _ in range(20):
            v0, v1 = random_state(rng, 4), random_state(rng, 4)
            assert (nogo.check_equal_reduced(v0, v1, [1, 2]).concealment_distance
                    == nogo.check_equal_reduced(v1, v0, [1, 2]).concealment_distance)

    def test_invariant_under_cheater_unitary(self, rng):
        for _ in range(20):
            v0, v1 = random_state(rng, 4), random_state(rng, 4)
            side = (0, 3)
            moved = qlin.apply_unitary(v0, random_unitary(rng, 2), side)
            d0 = nogo.check_equal_reduced(v0, v1, side).concealment_distance
            d1 = nogo.check_equal_reduced(moved, v1, side).concealment_distance
            assert abs(d0 - d1) < 1e-9


class TestSynthCheatUnitary:
    def test_identical_states(self, rng):
        v = random_low_rank_state(rng, 2, 2, rank=2)
        w = nogo.synth_cheat_unitary(v, v, [0, 1])
        sd = qlin.schmidt_decompose(v, [0, 1])
        for b in sd.left_basis:
            np.testing.assert_allclose(w.matrix @ b.amplitudes, b.amplitudes, atol=1e-9)
        assert nogo.action_error(w, v, v, [0, 1]) < 1e-8

    def test_construct_then_recover_100(self, rng):
        for _ in range(100):
            n_other = int(rng.integers(1, 4))
            n = 2 + n_other
            side = tuple(sorted(rng.permutation(n)[:2]))
            v0 = random_state(rng, n)
            u = random_unitary(rng, 2)
            v1 = qlin.apply_unitary(v0, u, side)
            w = nogo.synth_cheat_unitary(v0, v1, side)
            np.testing.assert_allclose(w.matrix @ w.matrix.conj().T, np.eye(4), atol=1e-9)
            assert nogo.action_error(w, v0, v1, side) < 1e-8
            # on the support W coincides with U
            rho = qlin.reduced_density(v0, side).matrix
            vals, vecs = np.linalg.eigh(rho)
            support = vecs[:, vals > 1e-9]
            np.testing.assert_allclose(w.matrix @ support, u.matrix @ support, atol=1e-8)

    def test_with_global_phase(self, rng):
        v0 = random_state(rng, 3)
        v1 = StateVector(np.exp(0.7j) * qlin.apply_unitary(v0, random_unitary(rng, 1), [2]).amplitudes)
        w = nogo.synth_cheat_unitary(v0, v1, [2])
        assert nogo.action_error(w, v0, v1, [2]) < 1e-8

    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_low_rank(self, rng, rank):
        for _ in range(10):
            v0 = random_low_rank_state(rng, 3, 2, rank=min(rank, 4))
            v1 = qlin.apply_unitary(v0, random_unitary(rng, 3), [0, 1, 2])
            w = nogo.synth_cheat_unitary(v0, v1, [0, 1, 2])
            assert nogo.action_error(w, v0, v1, [0, 1, 2]) < 1e-8

    def test_degenerate_spectrum(self, rng):
        # Two Bell pairs: the honest side is exactly I/4, every eigenvalue shared.
        v0 = qlin.tensor([qlin.bell_state("00"), qlin.bell_state("00")]).permuted((0, 2, 1, 3))
        for _ in range(10):
            v1 = qlin.apply_unitary(v0, random_unitary(rng, 2), [0, 1])
            w = nogo.synth_cheat_unitary(v0, v1, [0, 1])
            assert nogo.action_error(w, v0, v1, [0, 1]) < 1e-8

    def test_toy_commitment_switch(self):
        image0, image1 = scenarios.toy_commitment_images()
        w = nogo.synth_cheat_unitary(image0, image1, [0, 1])
        assert nogo.action_error(w, image0, image1, [0, 1]) < 1e-8
        np.testing.assert_allclose(qlin.reduced_density(image0, [2, 3]).matrix, np.eye(4) / 4, atol=1e-12)

    def test_hypothesis_violation(self):
        v0, v1 = quantum_oot_outputs()
        with pytest.raises(NoCheatError, match="no perfect cheat exists"):
            nogo.synth_cheat_unitary(v0, v1, [3, 4, 5])

    def test_deterministic(self, rng):
        v0 = random_low_rank_state(rng, 2, 1, rank=1)
        v1 = qlin.apply_unitary(v0, random_unitary(rng, 2), [0, 1])
        w1 = nogo.synth_cheat_unitary(v0, v1, [0, 1])
        w2 = nogo.synth_cheat_unitary(v0, v1, [0, 1])
        np.testing.assert_array_equal(w1.matrix, w2.matrix)


class TestLoAttack:
    def test_identity_constant(self):
        # 1 Alice qubit, 1 Bob input qubit, 1 Bob result qubit that stays |0>.
        res = nogo.lo_attack(UnitaryMatrix(np.eye(8)), [0, 1], [0, 1], result_readout=[2],
                             alice_register=[0], bob_register=[1], bob_side=[1, 2])
        assert set(res.table.values()) == {(0,)}
        assert len(res.table) == 4
        # U^{0,0} is the identity on its support
        np.testing.assert_allclose(res.unitaries[(0, 0)].matrix[:, 0], [1, 0, 0, 0], atol=1e-9)
        assert res.universality_error < 1e-8

    @pytest.mark.parametrize("alice_bits,bob_values", [(1, 2), (2, 2), (2, 3), (2, 4)])
    def test_constructed_protocols(self, rng, alice_bits, bob_values):
        for _ in range(3):
            proto = random_one_sided_protocol(rng, alice_bits, bob_values)
            res = nogo.lo_attack(**proto)
            assert res.table == _direct_table(proto)
            assert res.universality_error < 1e-8

    def test_switch_is_universal_over_alice_inputs(self, rng):
        proto = random_one_sided_protocol(rng, 2, 3)
        res = nogo.lo_attack(**proto)
        joint, n = proto["joint"], proto["joint"].num_qubits
        for i in proto["alice_inputs"]:
            for j in proto["bob_inputs"]:
                def out(jj):
                    bits = ["0"] * n
                    for reg, val in ((proto["alice_register"], i), (proto["bob_register"], jj)):
                        for q, b in zip(reg, format(val, f"0{len(reg)}b")):
                            bits[q] = b
                    return StateVector(joint.matrix[:, int("".join(bits), 2)])
                moved = qlin.apply_unitary(out(0), res.unitaries[(0, j)], res.bob_side)
                assert moved.phase_distance(out(j)) < 1e-8

    def test_quantum_oot_is_not_concealing(self):
        prep = qlin.circuit_unitary(6, [(qlin.standard_gate("ry_half_pi"), (2,)),
                                        (qlin.standard_gate("cnot"), (2, 3))])
        joint = scenarios.oot_gate() @ prep
        with pytest.raises(NotConcealingError, match="protocol not concealing; Lo attack not applicable"):
            nogo.lo_attack(joint, [0, 1, 2, 3], [0, 1], result_readout=[3, 4],
                           alice_register=[0, 1], bob_register=[5], bob_side=[3, 4, 5])

    def test_unreadable_result(self):
        # Bob's result qubit is put in |+>: concealing, but not an eigenstate.
        h = qlin.standard_gate("hadamard")
        joint = qlin.circuit_unitary(3, [(h, (2,))])
        with pytest.raises(UnreadableResultError, match="result not unambiguously readable"):
            nogo.lo_attack(joint, [0, 1], [0, 1], result_readout=[2],
                           alice_register=[0], bob_register=[1], bob_side=[1, 2])

    def test_readout_must_be_bob_side(self):
        with pytest.raises(ValueError):
            nogo.lo_attack(UnitaryMatrix(np.eye(4)), [0], [0], result_readout=[0],
                           alice_register=[0], bob_register=[1], bob_side=[1])


def brute_force_guess(rho0, rho1):
    """Best two-outcome projective measurement on one qubit: grid, then local refinement."""
    def success(x):
        theta, phi = x
        psi = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
        p0 = np.real(psi.conj() @ rho0 @ psi)
        p1 = np.real(psi.conj() @ rho1 @ psi)
        return 0.5 * (p0 + 1 - p1)

    grid = [(t, p) for t in np.linspace(0, np.pi, 20) for p in np.linspace(0, 2 * np.pi, 40, endpoint=False)]
    best = max(grid, key=success)
    worst = min(grid, key=success)
    hi = -minimize(lambda x: -success(x), best, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12}).fun
    lo = minimize(success, worst, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12}).fun
    # Swapping the outcome labels turns the worst projector into the best one.
    return max(hi, 1 - lo)


class TestGuessProbability:
    def test_equal(self, rng):
        rho = random_density(rng, 2)
        assert nogo.guess_probability(rho, rho) == 0.5

    def test_orthogonal(self):
        rho0 = DensityOperator(np.diag([1.0, 0]))
        rho1 = DensityOperator(np.diag([0, 1.0]))
        assert nogo.guess_probability(rho0, rho1) == pytest.approx(1, abs=1e-12)

    def test_quantum_oot(self):
        rho0 = DensityOperator(oracles.alice_density_from_terms(oracles.TABULATED_OUT[0]))
        rho1 = DensityOperator(oracles.alice_density_from_terms(oracles.TABULATED_OUT[1]))
        assert nogo.guess_probability(rho0, rho1) == pytest.approx(oracles.ALICE_GUESS_PROBABILITY_QUANTUM, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(qlin.QlinError):
            nogo.guess_probability(DensityOperator.maximally_mixed(1), DensityOperator.maximally_mixed(2))

    def test_matches_brute_force_on_50_pairs(self, rng):
        for _ in range(50):
            rho0, rho1 = random_density(rng, 1), random_density(rng, 1)
            assert abs(nogo.guess_probability(rho0, rho1) - brute_force_guess(rho0.matrix, rho1.matrix)) < 1e-6

    def test_monotone_in_distance(self, rng):
        base = DensityOperator(np.diag([1.0, 0]))
        values = []
        for p in np.linspace(0, 1, 11):
            values.append(nogo.guess_probability(base, DensityOperator(np.diag([1 - p, p]))))
        assert np.all(np.diff(values) > 0)
