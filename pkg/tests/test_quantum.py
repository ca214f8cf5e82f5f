import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from bqcsim.quantum import (
    Angle,
    BellOutcome,
    QubitPool,
    StateVector,
    angle_state,
    bell_measure,
    fidelity,
    make_bell_pair,
    measure_computational,
    measure_rotated,
    tensor,
)

S2 = 1 / math.sqrt(2)
TOL = 1e-9
BELL_PAIRS = [(z, x) for z in (0, 1) for x in (0, 1)]


def product_of_pairs():
    return tensor(make_bell_pair(0, 0, ("Bs", "As")), make_bell_pair(0, 0, ("Bt", "At")))


class TestAngle:
    @given(st.integers(-1000, 1000))
    def test_reduced_mod_8(self, k):
        assert Angle(k).eighths in range(8)
        assert Angle(k) == Angle(k % 8)

    @given(st.integers(0, 7))
    def test_pi_and_negation(self, k):
        assert (Angle(k) + 4).eighths == (k + 4) % 8
        assert (-Angle(k)).eighths == (8 - k) % 8

    def test_phase_matches_exponential(self):
        for a in Angle.all():
            assert a.phase == pytest.approx(np.exp(1j * a.radians), abs=1e-15)


class TestBellPair:
    def test_psi_00(self):
        np.testing.assert_allclose(make_bell_pair(0, 0).amplitudes, [S2, 0, 0, S2])

    def test_psi_10(self):
        np.testing.assert_allclose(make_bell_pair(1, 0).amplitudes, [S2, 0, 0, -S2])

    def test_psi_01(self):
        np.testing.assert_allclose(make_bell_pair(0, 1).amplitudes, [0, S2, S2, 0])

    @pytest.mark.parametrize("z,x", BELL_PAIRS)
    def test_matches_oracle(self, z, x):
        expected = oracle.to_vector(oracle.bell(z, x, ["B", "A"]), ["B", "A"])
        np.testing.assert_allclose(make_bell_pair(z, x).amplitudes, expected, atol=1e-15)

    def test_labels_b_side_first(self):
        assert make_bell_pair(0, 0).labels == ("B", "A")

    def test_bad_bit(self):
        with pytest.raises(ValueError):
            make_bell_pair(2, 0)


class TestBellMeasure:
    @pytest.mark.parametrize("z,x", BELL_PAIRS)
    def test_eigenstate(self, z, x):
        rng = np.random.default_rng(0)
        for _ in range(20):
            state = make_bell_pair(z, x, ("p", "q"))
            assert bell_measure(state, ("p", "q"), rng) == BellOutcome(z, x)
            assert state.qubit_count == 0

    @pytest.mark.parametrize("z,x", BELL_PAIRS)
    def test_swap_residual_matches_oracle(self, z, x):
        state = product_of_pairs()
        bell_measure(state, ("As", "At"), force=BellOutcome(z, x))
        ref, prob = oracle.project(
            oracle.product(oracle.bell(0, 0, ["Bs", "As"]), oracle.bell(0, 0, ["Bt", "At"])),
            ["As", "At"], oracle.bell(z, x, ["As", "At"])[1],
        )
        assert prob == pytest.approx(0.25)
        assert state.labels == ("Bs", "Bt")
        np.testing.assert_allclose(
            state.amplitudes, np.array(oracle.to_vector(oracle.normalize(ref), ["Bs", "Bt"])), atol=1e-12
        )
        # and the residual is |psi_{z,x}> itself
        assert fidelity(state, make_bell_pair(z, x, ("Bs", "Bt"))) > 1 - TOL

    def test_product_state_outcomes_uniform(self):
        rng = np.random.default_rng(11)
        counts = np.zeros(4)
        for _ in range(4000):
            counts[bell_measure(product_of_pairs(), ("As", "At"), rng).index] += 1
        np.testing.assert_allclose(counts / 4000, 0.25, atol=0.03)

    def test_computational_00(self):
        # |00> = (|psi_00> + |psi_10>)/sqrt(2)
        for z, x in BELL_PAIRS:
            _, p = oracle.project(oracle.ket((0, 0), ["p", "q"]), ["p", "q"], oracle.bell(z, x, ["p", "q"])[1])
            assert p == pytest.approx(0.5 if x == 0 else 0.0)
        rng = np.random.default_rng(5)
        seen = [tuple(bell_measure(StateVector([1, 0, 0, 0], ("p", "q")), ("p", "q"), rng))
                for _ in range(2000)]
        assert set(seen) == {(0, 0), (1, 0)}
        assert seen.count((0, 0)) / 2000 == pytest.approx(0.5, abs=0.04)
        with pytest.raises(ValueError):
            bell_measure(StateVector([1, 0, 0, 0], ("p", "q")), ("p", "q"), force=BellOutcome(0, 1))

    def test_unknown_qubit(self):
        with pytest.raises(KeyError):
            bell_measure(make_bell_pair(0, 0), ("A", "nope"), np.random.default_rng(0))


class TestMeasureRotated:
    @pytest.mark.parametrize("k", range(8))
    def test_eigenstate(self, k):
        rng = np.random.default_rng(k)
        for _ in range(20):
            assert measure_rotated(angle_state(k, "q"), "q", Angle(k), rng) == 0
            assert measure_rotated(angle_state(k + 4, "q"), "q", Angle(k), rng) == 1

    @pytest.mark.parametrize("k", range(8))
    def test_half_bell_pair_uniform(self, k):
        # reduced state of either half is maximally mixed
        for b in (0, 1):
            _, p = oracle.project(oracle.bell(0, 0, ["B", "A"]), ["B"], oracle.rotated_bra(k, b))
            assert p == pytest.approx(0.5)
        rng = np.random.default_rng(100 + k)
        zeros = sum(measure_rotated(make_bell_pair(0, 0), "B", Angle(k), rng) == 0 for _ in range(2000))
        assert zeros / 2000 == pytest.approx(0.5, abs=0.04)

    @pytest.mark.parametrize("zp,xp", BELL_PAIRS)
    def test_residual_law_exhaustive(self, zp, xp):
        # oracle-selected pads, independent of bqcsim.pads
        pad = {(0, 0): (0, 1), (0, 1): (0, 0), (1, 0): (1, 1), (1, 1): (1, 0)}[(zp, xp)]
        for a in range(8):
            tilde = ((-1) ** pad[1] * a + 4 * pad[0]) % 8
            for b in (0, 1):
                state = make_bell_pair(zp, xp, ("Bs", "Bt"))
                measure_rotated(state, "Bs", Angle(tilde), force=b)
                assert fidelity(state, angle_state(a + 4 * b, "Bt")) > 1 - TOL
                assert oracle.residual_angle_ok(zp, xp, tilde, a, b)

    def test_unknown_qubit(self):
        with pytest.raises(KeyError):
            measure_rotated(angle_state(0, "q"), "r", Angle(0), np.random.default_rng(0))


class TestRepeatStability:
    @pytest.mark.parametrize("k", range(8))
    def test_rotated(self, k):
        rng = np.random.default_rng(k)
        for _ in range(10):
            b = measure_rotated(make_bell_pair(0, 0), "B", Angle(k), rng)
            # measured qubits leave the register, so rebuild the collapsed ket
            for _ in range(10):
                assert measure_rotated(angle_state(k + 4 * b, "B"), "B", Angle(k), rng) == b

    @pytest.mark.parametrize("z,x", BELL_PAIRS)
    def test_bell(self, z, x):
        rng = np.random.default_rng(7)
        for _ in range(10):
            assert bell_measure(make_bell_pair(z, x, ("p", "q")), ("p", "q"), rng) == BellOutcome(z, x)
        # a swapped pair is itself a Bell eigenstate
        state = product_of_pairs()
        outcome = bell_measure(state, ("As", "At"), rng)
        for _ in range(10):
            assert bell_measure(state.copy(), ("Bs", "Bt"), rng) == outcome


class TestFidelity:
    def test_identity(self):
        assert fidelity(make_bell_pair(0, 0), make_bell_pair(0, 0)) == pytest.approx(1.0)

    def test_orthogonal_bell(self):
        assert fidelity(make_bell_pair(0, 0), make_bell_pair(1, 0)) == pytest.approx(0.0, abs=1e-15)

    @given(st.floats(0, 2 * math.pi))
    def test_global_phase(self, phi):
        a = angle_state(1, "q")
        b = StateVector(a.amplitudes * np.exp(1j * phi), ("q",))
        assert fidelity(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_label_order_is_matched(self):
        a = StateVector([0, 1, 0, 0], ("x", "y"))  # x=0, y=1
        assert fidelity(a, StateVector([0, 0, 1, 0], ("y", "x"))) == pytest.approx(1.0)
        assert fidelity(a, StateVector([0, 1, 0, 0], ("y", "x"))) == pytest.approx(0.0)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(make_bell_pair(0, 0), angle_state(0, "B"))
        with pytest.raises(ValueError):
            fidelity(angle_state(0, "a"), angle_state(0, "b"))


class TestRegister:
    def test_limit_four_qubits(self):
        four = product_of_pairs()
        with pytest.raises(ValueError):
            tensor(four, angle_state(0, "extra"))

    def test_duplicate_labels(self):
        with pytest.raises(ValueError):
            tensor(make_bell_pair(0, 0), make_bell_pair(0, 0))

    @settings(max_examples=60)
    @given(st.lists(st.tuples(st.sampled_from(["bell", "rot", "z"]), st.integers(0, 7)), max_size=6),
           st.integers(0, 2**32 - 1))
    def test_normalization_after_every_operation(self, ops, seed):
        rng = np.random.default_rng(seed)
        pool = QubitPool()
        pool.add(make_bell_pair(0, 0, ("B1", "A1")))
        pool.add(make_bell_pair(1, 1, ("B2", "A2")))
        for op, k in ops:
            live = sorted(pool.labels())
            if not live:
                break
            if op == "bell" and len(live) >= 2:
                pool.bell_measure((live[0], live[-1]), rng)
            elif op == "rot":
                pool.measure_rotated(live[k % len(live)], Angle(k), rng)
            else:
                pool.discard(live[k % len(live)], rng)
            for reg in pool.registers():
                assert abs(reg.norm() - 1) < 1e-12
                assert set(reg.labels) <= set(pool.labels())

    def test_pool_merges_only_on_joint_measurement(self):
        pool = QubitPool()
        pool.add(make_bell_pair(0, 0, ("B1", "A1")))
        pool.add(make_bell_pair(0, 0, ("B2", "A2")))
        assert len(pool.registers()) == 2
        pool.bell_measure(("A1", "A2"), np.random.default_rng(0))
        assert len(pool.registers()) == 1
        assert pool.register("B1").labels == ("B1", "B2")

    def test_discard_leaves_partner_single(self):
        pool = QubitPool()
        pool.add(make_bell_pair(0, 0, ("B1", "A1")))
        pool.discard("A1", np.random.default_rng(0))
        assert pool.register("B1").qubit_count == 1
        assert "A1" not in pool

    def test_computational_measurement(self):
        state = StateVector([0, 1], ("q",))
        assert measure_computational(state, "q", np.random.default_rng(0)) == 1
