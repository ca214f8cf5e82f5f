import math
from math import comb

import numpy as np
import pytest

from bqcsim import adversary
from bqcsim.adversary import (
    BobView,
    MalformedTraceError,
    MalformedViewError,
    PresenceTrace,
    TrojanTagLog,
    blindness_candidates,
    eavesdrop_infer_positions,
    reconstruct_secrets,
    trojan_read,
    trojan_tag,
)
from bqcsim.protocol import run_protocol
from bqcsim.quantum import Angle, BellOutcome
from bqcsim.records import Photon, Positions, ProtocolConfig


def presence(m, slots):
    return PresenceTrace(tuple(k in slots for k in range(1, 4 * m + 1)))


def m1_view(outcome, angle_s, bit_s, s=1):
    angles = [Angle(0), Angle(0)]
    bits = [0, 0]
    angles[s - 1], bits[s - 1] = Angle(angle_s), bit_s
    return BobView([1, 2], [BellOutcome(*outcome)], angles, bits, [3])


class TestEavesdrop:
    def test_m1(self):
        assert eavesdrop_infer_positions(presence(1, {2, 3}), 1) == Positions([2], [3])

    def test_m2(self):
        assert eavesdrop_infer_positions(presence(2, {1, 4, 5, 8}), 2) == Positions([1, 4], [5, 8])

    def test_wrong_count(self):
        with pytest.raises(MalformedTraceError):
            eavesdrop_infer_positions(presence(1, {2}), 1)

    def test_wrong_split(self):
        with pytest.raises(MalformedTraceError):
            eavesdrop_infer_positions(presence(1, {1, 2}), 1)

    def test_presence_from_transcript(self):
        run = run_protocol(ProtocolConfig(3, 4))
        trace = adversary.presence_trace(run.transcript)
        assert sum(trace.present) == 6
        assert trace.slots == list(run.secrets.positions.forwarded)


class TestTrojan:
    def test_pass_through(self):
        assert trojan_read(trojan_tag(Photon(7, ("A", 7)), 7)) == 7

    def test_filter_strips(self):
        run = run_protocol(ProtocolConfig(2, 3, "trojan", alice_filter=True))
        assert run.view.side_channel.is_empty()
        assert all(trojan_read(p) is None for p in run.arrivals)

    def test_untagged(self):
        assert trojan_read(Photon(3, ("A", 3))) is None

    def test_tag_does_not_touch_qubit(self):
        p = Photon(2, ("A", 2))
        assert trojan_tag(p, 2).qubit == p.qubit and p.tag is None

    def test_log_infers_positions(self):
        log = TrojanTagLog([1, 4, 6, 7])
        assert adversary.trojan_infer_positions(log, 2) == Positions([1, 4], [6, 7])
        assert adversary.trojan_infer_positions(TrojanTagLog([None] * 4), 2) is None


class TestReconstruct:
    def test_example_outcome_10(self):
        rep = reconstruct_secrets(m1_view((1, 0), 2, 1), Positions([1], [3]))
        assert rep.recovered_thetas == [Angle(2)]
        assert rep.recovered_bits == [1]
        assert rep.recovered_resource == [Angle(6)]
        assert rep.success is None

    def test_example_outcome_01(self):
        rep = reconstruct_secrets(m1_view((0, 1), 6, 0, s=2), Positions([2], [3]))
        assert rep.recovered_thetas == [Angle(6)]
        assert rep.recovered_resource == [Angle(6)]

    def test_malformed_view(self):
        with pytest.raises(MalformedViewError):
            reconstruct_secrets(m1_view((0, 0), 0, 0), Positions([1, 2], [5, 6]))

    @pytest.mark.parametrize("model", ["eavesdrop", "trojan"])
    @pytest.mark.parametrize("m", [1, 2, 3, 4, 7])
    def test_attacks_succeed(self, model, m):
        for seed in range(40):
            run = run_protocol(ProtocolConfig(m, seed, model))
            assert run.attack.success
            assert run.attack.recovered_resource == [q.alice_expected for q in run.resource.qubits]

    def test_wrong_positions_are_judged_failure(self):
        run = run_protocol(ProtocolConfig(2, 0))
        truth = run.secrets.positions
        others = [s for s in adversary.candidate_s_sets(2) if s != truth.s]
        rep = reconstruct_secrets(run.view, Positions(others[0], truth.t))
        assert not adversary.judge(rep, run.secrets).success


class TestBlindness:
    @pytest.mark.parametrize("m,expected", [(1, 2), (2, 6), (3, 20), (4, 70)])
    def test_honest_counts(self, m, expected):
        view = run_protocol(ProtocolConfig(m, 9)).view
        assert blindness_candidates(view, m) == expected == comb(2 * m, m)

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_after_attacks(self, m):
        for model in ("eavesdrop", "trojan"):
            run = run_protocol(ProtocolConfig(m, 9, model))
            assert blindness_candidates(run.view, m) == 1
            assert run.attack.candidate_count == 1

    def test_filtered_trojan_learns_nothing(self):
        run = run_protocol(ProtocolConfig(3, 9, "trojan", alice_filter=True))
        assert run.attack.candidate_count == 20

    def test_refuses_large_m(self):
        view = run_protocol(ProtocolConfig(5, 1)).view
        with pytest.raises(ValueError):
            blindness_candidates(view, 5)

    def test_entropy(self):
        assert adversary.entropy_bits(6) == pytest.approx(math.log2(6))
        assert adversary.entropy_bits(1) == 0.0

    def test_inconsistent_side_channel(self):
        view = run_protocol(ProtocolConfig(2, 9)).view
        view.side_channel = presence(2, {1, 2, 3, 4})
        assert blindness_candidates(view, 2) == 0


class TestPassivity:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_eavesdrop_transcript_identical(self, m):
        for seed in range(30):
            honest = run_protocol(ProtocolConfig(m, seed))
            spied = run_protocol(ProtocolConfig(m, seed, "eavesdrop"))
            assert honest.transcript.to_jsonl() == spied.transcript.to_jsonl()

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_trojan_classical_and_fidelities_identical(self, m):
        for seed in range(30):
            honest = run_protocol(ProtocolConfig(m, seed))
            tagged = run_protocol(ProtocolConfig(m, seed, "trojan"))
            assert honest.view.angle_list == tagged.view.angle_list
            assert honest.view.result_bits == tagged.view.result_bits
            assert honest.view.swap_outcomes == tagged.view.swap_outcomes
            assert honest.fidelities() == tagged.fidelities()


def test_filter_defense_is_uniform_guessing():
    hits = np.mean([
        run_protocol(ProtocolConfig(2, seed, "trojan", alice_filter=True)).attack.success
        for seed in range(600)
    ])
    assert hits == pytest.approx(1 / 6, abs=0.05)


def test_view_from_transcript_matches_live_view():
    run = run_protocol(ProtocolConfig(3, 2))
    view = adversary.view_from_transcript(run.transcript)
    assert view == run.view
