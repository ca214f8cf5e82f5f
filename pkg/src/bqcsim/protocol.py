"""
Single-server resource preparation, run slot by slot.

Charlie hands out ``4m`` Bell pairs. Alice sees her halves one per slot and
must forward or discard each immediately. Bob swaps entanglement between
forwarded pairs, measures his first ``2m`` qubits at the padded angles Alice
announces, and ends up holding ``m`` qubits in states only Alice can name.

Every photon slot and classical message is appended to a :class:`Transcript`.
Randomness comes from one master seed split into independent streams per
party and purpose, so an attacker's extra draws never shift anyone else's.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import adversary, pads
from .quantum import (
    Angle,
    BellOutcome,
    PadKey,
    QubitPool,
    angle_state,
    fidelity,
    make_bell_pair,
)
from .records import (
    AliceSecrets,
    Photon,
    Positions,
    ProtocolConfig,
    ResourceQubit,
    ResourceRecord,
    ServerModel,
)
from .transcript import Edge, Kind, Transcript

log = logging.getLogger(__name__)

FIDELITY_TOL = 1e-9

# spawn keys of the per-purpose random streams
STREAMS = {
    "alice_select": 0,
    "alice_theta": 1,
    "alice_dummy": 2,
    "alice_discard": 3,
    "swap": 4,
    "rotated": 5,
    "adversary": 6,
}


def streams(seed: int) -> dict[str, np.random.Generator]:
    return {
        name: np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(key,)))
        for name, key in STREAMS.items()
    }


def alice_select_positions(m: int, rng: np.random.Generator) -> Positions:
    """Uniform m-subsets of ``[1, 2m]`` and ``[2m+1, 4m]``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    s = np.sort(rng.choice(2 * m, size=m, replace=False)) + 1
    t = np.sort(rng.choice(2 * m, size=m, replace=False)) + 2 * m + 1
    return Positions(s.tolist(), t.tolist())


def b_label(k: int) -> tuple[str, int]:
    return ("B", k)


def a_label(k: int) -> tuple[str, int]:
    return ("A", k)


@dataclass
class ProtocolRun:
    config: ProtocolConfig
    transcript: Transcript
    secrets: AliceSecrets
    resource: ResourceRecord
    attack: Optional[adversary.AttackReport]
    view: adversary.BobView
    qubits: QubitPool
    arrivals: list[Photon]

    def fidelities(self) -> list[float]:
        return verify_resource(self.resource, self.qubits)


def run_protocol(config: ProtocolConfig) -> ProtocolRun:
    m = config.m
    rng = streams(config.seed)
    trojan = config.server_model is ServerModel.TROJAN
    pool = QubitPool()
    transcript = Transcript()

    # Alice's private choices; drawn up front from their own streams
    positions = alice_select_positions(m, rng["alice_select"])
    thetas = [Angle(int(v)) for v in rng["alice_theta"].integers(0, 8, size=2 * m)]
    pad_list = [PadKey(int(z), int(x)) for z, x in rng["alice_dummy"].integers(0, 2, size=(2 * m, 2))]
    forward = set(positions.forwarded)

    # Steps 1-2: one photon per slot; Alice forwards or discards on the spot
    arrivals: list[Photon] = []
    tags = adversary.TrojanTagLog()
    for k in range(1, 4 * m + 1):
        pool.add(make_bell_pair(0, 0, labels=(b_label(k), a_label(k))))
        photon = Photon(id=k, qubit=a_label(k))
        if trojan:
            photon = adversary.trojan_tag(photon, k)
        transcript.add(k, Edge.C_TO_A_QUANTUM, Kind.PHOTON, hidden={"id": k})
        if config.alice_filter:
            photon.tag = None
        if k in forward:
            arrivals.append(photon)
            transcript.add(k, Edge.A_TO_B_QUANTUM, Kind.PHOTON,
                           {"arrival": len(arrivals)}, hidden={"id": k})
            if trojan:
                tags.entries.append(adversary.trojan_read(photon))
        else:
            pool.discard(photon.qubit, rng["alice_discard"])
            transcript.add(k, Edge.A_TO_B_QUANTUM, Kind.ABSENCE)

    # Step 3: arrivals j and m+j form a pair (Alice forwards in slot order)
    slot = 4 * m
    outcomes: list[BellOutcome] = []
    for j in range(m):
        pair = (arrivals[j].qubit, arrivals[m + j].qubit)
        outcome = pool.bell_measure(pair, rng["swap"])
        outcomes.append(outcome)
        slot += 1
        transcript.add(slot, Edge.B_TO_A_CLASSICAL, Kind.BELL_OUTCOME,
                       {"index": j + 1, "z": outcome.z, "x": outcome.x})

    # Steps 4-5: pads at s-positions absorb the swap byproduct
    for i, s in enumerate(positions.s):
        pad_list[s - 1] = pads.byproduct_params(outcomes[i])
    encoded = [pads.encode_angle(th, pad) for th, pad in zip(thetas, pad_list)]
    slot += 1
    transcript.add(slot, Edge.A_TO_B_CLASSICAL, Kind.ANGLE_LIST,
                   {"eighths": [a.eighths for a in encoded]})

    # Step 6
    bits = [pool.measure_rotated(b_label(k), encoded[k - 1], rng["rotated"])
            for k in range(1, 2 * m + 1)]
    slot += 1
    transcript.add(slot, Edge.B_TO_A_CLASSICAL, Kind.RESULT_BITS, {"bits": bits})

    # Step 7
    kept = [bits[s - 1] for s in positions.s]
    slot += 1
    transcript.add(slot, Edge.A_TO_B_CLASSICAL, Kind.T_LIST, {"t": list(positions.t)})

    secrets = AliceSecrets(positions, thetas, pad_list, kept, outcomes)
    resource = ResourceRecord([
        ResourceQubit(i + 1, b_label(t), secrets.thetas[s - 1] + 4 * b)
        for i, (s, t, b) in enumerate(zip(positions.s, positions.t, kept))
    ])
    view = adversary.BobView(
        arrival_order=list(range(1, len(arrivals) + 1)),
        swap_outcomes=list(outcomes),
        angle_list=list(encoded),
        result_bits=list(bits),
        t_list=list(positions.t),
    )

    attack = None
    if config.server_model is ServerModel.EAVESDROP:
        view.side_channel = adversary.presence_trace(transcript)
        guess = adversary.eavesdrop_infer_positions(view.side_channel, m)
        attack = _attack(config, view, guess, secrets)
    elif trojan:
        view.side_channel = tags
        guess = adversary.trojan_infer_positions(tags, m)
        if guess is None:
            guess = adversary.guess_positions(view, rng["adversary"])
        attack = _attack(config, view, guess, secrets)

    log.debug("run m=%d seed=%d model=%s done", m, config.seed, config.server_model.value)
    return ProtocolRun(config, transcript, secrets, resource, attack, view, pool, arrivals)


def _attack(config, view, guess, secrets) -> adversary.AttackReport:
    report = adversary.reconstruct_secrets(view, guess, config.server_model, config.seed)
    report = adversary.judge(report, secrets)
    if config.m <= adversary.MAX_ENUM_M:
        report.candidate_count = adversary.blindness_candidates(view, config.m)
    return report


def verify_resource(record: ResourceRecord, bob_registers: QubitPool) -> list[float]:
    """Fidelity of each of Bob's resource qubits to the state Alice predicts."""
    out = []
    for q in record.qubits:
        state = bob_registers.register(q.qubit)
        if state.qubit_count != 1:
            raise ValueError(f"resource qubit {q.qubit} is still entangled: {state.labels}")
        out.append(fidelity(state, angle_state(q.alice_expected, q.qubit)))
    return out
