"""
Server-side attacks and blindness accounting.

Two passive attacks recover Alice's secret positions. The first watches
which slots carry a photon on the Alice to Bob edge, and the second tags
photons on their way to Alice and reads the tags back when they arrive.
With the positions known, Bob can invert the angle pad and read off every
secret angle and kept bit. :func:`blindness_candidates` counts how many
secret position sets stay consistent with what Bob saw, which is the
residual uncertainty the attacks remove.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import pads
from .quantum import Angle, BellOutcome, MeasuredBit, PadKey
from .records import AliceSecrets, Photon, Positions, ServerModel
from .transcript import Edge, Kind, Transcript, TraceFormatError

MAX_ENUM_M = 4

CANDIDATE_METRIC = "possibilistic count of secret s-sets consistent with the server view"


class MalformedTraceError(ValueError):
    pass


class MalformedViewError(ValueError):
    pass


@dataclass(frozen=True)
class PresenceTrace:
    """``present[k-1]`` is True iff a photon crossed A->B in slot ``k``."""

    present: tuple[bool, ...]

    @property
    def slots(self) -> list[int]:
        return [k for k, p in enumerate(self.present, 1) if p]


@dataclass
class TrojanTagLog:
    """One entry per forwarded photon, in arrival order: the id read from its
    tag, or None when no tag came back."""

    entries: list[Optional[int]] = field(default_factory=list)

    @property
    def recovered_ids(self) -> list[int]:
        return [k for k in self.entries if k is not None]

    def is_empty(self) -> bool:
        return not self.recovered_ids


SideChannel = Union[PresenceTrace, TrojanTagLog]


@dataclass
class BobView:
    arrival_order: list[int]
    swap_outcomes: list[BellOutcome]
    angle_list: list[Angle]
    result_bits: list[MeasuredBit]
    t_list: list[int]
    side_channel: Optional[SideChannel] = None

    @property
    def m(self) -> int:
        return len(self.t_list)


@dataclass
class AttackReport:
    model: str
    m: int
    seed: int
    recovered_positions: Positions
    recovered_thetas: list[Angle]
    recovered_bits: list[MeasuredBit]
    recovered_resource: list[Angle]
    success: Optional[bool] = None
    candidate_count: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "m": self.m,
            "seed": self.seed,
            "recovered_positions": {
                "s": list(self.recovered_positions.s),
                "t": list(self.recovered_positions.t),
            },
            "recovered_thetas_eighths": [a.eighths for a in self.recovered_thetas],
            "recovered_bits": list(self.recovered_bits),
            "recovered_resource_eighths": [a.eighths for a in self.recovered_resource],
            "success": self.success,
            "candidate_count": self.candidate_count,
        }


# -- timing side channel ---------------------------------------------------

def presence_trace(transcript: Transcript) -> PresenceTrace:
    """Per-slot photon presence on the A->B quantum edge.

    Only event kinds are read; payloads are ignored.
    """
    events = transcript.select(edge=Edge.A_TO_B_QUANTUM)
    slots = [e.slot for e in events]
    if slots != list(range(1, len(slots) + 1)):
        raise MalformedTraceError(f"A->B quantum slots are not 1..n: {slots}")
    return PresenceTrace(tuple(e.kind == Kind.PHOTON for e in events))


def eavesdrop_infer_positions(trace: PresenceTrace, m: int) -> Positions:
    if len(trace.present) != 4 * m:
        raise MalformedTraceError(f"expected {4 * m} slots, trace has {len(trace.present)}")
    slots = trace.slots
    if len(slots) != 2 * m:
        raise MalformedTraceError(f"expected {2 * m} photons, saw {len(slots)}")
    try:
        return Positions([k for k in slots if k <= 2 * m], [k for k in slots if k > 2 * m])
    except ValueError as exc:
        raise MalformedTraceError(str(exc)) from None


# -- Trojan horse ------------------------------------------------------------

def trojan_tag(photon: Photon, k: int) -> Photon:
    """Attach a marker carrying ``k``. The qubit itself is untouched."""
    return dataclasses.replace(photon, tag=int(k))


def trojan_read(photon: Photon) -> Optional[int]:
    return photon.tag


def trojan_infer_positions(log: TrojanTagLog, m: int) -> Optional[Positions]:
    """Positions from read-back tags, or None if nothing came back."""
    ids = log.recovered_ids
    if not ids:
        return None
    if len(ids) != 2 * m:
        raise MalformedTraceError(f"expected {2 * m} tags, read {len(ids)}")
    ids = sorted(ids)
    try:
        return Positions([k for k in ids if k <= 2 * m], [k for k in ids if k > 2 * m])
    except ValueError as exc:
        raise MalformedTraceError(str(exc)) from None


def guess_positions(view: BobView, rng: np.random.Generator) -> Positions:
    """Uniform guess of ``s``; ``t`` is public after Step 7."""
    m = view.m
    s = np.sort(rng.choice(np.arange(1, 2 * m + 1), size=m, replace=False))
    return Positions(s.tolist(), view.t_list)


# -- secret reconstruction ---------------------------------------------------

def _check_view(view: BobView, m: int) -> None:
    if len(view.swap_outcomes) != m:
        raise MalformedViewError(f"{len(view.swap_outcomes)} swap outcomes for m={m}")
    if len(view.angle_list) != 2 * m or len(view.result_bits) != 2 * m:
        raise MalformedViewError(f"angle and result lists must have {2 * m} entries")
    if len(view.t_list) != m:
        raise MalformedViewError(f"t list has {len(view.t_list)} entries for m={m}")


def reconstruct_secrets(
    view: BobView,
    positions: Positions,
    model: Union[str, ServerModel] = "",
    seed: int = 0,
) -> AttackReport:
    """Undo the angle pad at the recovered positions.

    ``success`` is left unset; only :func:`judge` may fill it in.
    """
    m = positions.m
    _check_view(view, m)
    thetas, bits, resource = [], [], []
    for i, s in enumerate(positions.s):
        pad = pads.byproduct_params(view.swap_outcomes[i])
        theta = pads.decode_angle(view.angle_list[s - 1], pad)
        b = view.result_bits[s - 1]
        thetas.append(theta)
        bits.append(b)
        resource.append(theta + 4 * b)
    return AttackReport(
        model=ServerModel(model).value if model else "",
        m=m,
        seed=seed,
        recovered_positions=positions,
        recovered_thetas=thetas,
        recovered_bits=bits,
        recovered_resource=resource,
    )


def judge(report: AttackReport, truth: AliceSecrets) -> AttackReport:
    """Harness-side scoring against Alice's actual record."""
    success = (
        report.recovered_positions == truth.positions
        and report.recovered_thetas == truth.secret_thetas
        and report.recovered_bits == truth.kept_bits
        and report.recovered_resource == truth.resource_angles
    )
    return dataclasses.replace(report, success=bool(success))


# -- blindness accounting ----------------------------------------------------

def candidate_s_sets(m: int) -> list[tuple[int, ...]]:
    if m > MAX_ENUM_M:
        raise ValueError(f"enumeration limited to m <= {MAX_ENUM_M}, got m={m}")
    return list(itertools.combinations(range(1, 2 * m + 1), m))


# all encoded angles some (theta, pad) can produce
_REACHABLE = {
    pads.encode_angle(theta, pad) for theta in Angle.all() for pad in PadKey.all()
}


def _consistent(s: Sequence[int], view: BobView) -> bool:
    """Can some choice of Alice's secrets with this ``s`` produce ``view``?"""
    m = view.m
    try:
        positions = Positions(s, view.t_list)
    except ValueError:
        return False
    if len(view.arrival_order) != 2 * m:
        return False
    # every Bell outcome has probability 1/4 for any s
    if len(view.swap_outcomes) != m:
        return False
    if len(view.angle_list) != 2 * m or not all(a in _REACHABLE for a in view.angle_list):
        return False
    # partner of every measured B_k is maximally mixed, so both bits occur
    if len(view.result_bits) != 2 * m or any(b not in (0, 1) for b in view.result_bits):
        return False
    sc = view.side_channel
    if isinstance(sc, PresenceTrace):
        if sc.slots != list(positions.forwarded):
            return False
    elif isinstance(sc, TrojanTagLog):
        for tag, k in zip(sc.entries, positions.forwarded):
            if tag is not None and tag != k:
                return False
    return True


def blindness_candidates(view: BobView, m: Optional[int] = None) -> int:
    """Number of secret ``s`` sets consistent with Bob's view.

    Exhaustive over all ``C(2m, m)`` sets; refuses ``m > 4``.
    """
    m = view.m if m is None else m
    if view.m != m:
        raise MalformedViewError(f"view is for m={view.m}, asked for m={m}")
    return sum(_consistent(s, view) for s in candidate_s_sets(m))


def entropy_bits(candidate_count: int) -> float:
    return math.log2(candidate_count) if candidate_count > 0 else float("nan")


def view_from_transcript(transcript: Transcript) -> BobView:
    """Bob's classical view, rebuilt from an attacker-visible trace."""
    try:
        arrivals = transcript.select(Edge.A_TO_B_QUANTUM, Kind.PHOTON)
        outcomes = sorted(
            transcript.select(Edge.B_TO_A_CLASSICAL, Kind.BELL_OUTCOME),
            key=lambda e: e.payload["index"],
        )
        (angles,) = transcript.select(Edge.A_TO_B_CLASSICAL, Kind.ANGLE_LIST)
        (results,) = transcript.select(Edge.B_TO_A_CLASSICAL, Kind.RESULT_BITS)
        (tlist,) = transcript.select(Edge.A_TO_B_CLASSICAL, Kind.T_LIST)
        return BobView(
            arrival_order=list(range(1, len(arrivals) + 1)),
            swap_outcomes=[BellOutcome(e.payload["z"], e.payload["x"]) for e in outcomes],
            angle_list=[Angle(a) for a in angles.payload["eighths"]],
            result_bits=[int(b) for b in results.payload["bits"]],
            t_list=[int(t) for t in tlist.payload["t"]],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceFormatError(f"trace does not describe a completed run: {exc!r}") from None
