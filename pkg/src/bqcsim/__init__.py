"""Simulator of a single-server blind quantum computation protocol and two
passive server attacks against it."""

from .adversary import (
    AttackReport,
    BobView,
    PresenceTrace,
    TrojanTagLog,
    blindness_candidates,
    eavesdrop_infer_positions,
    reconstruct_secrets,
    trojan_read,
    trojan_tag,
)
from .pads import byproduct_params, decode_angle, encode_angle
from .protocol import alice_select_positions, run_protocol, verify_resource
from .quantum import (
    Angle,
    BellOutcome,
    PadKey,
    StateVector,
    angle_state,
    bell_measure,
    fidelity,
    make_bell_pair,
    measure_rotated,
)
from .records import AliceSecrets, Positions, ProtocolConfig, ServerModel
from .transcript import Transcript

__version__ = "0.1.0"

__all__ = [
    "AliceSecrets", "Angle", "AttackReport", "BellOutcome", "BobView", "PadKey",
    "Positions", "PresenceTrace", "ProtocolConfig", "ServerModel", "StateVector",
    "Transcript", "TrojanTagLog", "alice_select_positions", "angle_state",
    "bell_measure", "blindness_candidates", "byproduct_params", "decode_angle",
    "eavesdrop_infer_positions", "encode_angle", "fidelity", "make_bell_pair",
    "measure_rotated", "reconstruct_secrets", "run_protocol", "trojan_read",
    "trojan_tag", "verify_resource",
]
