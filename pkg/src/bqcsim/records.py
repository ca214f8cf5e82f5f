"""Configuration and the records each party ends a run with."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Hashable, Optional

from .quantum import Angle, BellOutcome, MeasuredBit, PadKey

MAX_M = 8


class ServerModel(str, enum.Enum):
    HONEST = "honest"
    EAVESDROP = "eavesdrop"
    TROJAN = "trojan"


@dataclass(frozen=True)
class ProtocolConfig:
    m: int
    seed: int
    server_model: ServerModel = ServerModel.HONEST
    alice_filter: bool = False

    def __post_init__(self):
        if not isinstance(self.m, int) or not 1 <= self.m <= MAX_M:
            raise ValueError(f"m must be an integer in 1..{MAX_M}, got {self.m!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        object.__setattr__(self, "server_model", ServerModel(self.server_model))


@dataclass(frozen=True)
class Positions:
    """Slots Alice forwards: ``s`` from ``[1, 2m]`` and ``t`` from ``[2m+1, 4m]``."""

    s: tuple[int, ...]
    t: tuple[int, ...]

    def __post_init__(self):
        s, t = tuple(int(v) for v in self.s), tuple(int(v) for v in self.t)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        m = len(s)
        if m < 1 or len(t) != m:
            raise ValueError(f"s and t must both have m >= 1 entries, got {s}, {t}")
        if any(a >= b for a, b in zip(s, s[1:])) or any(a >= b for a, b in zip(t, t[1:])):
            raise ValueError(f"positions must be strictly increasing: {s}, {t}")
        if s[0] < 1 or s[-1] > 2 * m:
            raise ValueError(f"s must lie in [1, {2 * m}], got {s}")
        if t[0] < 2 * m + 1 or t[-1] > 4 * m:
            raise ValueError(f"t must lie in [{2 * m + 1}, {4 * m}], got {t}")

    @property
    def m(self) -> int:
        return len(self.s)

    @property
    def forwarded(self) -> tuple[int, ...]:
        return self.s + self.t


@dataclass
class Photon:
    """A travelling A-side qubit.

    ``id`` is the slot index ``k``; Bob never gets to see it through the
    protocol. ``tag`` is the Trojan marker, if one was attached and survived.
    """

    id: int
    qubit: Hashable
    tag: Optional[int] = None


@dataclass
class AliceSecrets:
    positions: Positions
    thetas: list[Angle]
    pads: list[PadKey]
    kept_bits: list[MeasuredBit] = field(default_factory=list)
    swap_outcomes: list[BellOutcome] = field(default_factory=list)

    @property
    def secret_thetas(self) -> list[Angle]:
        """``theta_{s_i}`` for i = 1..m."""
        return [self.thetas[s - 1] for s in self.positions.s]

    @property
    def resource_angles(self) -> list[Angle]:
        return [th + 4 * b for th, b in zip(self.secret_thetas, self.kept_bits)]


@dataclass(frozen=True)
class ResourceQubit:
    index: int          # i, Bob's label B_i after Step 7
    qubit: Hashable     # simulator label of the underlying B_{t_i}
    alice_expected: Angle


@dataclass
class ResourceRecord:
    qubits: list[ResourceQubit]

    def __len__(self):
        return len(self.qubits)
