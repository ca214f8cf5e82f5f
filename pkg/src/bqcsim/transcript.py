"""
Ordered event log of a protocol run, with JSONL (de)serialization.

Each line of a trace is ``{"slot": ..., "edge": ..., "kind": ..., "payload": ...}``.
The default trace is what an observer on the wire could see: quantum events
carry no amplitudes and no slot identities beyond the slot number itself.
Ground-truth photon ids are kept aside and only written to the debug trace.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Union


class TraceFormatError(ValueError):
    """A trace file does not follow the event schema."""


class Edge(str, enum.Enum):
    C_TO_A_QUANTUM = "C->A quantum"
    A_TO_B_QUANTUM = "A->B quantum"
    A_TO_B_CLASSICAL = "A->B classical"
    B_TO_A_CLASSICAL = "B->A classical"


class Kind(str, enum.Enum):
    PHOTON = "photon"
    ABSENCE = "absence"
    BELL_OUTCOME = "bell_outcome"
    ANGLE_LIST = "angle_list"
    RESULT_BITS = "result_bits"
    T_LIST = "t_list"


QUANTUM_EDGES = (Edge.C_TO_A_QUANTUM, Edge.A_TO_B_QUANTUM)
FIELDS = ("slot", "edge", "kind", "payload")


@dataclass(frozen=True)
class Event:
    slot: int
    edge: Edge
    kind: Kind
    payload: dict = field(default_factory=dict)
    hidden: dict = field(default_factory=dict, compare=False)

    def as_dict(self, debug: bool = False) -> dict:
        payload = dict(self.payload)
        if debug:
            payload.update(self.hidden)
        return {"slot": self.slot, "edge": self.edge.value, "kind": self.kind.value, "payload": payload}


class Transcript:
    def __init__(self, events=None):
        self.events: list[Event] = []
        for ev in events or ():
            self._append(ev)

    def _append(self, ev: Event) -> None:
        if self.events and ev.slot < self.events[-1].slot:
            raise ValueError(f"slot {ev.slot} after slot {self.events[-1].slot}")
        if ev.edge in QUANTUM_EDGES:
            if ev.kind not in (Kind.PHOTON, Kind.ABSENCE):
                raise ValueError(f"{ev.kind.value} event on quantum edge {ev.edge.value}")
            if any(e.slot == ev.slot and e.edge == ev.edge for e in self.events[-4:]):
                raise ValueError(f"second quantum event on {ev.edge.value} in slot {ev.slot}")
        self.events.append(ev)

    def add(self, slot: int, edge: Edge, kind: Kind, payload=None, hidden=None) -> Event:
        ev = Event(slot, Edge(edge), Kind(kind), dict(payload or {}), dict(hidden or {}))
        self._append(ev)
        return ev

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def select(self, edge: Optional[Edge] = None, kind: Optional[Kind] = None) -> list[Event]:
        return [
            e for e in self.events
            if (edge is None or e.edge == edge) and (kind is None or e.kind == kind)
        ]

    def to_jsonl(self, debug: bool = False) -> str:
        return "".join(json.dumps(e.as_dict(debug)) + "\n" for e in self.events)

    def write_jsonl(self, path: Union[str, Path], debug: bool = False) -> None:
        Path(path).write_text(self.to_jsonl(debug), encoding="utf-8")

    @classmethod
    def from_jsonl(cls, text: str) -> Transcript:
        events = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TraceFormatError(f"line {lineno}: not JSON ({exc.msg})") from None
            if not isinstance(row, dict) or tuple(sorted(row)) != tuple(sorted(FIELDS)):
                raise TraceFormatError(f"line {lineno}: expected fields {FIELDS}")
            try:
                slot = row["slot"]
                if not isinstance(slot, int) or isinstance(slot, bool):
                    raise ValueError(f"slot must be an integer, got {slot!r}")
                if not isinstance(row["payload"], dict):
                    raise ValueError("payload must be an object")
                events.append(Event(slot, Edge(row["edge"]), Kind(row["kind"]), row["payload"]))
            except ValueError as exc:
                raise TraceFormatError(f"line {lineno}: {exc}") from None
        try:
            return cls(events)
        except ValueError as exc:
            raise TraceFormatError(str(exc)) from None

    @classmethod
    def read_jsonl(cls, path: Union[str, Path]) -> Transcript:
        return cls.from_jsonl(Path(path).read_text(encoding="utf-8"))
