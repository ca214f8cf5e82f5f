"""
Exact statevector simulation on registers of at most four qubits.

Only the handful of operations the protocol needs are provided: Bell-pair
preparation, Bell-basis measurement, measurement in the rotated basis
``{(|0> +/- e^{i theta}|1>)/sqrt(2)}`` and computational-basis measurement
(used to model a discarded photon). All angles live on the pi/4 lattice and
are stored as integers modulo 8.

Qubit ordering follows the usual big-endian convention: the first label in
``StateVector.labels`` is the most significant bit of the amplitude index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np

MAX_QUBITS = 4
NORM_TOL = 1e-12

_R = np.sqrt(0.5)
# e^{i k pi/4}, written out so that multiples of pi/2 are exact
PHASES = np.array(
    [1, _R + 1j * _R, 1j, -_R + 1j * _R, -1, -_R - 1j * _R, -1j, _R - 1j * _R],
    dtype=complex,
)

# Probabilities below this are treated as exactly zero when sampling.
_ZERO_PROB = 1e-15

MeasuredBit = int


def _bit(value, name: str) -> int:
    if value not in (0, 1):
        raise ValueError(f"{name} must be 0 or 1, got {value!r}")
    return int(value)


@dataclass(frozen=True, order=True)
class Angle:
    """A multiple of pi/4, stored as ``eighths`` in ``{0, ..., 7}``.

    ``Angle(k)`` represents ``k * pi / 4``. Integers are reduced mod 8 on
    construction, so ``Angle(-1) == Angle(7)``.
    """

    eighths: int

    def __post_init__(self):
        object.__setattr__(self, "eighths", int(self.eighths) % 8)

    def __add__(self, other):
        if isinstance(other, Angle):
            other = other.eighths
        return Angle(self.eighths + int(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Angle):
            other = other.eighths
        return Angle(self.eighths - int(other))

    def __neg__(self):
        return Angle(-self.eighths)

    def __int__(self):
        return self.eighths

    @property
    def radians(self) -> float:
        return self.eighths * np.pi / 4

    @property
    def phase(self) -> complex:
        """``e^{i * angle}``."""
        return complex(PHASES[self.eighths])

    @classmethod
    def all(cls) -> list[Angle]:
        return [cls(k) for k in range(8)]


@dataclass(frozen=True)
class BellOutcome:
    """Result ``(z', x')`` of a Bell-basis measurement."""

    z: int
    x: int

    def __post_init__(self):
        object.__setattr__(self, "z", _bit(self.z, "z"))
        object.__setattr__(self, "x", _bit(self.x, "x"))

    def __iter__(self):
        return iter((self.z, self.x))

    @property
    def index(self) -> int:
        return 2 * self.z + self.x

    @classmethod
    def all(cls) -> list[BellOutcome]:
        return [cls(z, x) for z in (0, 1) for x in (0, 1)]


@dataclass(frozen=True)
class PadKey:
    """One-time-pad bits ``(z, x)`` hiding a measurement angle."""

    z: int
    x: int

    def __post_init__(self):
        object.__setattr__(self, "z", _bit(self.z, "z"))
        object.__setattr__(self, "x", _bit(self.x, "x"))

    def __iter__(self):
        return iter((self.z, self.x))

    @classmethod
    def all(cls) -> list[PadKey]:
        return [cls(z, x) for z in (0, 1) for x in (0, 1)]


class StateVector:
    """Normalized pure state of up to four labelled qubits.

    Parameters
    ----------
    amplitudes : array_like
        ``2**n`` complex amplitudes. They are normalized on construction.
    labels : sequence of hashable
        External identity of each qubit, most significant first.
    """

    def __init__(self, amplitudes, labels: Sequence[Hashable]):
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate qubit labels: {labels}")
        if len(labels) > MAX_QUBITS:
            raise ValueError(f"register limited to {MAX_QUBITS} qubits, got {len(labels)}")
        if amps.size != 2 ** len(labels):
            raise ValueError(
                f"{amps.size} amplitudes do not match {len(labels)} qubits"
            )
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("zero vector is not a state")
        self.amplitudes = amps / norm
        self.labels = labels

    @property
    def qubit_count(self) -> int:
        return len(self.labels)

    def index_of(self, label: Hashable) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"qubit {label!r} not in register {self.labels}") from None

    def __contains__(self, label) -> bool:
        return label in self.labels

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> StateVector:
        out = StateVector.__new__(StateVector)
        out.amplitudes = self.amplitudes.copy()
        out.labels = self.labels
        return out

    def relabel(self, mapping: dict) -> None:
        self.labels = tuple(mapping.get(label, label) for label in self.labels)

    def permuted(self, labels: Sequence[Hashable]) -> np.ndarray:
        """Amplitudes reordered so that qubits follow ``labels``."""
        if len(labels) != len(self.labels) or set(labels) != set(self.labels):
            raise ValueError(f"label sets differ: {tuple(labels)} vs {self.labels}")
        n = self.qubit_count
        if n == 0:
            return self.amplitudes.copy()
        axes = [self.index_of(label) for label in labels]
        psi = self.amplitudes.reshape((2,) * n).transpose(axes)
        return psi.reshape(-1)

    def _split(self, measured: Sequence[Hashable]) -> tuple[np.ndarray, tuple]:
        """Matrix view with the measured qubits as row index."""
        n = self.qubit_count
        axes = [self.index_of(label) for label in measured]
        if len(set(axes)) != len(axes):
            raise ValueError(f"repeated qubit in {measured}")
        psi = self.amplitudes.reshape((2,) * n)
        psi = np.moveaxis(psi, axes, range(len(axes)))
        rest = tuple(label for label in self.labels if label not in measured)
        return psi.reshape(2 ** len(axes), -1), rest

    def _collapse(self, branch: np.ndarray, rest: tuple) -> None:
        self.amplitudes = branch / np.linalg.norm(branch)
        self.labels = rest
        assert abs(self.norm() - 1.0) < NORM_TOL

    def __repr__(self):
        return f"StateVector(labels={self.labels}, amplitudes={np.round(self.amplitudes, 6)})"


def _bell_vector(z: int, x: int) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[x] = _R
    v[2 + (x ^ 1)] = -_R if z else _R
    return v


# rows indexed by 2*z + x
BELL_BASIS = np.array([_bell_vector(z, x) for z in (0, 1) for x in (0, 1)])


def make_bell_pair(z: int, x: int, labels: Sequence[Hashable] = ("B", "A")) -> StateVector:
    """Bell state ``(|0,x> + (-1)^z |1,x^1>)/sqrt(2)``.

    The first label is the B-side qubit and the second the A-side qubit.
    """
    z, x = _bit(z, "z"), _bit(x, "x")
    return StateVector(_bell_vector(z, x), labels)


def angle_state(angle: Angle | int, label: Hashable = "q") -> StateVector:
    """Single-qubit state ``(|0> + e^{i angle}|1>)/sqrt(2)``."""
    a = Angle(int(angle))
    return StateVector([_R, _R * PHASES[a.eighths]], (label,))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Joint register ``a (x) b``; labels are concatenated."""
    if set(a.labels) & set(b.labels):
        raise ValueError(f"registers share qubits: {set(a.labels) & set(b.labels)}")
    return StateVector(np.kron(a.amplitudes, b.amplitudes), a.labels + b.labels)


def _sample(probs: np.ndarray, rng: Optional[np.random.Generator], force: Optional[int]) -> int:
    probs = np.where(probs < _ZERO_PROB, 0.0, probs)
    probs = probs / probs.sum()
    if force is not None:
        if probs[force] == 0.0:
            raise ValueError(f"post-selected outcome {force} has zero probability")
        return force
    if rng is None:
        raise ValueError("a random generator is required unless the outcome is forced")
    return int(rng.choice(len(probs), p=probs))


def bell_measure(
    state: StateVector,
    pair: tuple[Hashable, Hashable],
    rng: Optional[np.random.Generator] = None,
    force: Optional[BellOutcome] = None,
) -> BellOutcome:
    """Measure two qubits of ``state`` in the Bell basis.

    The register is collapsed in place and the two measured qubits are
    removed from it. ``force`` post-selects a given outcome instead of
    sampling, which is how the exhaustive checks enumerate branches.
    """
    if pair[0] == pair[1]:
        raise ValueError("Bell measurement needs two distinct qubits")
    psi, rest = state._split(pair)
    branches = BELL_BASIS.conj() @ psi
    probs = np.sum(np.abs(branches) ** 2, axis=1)
    k = _sample(probs, rng, None if force is None else force.index)
    state._collapse(branches[k], rest)
    return BellOutcome(k >> 1, k & 1)


def rotated_basis(angle: Angle | int) -> np.ndarray:
    """Rows ``|b_angle> = (|0> + (-1)^b e^{i angle}|1>)/sqrt(2)`` for b = 0, 1."""
    p = PHASES[Angle(int(angle)).eighths]
    return np.array([[_R, _R * p], [_R, -_R * p]])


def measure_rotated(
    state: StateVector,
    label: Hashable,
    angle: Angle | int,
    rng: Optional[np.random.Generator] = None,
    force: Optional[int] = None,
) -> MeasuredBit:
    """Measure one qubit in the basis ``{|0_angle>, |1_angle>}`` and remove it."""
    psi, rest = state._split((label,))
    branches = rotated_basis(angle).conj() @ psi
    probs = np.sum(np.abs(branches) ** 2, axis=1)
    b = _sample(probs, rng, force)
    state._collapse(branches[b], rest)
    return b


def measure_computational(
    state: StateVector,
    label: Hashable,
    rng: Optional[np.random.Generator] = None,
    force: Optional[int] = None,
) -> MeasuredBit:
    psi, rest = state._split((label,))
    probs = np.sum(np.abs(psi) ** 2, axis=1)
    b = _sample(probs, rng, force)
    state._collapse(psi[b], rest)
    return b


def fidelity(state_a: StateVector, state_b: StateVector) -> float:
    """``|<a|b>|^2`` with qubits matched by label.

    Raises ``ValueError`` if the registers do not hold the same qubits.
    """
    if state_a.qubit_count != state_b.qubit_count:
        raise ValueError(
            f"qubit counts differ: {state_a.qubit_count} vs {state_b.qubit_count}"
        )
    b = state_b.permuted(state_a.labels)
    return float(min(1.0, abs(np.vdot(state_a.amplitudes, b)) ** 2))


class QubitPool:
    """Tracks which register currently holds each live qubit.

    Registers are merged lazily, only when a joint measurement needs two
    qubits that live apart, and dropped once fully measured.
    """

    def __init__(self):
        self._where: dict[Hashable, StateVector] = {}

    def add(self, state: StateVector) -> None:
        for label in state.labels:
            if label in self._where:
                raise ValueError(f"qubit {label!r} already live")
        for label in state.labels:
            self._where[label] = state

    def __contains__(self, label) -> bool:
        return label in self._where

    def __len__(self) -> int:
        return len(self._where)

    def labels(self) -> list:
        return list(self._where)

    def register(self, label: Hashable) -> StateVector:
        try:
            return self._where[label]
        except KeyError:
            raise KeyError(f"qubit {label!r} is not live") from None

    def registers(self) -> list[StateVector]:
        seen, out = set(), []
        for state in self._where.values():
            if id(state) not in seen:
                seen.add(id(state))
                out.append(state)
        return out

    def _join(self, labels: Iterable[Hashable]) -> StateVector:
        regs = []
        for label in labels:
            reg = self.register(label)
            if all(reg is not r for r in regs):
                regs.append(reg)
        joint = regs[0]
        for reg in regs[1:]:
            joint = tensor(joint, reg)
        for label in joint.labels:
            self._where[label] = joint
        return joint

    def _forget(self, labels: Iterable[Hashable]) -> None:
        for label in labels:
            del self._where[label]

    def bell_measure(self, pair, rng=None, force=None) -> BellOutcome:
        state = self._join(pair)
        outcome = bell_measure(state, pair, rng, force)
        self._forget(pair)
        return outcome

    def measure_rotated(self, label, angle, rng=None, force=None) -> MeasuredBit:
        b = measure_rotated(self.register(label), label, angle, rng, force)
        self._forget([label])
        return b

    def discard(self, label, rng=None) -> None:
        """Trace a qubit out by measuring it and dropping the result."""
        measure_computational(self.register(label), label, rng)
        self._forget([label])

    def relabel(self, mapping: dict) -> None:
        for state in self.registers():
            state.relabel(mapping)
        self._where = {mapping.get(k, k): v for k, v in self._where.items()}
