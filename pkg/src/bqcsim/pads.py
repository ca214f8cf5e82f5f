"""Angle one-time pad and the Bell-outcome to pad correction."""

from __future__ import annotations

from .quantum import Angle, BellOutcome, PadKey


def encode_angle(theta: Angle, pad: PadKey) -> Angle:
    """``(-1)^x * theta + z * pi``."""
    sign = -1 if pad.x else 1
    return Angle(sign * Angle(int(theta)).eighths + 4 * pad.z)


def decode_angle(theta_tilde: Angle, pad: PadKey) -> Angle:
    """Inverse of :func:`encode_angle` for the same pad."""
    sign = -1 if pad.x else 1
    return Angle(sign * (Angle(int(theta_tilde)).eighths - 4 * pad.z))


def byproduct_params(outcome: BellOutcome) -> PadKey:
    """Pad that absorbs the Pauli byproduct left by entanglement swapping.

    If the swapped pair is in Bell state ``(z', x')`` and the first qubit is
    measured at ``encode_angle(theta, pad)`` with outcome ``b``, the partner
    ends in ``|theta + b*pi>`` exactly when ``pad == (z', x' ^ 1)``. This is
    the only pad with that property for every theta and b; the exhaustive
    statevector check in the test suite pins it down.
    """
    return PadKey(outcome.z, outcome.x ^ 1)
