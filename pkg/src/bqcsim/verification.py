"""Exhaustive and statistical self-checks run by ``bqcsim verify``."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import pads
from .quantum import (
    Angle,
    BellOutcome,
    QubitPool,
    angle_state,
    fidelity,
    make_bell_pair,
    measure_rotated,
)

FIDELITY_TOL = 1e-9
UNIFORMITY_TRIALS = 4096
BELL_FREQ_BAND = (0.22, 0.28)
ROTATED_FREQ_BAND = (0.47, 0.53)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def swapped_pair() -> QubitPool:
    """Two fresh pairs ``(Bs, As)`` and ``(Bt, At)``."""
    pool = QubitPool()
    pool.add(make_bell_pair(0, 0, ("Bs", "As")))
    pool.add(make_bell_pair(0, 0, ("Bt", "At")))
    return pool


def byproduct_case(outcome: BellOutcome, theta: Angle, b: int) -> float:
    """Swap, encode, measure; fidelity of the partner to ``|theta + b*pi>``."""
    pool = swapped_pair()
    pool.bell_measure(("As", "At"), force=outcome)
    encoded = pads.encode_angle(theta, pads.byproduct_params(outcome))
    pool.measure_rotated("Bs", encoded, force=b)
    return fidelity(pool.register("Bt"), angle_state(theta + 4 * b, "Bt"))


def check_byproduct() -> CheckResult:
    start = time.perf_counter()
    failures = [
        (tuple(o), th.eighths, b)
        for o in BellOutcome.all()
        for th in Angle.all()
        for b in (0, 1)
        if byproduct_case(o, th, b) < 1 - FIDELITY_TOL
    ]
    elapsed = time.perf_counter() - start
    detail = f"{64 - len(failures)}/64 cases at fidelity >= 1-{FIDELITY_TOL:g} in {elapsed:.3f}s"
    if failures:
        detail += f"; first failure (z',x',theta,b)={failures[0]}"
    return CheckResult("byproduct identity", not failures, detail)


def check_swap_identity() -> CheckResult:
    worst = 1.0
    for outcome in BellOutcome.all():
        pool = swapped_pair()
        pool.bell_measure(("As", "At"), force=outcome)
        f = fidelity(pool.register("Bs"), make_bell_pair(outcome.z, outcome.x, ("Bs", "Bt")))
        worst = min(worst, f)
    return CheckResult(
        "entanglement swapping", worst >= 1 - FIDELITY_TOL, f"min fidelity {worst:.12f} over 4 outcomes"
    )


def check_uniformity(seed: int = 2024, trials: int = UNIFORMITY_TRIALS) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    counts = np.zeros(4, dtype=int)
    zeros = 0
    for _ in range(trials):
        pool = swapped_pair()
        counts[pool.bell_measure(("As", "At"), rng).index] += 1
    for i in range(trials):
        state = make_bell_pair(0, 0)
        zeros += measure_rotated(state, "B", Angle(i % 8), rng) == 0
    freqs = counts / trials
    lo, hi = BELL_FREQ_BAND
    bell_ok = bool(np.all((freqs >= lo) & (freqs <= hi)))
    f0 = zeros / trials
    rlo, rhi = ROTATED_FREQ_BAND
    return [
        CheckResult("Bell outcome uniformity", bell_ok,
                    f"frequencies {np.round(freqs, 4).tolist()} in [{lo}, {hi}] over {trials}"),
        CheckResult("rotated outcome uniformity", rlo <= f0 <= rhi,
                    f"P(b=0) = {f0:.4f} in [{rlo}, {rhi}] over {trials}"),
    ]


def check_end_to_end(seeds: int = 10) -> CheckResult:
    from .protocol import run_protocol
    from .records import ProtocolConfig

    worst, runs = 1.0, 0
    for m in range(1, 5):
        for seed in range(seeds):
            worst = min([worst, *run_protocol(ProtocolConfig(m, seed)).fidelities()])
            runs += 1
    return CheckResult("honest end-to-end", worst >= 1 - FIDELITY_TOL,
                       f"min resource fidelity {worst:.12f} over {runs} runs, m=1..4")


def run_all(seed: int = 2024) -> list[CheckResult]:
    return [check_byproduct(), check_swap_identity(), *check_uniformity(seed), check_end_to_end()]
