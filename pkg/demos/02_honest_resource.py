#!/usr/bin/env python
# One honest run, slot by slot.
from bqcsim import ProtocolConfig, run_protocol

run = run_protocol(ProtocolConfig(m=3, seed=2024))
sec = run.secrets

print("Alice's positions  s =", sec.positions.s, " t =", sec.positions.t)
print("secret angles (eighths of pi/4):", [a.eighths for a in sec.secret_thetas])
print()
for line in run.transcript.to_jsonl().splitlines():
    print(line)
print()
print("Bob's resource qubits, as Alice predicts them:")
for q, f in zip(run.resource.qubits, run.fidelities()):
    print(f"  B_{q.index}: |{q.alice_expected.eighths}*pi/4>  fidelity {f:.12f}")
