#!/usr/bin/env python
# Alice has no quantum memory, so she forwards or drops each photon in the
# slot it arrives. Watching which slots carry a photon is enough to learn
# every position she picked, and from there every secret angle.
from bqcsim import ProtocolConfig, run_protocol

m, seed = 4, 7
honest = run_protocol(ProtocolConfig(m, seed))
spied = run_protocol(ProtocolConfig(m, seed, "eavesdrop"))

trace = spied.view.side_channel
print("photon present per slot:", "".join("x" if p else "." for p in trace.present))
rep = spied.attack
print("recovered s, t:", rep.recovered_positions.s, rep.recovered_positions.t)
print("actual    s, t:", spied.secrets.positions.s, spied.secrets.positions.t)
print("recovered angles:", [a.eighths for a in rep.recovered_thetas])
print("actual    angles:", [a.eighths for a in spied.secrets.secret_thetas])
print("success:", rep.success)
print("transcript identical to honest run:", honest.transcript.to_jsonl() == spied.transcript.to_jsonl())

hits = sum(run_protocol(ProtocolConfig(m, s, "eavesdrop")).attack.success for s in range(500))
print(f"success over 500 seeds: {hits}/500")
