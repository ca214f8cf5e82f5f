#!/usr/bin/env python
# How many secret position sets remain consistent with what Bob sees?
# An honest server faces C(2m, m) equally plausible choices. Either attack
# collapses that to one.
import json
import tempfile
from pathlib import Path

from bqcsim import ProtocolConfig, adversary, run_protocol
from bqcsim.cli import main

print(f"{'m':>2} {'honest':>7} {'bits':>6} {'eavesdrop':>10} {'trojan':>7}")
for m in range(1, 5):
    honest = adversary.blindness_candidates(run_protocol(ProtocolConfig(m, 0)).view, m)
    eav = run_protocol(ProtocolConfig(m, 0, "eavesdrop")).attack.candidate_count
    tro = run_protocol(ProtocolConfig(m, 0, "trojan")).attack.candidate_count
    print(f"{m:>2} {honest:>7} {adversary.entropy_bits(honest):>6.3f} {eav:>10} {tro:>7}")

# The same numbers from a trace file on disk, via the CLI
with tempfile.TemporaryDirectory() as d:
    trace, report = Path(d) / "t.jsonl", Path(d) / "a.json"
    main(["run", "--m", "2", "--seed", "3", "--trace", str(trace)])
    main(["analyze", "--trace", str(trace), "--report", str(report)])
    print(json.dumps(json.loads(report.read_text()), indent=2))
