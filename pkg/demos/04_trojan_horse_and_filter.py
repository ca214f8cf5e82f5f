#!/usr/bin/env python
# Bob marks photons on their way to Alice and reads the marks when they come
# back. A filter on Alice's input strips the marks, and Bob is back to
# guessing.
from math import comb

from bqcsim import ProtocolConfig, run_protocol

m, runs = 2, 2000
for filt in (False, True):
    hits = sum(
        run_protocol(ProtocolConfig(m, seed, "trojan", alice_filter=filt)).attack.success
        for seed in range(runs)
    )
    print(f"filter {'on ' if filt else 'off'}: full secret recovered in {hits}/{runs} runs "
          f"({hits / runs:.3f}; blind guessing would give {1 / comb(2 * m, m):.3f})")

run = run_protocol(ProtocolConfig(m, 3, "trojan"))
print("tags read back:", run.view.side_channel.entries)
print("Alice forwarded:", run.secrets.positions.forwarded)
