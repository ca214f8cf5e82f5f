#!/usr/bin/env python
# Entanglement swapping and the pad that undoes its byproduct.
#
# Two Bell pairs (Bs, As) and (Bt, At). A Bell measurement on (As, At)
# leaves (Bs, Bt) in the Bell state named by the outcome, even though Bs
# and Bt never met. Measuring Bs at a padded angle then steers Bt into
# |theta + b*pi>.
import numpy as np

from bqcsim.pads import byproduct_params, encode_angle
from bqcsim.quantum import Angle, BellOutcome, QubitPool, angle_state, fidelity, make_bell_pair

rng = np.random.default_rng(1)

pool = QubitPool()
pool.add(make_bell_pair(0, 0, ("Bs", "As")))
pool.add(make_bell_pair(0, 0, ("Bt", "At")))
outcome = pool.bell_measure(("As", "At"), rng)
print("Bell outcome (z', x'):", tuple(outcome))
print("(Bs, Bt) vs |psi_{z',x'}>:",
      fidelity(pool.register("Bs"), make_bell_pair(outcome.z, outcome.x, ("Bs", "Bt"))))

theta = Angle(3)
pad = byproduct_params(outcome)
tilde = encode_angle(theta, pad)
b = pool.measure_rotated("Bs", tilde, rng)
print(f"theta = {theta.eighths}*pi/4, pad = {tuple(pad)}, announced angle = {tilde.eighths}*pi/4, b = {b}")
print("Bt vs |theta + b*pi>:", fidelity(pool.register("Bt"), angle_state(theta + 4 * b, "Bt")))

# The same identity, every branch at once
worst = 1.0
for o in BellOutcome.all():
    for th in Angle.all():
        for bit in (0, 1):
            p = QubitPool()
            p.add(make_bell_pair(0, 0, ("Bs", "As")))
            p.add(make_bell_pair(0, 0, ("Bt", "At")))
            p.bell_measure(("As", "At"), force=o)
            p.measure_rotated("Bs", encode_angle(th, byproduct_params(o)), force=bit)
            worst = min(worst, fidelity(p.register("Bt"), angle_state(th + 4 * bit, "Bt")))
print("worst fidelity over all 64 branches:", worst)
