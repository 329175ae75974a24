"""
EPR coin flip
=============

The trusted party hands out the two halves of |Phi+>. Both parties read
their half through the classical channel, and the pair of outcomes is a
shared random bit.
"""
import numpy as np

from biparti import qlin, scenarios

np.set_printoptions(precision=3, suppress=True)

outcome = scenarios.run_epr_coinflip(shots=10_000, seed=2024)
print("joint view after both reports:\n", outcome.densities["joint"].real)
print("histogram:", outcome.samples)

n = sum(outcome.samples.values())
freq = outcome.samples["00"] / n
print(f"frequency of 00 = {freq:.4f}; three sigma band is 0.5 +- {3 * np.sqrt(0.25 / n):.4f}")

# Before any record exists the pair is still entangled, and that is a
# different state from a shared random bit.
compare = scenarios.run_epr_vs_random_bit()
print("D(Phi+, random bits) =", round(compare.values["epr_distance"], 12))
print("D(recorded pair, random bits) =", compare.values["measured_distance"])

# The same seed always reproduces the same histogram.
again = scenarios.run_epr_coinflip(shots=10_000, seed=2024)
print("reproducible:", again.samples == outcome.samples)

# A different seed gives a different sample of the same distribution.
other = scenarios.run_epr_coinflip(shots=10_000, seed=7)
print("another seed:", other.samples, "passed:", other.passed)

purity = qlin.density_from_pure(outcome.final_state).purity()
print("purity of the full world including records:", round(purity, 12))
