"""
Oblivious transfer through a trusted gate
=========================================

Alice holds two bits and Bob a choice c. A trusted party runs one gate on
their inputs and hands back every output qubit. We compare what Alice can
see afterwards when the inputs travel over quantum wires and when they go
through a classical channel.
"""
from itertools import product

import numpy as np

from biparti import model, scenarios
from biparti.model import Party

np.set_printoptions(precision=3, suppress=True, linewidth=120)

# Honest use first: Bob decodes T1 xor T2 and gets the bit he chose.
for b0, b1, c in product((0, 1), repeat=3):
    world = scenarios.oot_world(scenarios.QUANTUM, (b0, b1), c)
    readout = scenarios.bob_readout(world)
    bit = max(readout, key=readout.get)
    print(f"b0={b0} b1={b1} c={c}: Bob reads {bit} (expected {(b0, b1)[c]})")

# Now Alice keeps her inputs in superposition, which is what a cheating
# Alice is free to do when the wires are quantum.
quantum = scenarios.run_oot(scenarios.QUANTUM, scenarios.SUPERPOSED, 0)
print("\nquantum wires")
for report in quantum.reports:
    print(f"  {report.label}: distance {report.concealment_distance:.6f}, {report.verdict}")
print("  Alice's best guess of c succeeds with probability", round(quantum.values["alice_guess_probability"], 6))

# With a classical channel each input is copied into an environment record
# on the way in, so the coherence Alice relied on is gone.
classical = scenarios.run_oot(scenarios.CLASSICAL, scenarios.SUPERPOSED, 0)
print("\nclassical channel")
for report in classical.reports:
    print(f"  {report.label}: distance {report.concealment_distance:.2e}, {report.verdict}")
print("  Alice's view for c=0 times 8:\n", 8 * classical.densities["alice_c0"].real)

# Everything that happened is in the transcript, one event per line.
print("\n" + classical.world.export_transcript())

# Including the environment, the global state is still pure.
world = classical.world
print("global norm:", np.linalg.norm(world.state.amplitudes))
print("environment registers:", world.layout.labels_of(Party.ENVIRONMENT))
print("Bob's choice as recorded:", model.marginal_distribution(world, ["M2"]))
