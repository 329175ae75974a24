"""
Switching a commitment
======================

A toy commitment where Bob's two qubits look like I/4 whichever bit Alice
committed to. Because Bob cannot tell the images apart, Alice can move
from one to the other with a unitary on her own qubits alone.
"""
import numpy as np

from biparti import nogo, qlin, scenarios

np.set_printoptions(precision=3, suppress=True, linewidth=120)

image0, image1 = scenarios.toy_commitment_images()
alice, bob = (0, 1), (2, 3)

print("Bob's view of commit 0 times 4:\n", 4 * qlin.reduced_density(image0, bob).matrix.real)
print("Bob's view of commit 1 times 4:\n", 4 * qlin.reduced_density(image1, bob).matrix.real)

report = nogo.check_equal_reduced(image0, image1, side=alice)
print("concealment distance:", report.concealment_distance, report.verdict)

# The equal views are exactly what lets Alice build the switch.
w = nogo.synth_cheat_unitary(image0, image1, alice)
print("switch unitary on Alice's qubits:\n", w.matrix)
switched = qlin.apply_unitary(image0, w, alice)
print("action error:", nogo.action_error(w, image0, image1, alice))
print("Bob's opening test accepts bit 1 with probability", abs(image1.overlap(switched)) ** 2)

# A pair of states that do not look the same to Bob admits no switch.
try:
    nogo.synth_cheat_unitary(qlin.StateVector.basis("0000"), qlin.StateVector.basis("0011"), alice)
except nogo.NoCheatError as exc:
    print("as expected:", exc)
