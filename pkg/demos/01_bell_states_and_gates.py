"""
Bell states and the flip gates
==============================

Prepare |Phi+> from |00> with a half-angle y rotation and a CNOT, then
use the four flip gates on the first qubit to reach every Bell state.
"""
import numpy as np

from biparti import qlin
from biparti.qlin import StateVector

np.set_printoptions(precision=4, suppress=True)

# Start from |00>. Qubit 0 is the most significant bit.
state = StateVector.basis("00")
state = qlin.apply_unitary(state, qlin.standard_gate("ry_half_pi"), [0])
state = qlin.apply_unitary(state, qlin.standard_gate("cnot"), [0, 1])
print("prepared pair:", state.amplitudes.real)
print("equals Phi+:", state.phase_distance(qlin.bell_state("00")) < 1e-12)

# Each flip gate R_b acts on the first qubit only, and the label b of the
# Bell state it produces matches the two bits that selected it.
for b in [(0, 0), (0, 1), (1, 0), (1, 1)]:
    flipped = qlin.apply_unitary(state, qlin.standard_gate("r_pauli", b), [0])
    label = f"{b[0]}{b[1]}"
    print(f"R_{label} |Phi+> ->", flipped.amplitudes.real,
          "matches bell", label, np.allclose(flipped.amplitudes, qlin.bell_state(label).amplitudes))

# B_y exchanges the labels 01 and 10 and leaves the other two alone.
by = qlin.standard_gate("by_bilateral")
for label in ("00", "01", "10", "11"):
    out = qlin.apply_unitary(qlin.bell_state(label), by, [0, 1])
    target = next(t for t in ("00", "01", "10", "11") if out.equals_up_to_phase(qlin.bell_state(t)))
    print(f"B_y: {label} -> {target}")

# Half of any Bell pair is maximally mixed on its own.
rho = qlin.reduced_density(qlin.bell_state("11"), [0])
print("one half of a Bell pair:\n", rho.matrix.real)

# The Schmidt decomposition shows the same thing as two equal coefficients.
print("Schmidt coefficients:", qlin.schmidt_decompose(qlin.bell_state("10"), [0]).coefficients)
