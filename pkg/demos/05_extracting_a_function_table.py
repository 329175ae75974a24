"""
Reading a whole function table
==============================

In a one-sided computation Bob learns f(i, j) for Alice's i and his j. If
Alice's view does not depend on j, Bob can switch between his inputs after
the fact and read f(i, j) for every j from a single run.
"""
import numpy as np

from biparti import nogo, scenarios
from biparti.qlin import circuit_unitary, standard_gate
from biparti.randomized import random_one_sided_protocol
from biparti.selftest import _direct_table

rng = np.random.default_rng(11)
proto = random_one_sided_protocol(rng, alice_bits=2, bob_values=3)
print("protocol qubits:", proto["joint"].num_qubits)
print("Alice's register:", proto["alice_register"], "Bob's side:", proto["bob_side"])

result = nogo.lo_attack(**proto)
direct = _direct_table(proto)
for i in proto["alice_inputs"]:
    row = [result.table[(i, j)] for j in proto["bob_inputs"]]
    print(f"i={i}: extracted {row}")
print("matches direct evaluation:", result.table == direct)
print("worst universality error:", result.universality_error)

# The attack needs a concealing protocol. The oblivious-transfer gate over
# quantum wires is not one, since Alice's view there depends on c.
prep = circuit_unitary(6, [(standard_gate("ry_half_pi"), (2,)), (standard_gate("cnot"), (2, 3))])
joint = scenarios.oot_gate() @ prep
try:
    nogo.lo_attack(joint, [0, 1, 2, 3], [0, 1], result_readout=[3, 4],
                   alice_register=[0, 1], bob_register=[5], bob_side=[3, 4, 5])
except nogo.NotConcealingError as exc:
    print("refused:", exc)
