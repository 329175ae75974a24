"""Seeded random instances for property checks."""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from . import qlin
from .qlin import DensityOperator, StateVector, UnitaryMatrix


def random_state(rng: np.random.Generator, num_qubits: int) -> StateVector:
    v = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return StateVector(v / np.linalg.norm(v))


def random_unitary(rng: np.random.Generator, num_qubits: int) -> UnitaryMatrix:
    d = 1 << num_qubits
    if d == 1:
        return UnitaryMatrix(np.eye(1))
    return UnitaryMatrix(unitary_group.rvs(d, random_state=rng))


def random_density(rng: np.random.Generator, num_qubits: int, rank: int | None = None) -> DensityOperator:
    d = 1 << num_qubits
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def random_low_rank_state(rng, left_qubits, right_qubits, rank=None) -> StateVector:
    """Random state on ``left + right`` qubits with a chosen Schmidt rank."""
    dl, dr = 1 << left_qubits, 1 << right_qubits
    rank = rank or int(rng.integers(1, min(dl, dr) + 1))
    a = random_unitary(rng, left_qubits).matrix[:, :rank]
    b = random_unitary(rng, right_qubits).matrix[:, :rank]
    lam = rng.random(rank) + 0.05
    m = (a * lam) @ b.T
    return StateVector((m / np.linalg.norm(m)).reshape(-1))


def _phase_permutation(rng, num_qubits):
    d = 1 << num_qubits
    m = np.zeros((d, d), dtype=complex)
    m[rng.permutation(d), np.arange(d)] = np.exp(2j * np.pi * rng.random(d))
    return UnitaryMatrix(m)


def random_one_sided_protocol(rng: np.random.Generator, alice_bits: int, bob_values: int) -> dict:
    """A one-sided computation that hides Bob's input from Alice by construction.

    Qubit layout: Alice's input ``A`` (``alice_bits``), Bob's input ``J``,
    Bob's work register ``W`` (same width as ``A``) and one Bob scratch
    qubit.  ``W`` receives a CNOT copy of ``A``; Alice then scrambles ``A``
    with a random local unitary, and Bob applies a phase-permutation of ``W``
    (plus a random scratch unitary) selected by ``J``.  The result
    ``f(i, j)`` is the permuted value read on ``W``.
    """
    j_bits = max(1, (bob_values - 1).bit_length())
    a = list(range(alice_bits))
    j = list(range(alice_bits, alice_bits + j_bits))
    w = list(range(j[-1] + 1, j[-1] + 1 + alice_bits))
    scratch = w[-1] + 1
    n = scratch + 1

    cnot = qlin.standard_gate("cnot")
    steps = [(cnot, (a[k], w[k])) for k in range(alice_bits)]
    steps.append((random_unitary(rng, alice_bits), tuple(a)))
    selected = [
        qlin.kron_gates([_phase_permutation(rng, alice_bits), random_unitary(rng, 1)])
        for _ in range(bob_values)
    ]
    selected += [UnitaryMatrix(np.eye(2 << alice_bits))] * ((1 << j_bits) - bob_values)
    steps.append((qlin.multiplexed(selected), tuple(j + w + [scratch])))
    return {
        "joint": qlin.circuit_unitary(n, steps),
        "alice_inputs": list(range(1 << alice_bits)),
        "bob_inputs": list(range(bob_values)),
        "alice_register": tuple(a),
        "bob_register": tuple(j),
        "bob_side": tuple(j + w + [scratch]),
        "result_readout": tuple(w),
    }
