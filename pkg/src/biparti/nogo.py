"""Concealment checks and cheating-attack synthesis.

The attacks rest on one fact about purifications: two pure states whose
reductions on one side agree differ only by a unitary on the other side.
:func:`synth_cheat_unitary` constructs that unitary explicitly and
:func:`lo_attack` uses it to let Bob read a one-sided computation for every
one of his inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import qlin
from .qlin import DensityOperator, StateVector, UnitaryMatrix

SECURE = "secure-at-tolerance"
BROKEN = "broken"

HYPOTHESIS_TOL = 1e-8
ACTION_TOL = 1e-8


class NoCheatError(ValueError):
    pass


class NotConcealingError(ValueError):
    pass


class UnreadableResultError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SecurityReport:
    concealment_distance: float
    tolerance: float = qlin.NORM_TOL
    cheat_unitary: UnitaryMatrix | None = None
    label: str = ""

    @property
    def guess_probability(self) -> float:
        return 0.5 + self.concealment_distance / 2

    @property
    def verdict(self) -> str:
        return SECURE if self.concealment_distance <= self.tolerance else BROKEN

    def to_dict(self) -> dict:
        out = {
            "label": self.label,
            "concealment_distance": self.concealment_distance,
            "guess_probability": self.guess_probability,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }
        if self.cheat_unitary is not None:
            m = self.cheat_unitary.matrix
            out["cheat_unitary"] = {"re": m.real.tolist(), "im": m.imag.tolist()}
        return out


@dataclass(frozen=True, eq=False)
class ExtractionResult:
    """Everything Bob learns from one run of the extraction attack.

    ``table[(i, j)]`` holds the readout bits for Alice input ``i`` and Bob
    input ``j``; ``unitaries[(j_first, j)]`` maps the output for ``j_first``
    to the output for ``j`` on Bob's side alone.
    """

    table: dict
    unitaries: dict
    universality_error: float = 0.0
    bob_side: tuple = field(default=())


def _complement(indices, n):
    indices = set(indices)
    return tuple(q for q in range(n) if q not in indices)


def _split_matrix(state, first):
    """Amplitude matrix with rows indexed by ``first`` (ascending) and columns by the rest."""
    n = state.num_qubits
    first = tuple(sorted(first))
    rest = _complement(first, n)
    return np.transpose(state.tensor(), first + rest).reshape(1 << len(first), -1)


def _validate_side(side, n):
    side = tuple(sorted(qlin._check_indices(side, n)))
    if not side or len(side) == n:
        raise qlin.QlinError("side must be a proper nonempty subset of the qubits")
    return side


def guess_probability(rho0: DensityOperator, rho1: DensityOperator) -> float:
    """Optimal success probability for telling ``rho0`` from ``rho1`` with equal priors."""
    return 0.5 + qlin.trace_distance(rho0, rho1) / 2


def check_equal_reduced(
    v0: StateVector, v1: StateVector, side: Iterable[int], tol: float = qlin.NORM_TOL, label: str = ""
) -> SecurityReport:
    """Compare the reductions of ``v0`` and ``v1`` after tracing out ``side``."""
    if v0.num_qubits != v1.num_qubits:
        raise qlin.QlinError("states have different dimensions")
    side = _validate_side(side, v0.num_qubits)
    keep = _complement(side, v0.num_qubits)
    d = qlin.trace_distance(qlin.reduced_density(v0, keep), qlin.reduced_density(v1, keep))
    return SecurityReport(d, tolerance=tol, label=label)


def _orthonormal_completion(basis):
    """Deterministic orthonormal basis of the complement of ``basis``'s column span."""
    d, r = basis.shape
    cols = []
    span = [basis[:, k] for k in range(r)]
    for e in np.eye(d, dtype=complex):
        if len(cols) == d - r:
            break
        v = e.copy()
        for _ in range(2):
            for u in span + cols:
                v -= np.vdot(u, v) * u
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            cols.append(v / norm)
    return np.array(cols, dtype=complex).T.reshape(d, d - r)


def action_error(w: UnitaryMatrix, v0: StateVector, v1: StateVector, cheater_side: Iterable[int]) -> float:
    """``min_phi || (W on cheater_side) v0 - e^{i phi} v1 ||``."""
    moved = qlin.apply_unitary(v0, w, tuple(sorted(cheater_side)))
    return moved.phase_distance(v1)


def synth_cheat_unitary(v0: StateVector, v1: StateVector, cheater_side: Iterable[int]) -> UnitaryMatrix:
    """Unitary on ``cheater_side`` turning ``v0`` into ``v1``.

    Requires the two states to have equal reductions on the other qubits.
    Writing each state as a matrix ``N`` (cheater rows, honest columns), the
    requirement is ``N0^H N0 == N1^H N1`` and the answer solves ``W N0 = N1``.
    The polar factor of ``N1 N0^H`` gives ``W`` on the support, independently
    of how degenerate eigenvalue blocks are resolved; outside the support it
    maps a fixed completion of one range onto that of the other (identity
    when the supports coincide).  The cheater qubits are taken in ascending
    order.
    """
    if v0.num_qubits != v1.num_qubits:
        raise qlin.QlinError("states have different dimensions")
    side = _validate_side(cheater_side, v0.num_qubits)
    n0, n1 = _split_matrix(v0, side), _split_matrix(v1, side)
    gram0, gram1 = n0.conj().T @ n0, n1.conj().T @ n1
    mismatch = float(np.max(np.abs(gram0 - gram1)))
    if mismatch > HYPOTHESIS_TOL:
        raise NoCheatError(
            f"no perfect cheat exists: honest-side reductions differ by {mismatch:.3e}"
        )

    u, s, vh = np.linalg.svd(n1 @ n0.conj().T)
    r = int(np.sum(s > 1e-10 * max(s[0], 1e-300)))
    w = u[:, :r] @ vh[:r]
    dst = _orthonormal_completion(u[:, :r])
    src = _orthonormal_completion(vh[:r].conj().T)
    if dst.shape[1] != src.shape[1]:
        raise NoCheatError("support dimensions of the two states disagree")
    w = w + dst @ src.conj().T
    residual = float(np.linalg.norm(w @ n0 - n1))
    if residual > ACTION_TOL:
        raise NoCheatError(
            f"rank-deficient block mismatch: residual {residual:.3e} after alignment, "
            f"support rank {r}, singular values {np.round(s, 12).tolist()}"
        )
    return UnitaryMatrix(w)


def _prepare_input(n, register, value):
    bits = format(value, f"0{len(register)}b")
    if len(bits) > len(register):
        raise qlin.QlinError(f"input {value} does not fit in {len(register)} qubits")
    return {q: int(b) for q, b in zip(register, bits)}


def _basis_input(n, assignments):
    index = 0
    for q, b in assignments.items():
        index |= b << (n - 1 - q)
    return StateVector.basis(index, n)


def _readout(state, readout):
    n = state.num_qubits
    rest = _complement(readout, n)
    probs = np.transpose(state.probabilities().reshape([2] * n), tuple(readout) + rest)
    probs = probs.reshape(1 << len(readout), -1).sum(axis=1)
    best = int(np.argmax(probs))
    if probs[best] < 1 - ACTION_TOL:
        raise UnreadableResultError(
            f"result not unambiguously readable: top outcome has probability {probs[best]:.6f}"
        )
    return tuple(int(b) for b in format(best, f"0{len(readout)}b"))


def lo_attack(
    joint: UnitaryMatrix,
    alice_inputs: Sequence[int],
    bob_inputs: Sequence[int],
    result_readout: Sequence[int],
    alice_register: Sequence[int],
    bob_register: Sequence[int],
    bob_side: Sequence[int],
) -> ExtractionResult:
    """Bob's extraction attack on a one-sided computation.

    ``joint`` acts on all protocol qubits; inputs are written in basis form
    into ``alice_register`` and ``bob_register`` and every other qubit starts
    at ``|0>``.  After the protocol Bob holds ``bob_side`` and reads
    ``result_readout`` (indices into ``joint``'s qubits).

    Alice's input is purified with a dice register placed in front of the
    protocol qubits.  If her side's reductions do not depend on Bob's input,
    one unitary per Bob input switches Bob's side between outputs for every
    Alice input at once, and Bob reads the whole function table from a
    single honest run per Alice input.
    """
    n = joint.num_qubits
    alice_inputs, bob_inputs = list(alice_inputs), list(bob_inputs)
    if not alice_inputs or not bob_inputs:
        raise ValueError("need at least one input per party")
    readout = tuple(qlin._check_indices(result_readout, n))
    bob_side = tuple(sorted(qlin._check_indices(bob_side, n)))
    if not set(readout) <= set(bob_side):
        raise ValueError("readout registers must belong to Bob's side")

    def honest_output(i, j):
        assignments = _prepare_input(n, alice_register, i)
        assignments.update(_prepare_input(n, bob_register, j))
        return qlin.apply_unitary(_basis_input(n, assignments), joint, range(n))

    m = len(alice_inputs)
    dice = max(1, (m - 1).bit_length())

    def purified_output(j):
        amps = np.zeros(1 << (dice + n), dtype=complex)
        for k, i in enumerate(alice_inputs):
            amps[k << n: (k + 1) << n] = honest_output(i, j).amplitudes
        return StateVector(amps / np.sqrt(m))

    shifted_bob = tuple(dice + q for q in bob_side)
    outputs = {j: purified_output(j) for j in bob_inputs}
    first = bob_inputs[0]
    for j in bob_inputs[1:]:
        report = check_equal_reduced(outputs[first], outputs[j], shifted_bob, tol=HYPOTHESIS_TOL)
        if report.verdict != SECURE:
            raise NotConcealingError(
                "protocol not concealing; Lo attack not applicable "
                f"(Alice-side distance {report.concealment_distance:.3e} between j={first} and j={j})"
            )

    unitaries = {}
    worst = 0.0
    for j in bob_inputs:
        try:
            w = synth_cheat_unitary(outputs[first], outputs[j], shifted_bob)
        except NoCheatError as exc:
            raise NotConcealingError(f"protocol not concealing; Lo attack not applicable ({exc})") from exc
        unitaries[(first, j)] = w
        for i in alice_inputs:
            moved = qlin.apply_unitary(honest_output(i, first), w, bob_side)
            worst = max(worst, moved.phase_distance(honest_output(i, j)))
    if worst > ACTION_TOL:
        raise NoCheatError(f"switch unitaries are not universal over Alice inputs (error {worst:.3e})")

    # One honest run per Alice input; Bob hops from output to output locally.
    table = {}
    for i in alice_inputs:
        current = honest_output(i, first)
        previous = unitaries[(first, first)]
        for j in bob_inputs:
            step = unitaries[(first, j)] @ previous.dagger
            current = qlin.apply_unitary(current, step, bob_side)
            table[(i, j)] = _readout(current, readout)
            previous = unitaries[(first, j)]
    return ExtractionResult(table=table, unitaries=unitaries, universality_error=worst, bob_side=bob_side)
