"""Dense complex linear algebra for small qubit registers.

Basis indices are big-endian: qubit 0 is the most significant bit, so the
ket ``|q0 q1 ... q(n-1)>`` sits at index ``int("q0q1...", 2)``.  Reshaping an
amplitude vector to ``[2] * n`` in C order puts qubit ``k`` on axis ``k``;
every routine here relies on that single convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 14

NORM_TOL = 1e-9
GATE_TOL = 1e-12

_SQRT2_INV = 1 / np.sqrt(2)


class QlinError(ValueError):
    pass


def _num_qubits_for(dim):
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise QlinError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise QlinError(f"{n} qubits exceeds the dense cap of {MAX_QUBITS}")
    return n


def _frozen(array):
    array = np.array(array, dtype=complex)
    if not np.all(np.isfinite(array)):
        raise QlinError("non-finite amplitude")
    array.setflags(write=False)
    return array


def _check_indices(indices, n, what="qubit"):
    indices = tuple(int(i) for i in indices)
    if len(set(indices)) != len(indices):
        raise QlinError(f"duplicate {what} index in {indices}")
    for i in indices:
        if not 0 <= i < n:
            raise QlinError(f"{what} index {i} out of range for {n} qubits")
    return indices


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on ``num_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        _num_qubits_for(amps.size)
        norm = np.vdot(amps, amps).real
        if abs(norm - 1) > NORM_TOL:
            raise QlinError(f"state is not normalized (squared norm {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @classmethod
    def basis(cls, bits: str | int, num_qubits: int | None = None) -> "StateVector":
        """Computational basis state from a bit string (``"01"``) or an index."""
        if isinstance(bits, str):
            num_qubits, index = len(bits), int(bits, 2) if bits else 0
        else:
            index = int(bits)
            if num_qubits is None:
                num_qubits = max(index.bit_length(), 1)
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[index] = 1
        return cls(amps)

    @classmethod
    def from_kets(cls, kets: dict, scale: complex = 1.0, normalize: bool = False) -> "StateVector":
        """Build a state from ``{"0101": amplitude, ...}``; all keys share one length."""
        widths = {len(k) for k in kets}
        if len(widths) != 1:
            raise QlinError("ket strings must all have the same length")
        (n,) = widths
        amps = np.zeros(1 << n, dtype=complex)
        for key, amp in kets.items():
            amps[int(key, 2)] += amp
        amps *= scale
        if normalize:
            amps /= np.linalg.norm(amps)
        return cls(amps)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.num_qubits)

    def permuted(self, order: Sequence[int]) -> "StateVector":
        """Reorder qubits so that new qubit ``k`` is old qubit ``order[k]``."""
        order = _check_indices(order, self.num_qubits)
        if len(order) != self.num_qubits:
            raise QlinError("permutation must list every qubit")
        return StateVector(np.transpose(self.tensor(), order).reshape(-1))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def equals_up_to_phase(self, other: "StateVector", tol: float = NORM_TOL) -> bool:
        if self.num_qubits != other.num_qubits:
            return False
        return abs(self.overlap(other)) >= 1 - tol

    def phase_distance(self, other: "StateVector") -> float:
        """min over phi of || self - e^{i phi} other ||."""
        ov = self.overlap(other)
        phase = ov / abs(ov) if abs(ov) > 0 else 1.0
        return float(np.linalg.norm(self.amplitudes - phase * other.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise QlinError("density matrix must be square")
        _num_qubits_for(m.shape[0])
        if np.max(np.abs(m - m.conj().T), initial=0) > NORM_TOL:
            raise QlinError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1) > NORM_TOL:
            raise QlinError(f"density matrix trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(m).min() < -NORM_TOL:
            raise QlinError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", m)

    @property
    def num_qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityOperator":
        d = 1 << num_qubits
        return cls(np.eye(d) / d)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self):
        return f"DensityOperator(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise QlinError("gate matrix must be square")
        _num_qubits_for(m.shape[0])
        err = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if err > NORM_TOL:
            raise QlinError(f"matrix is not unitary (max deviation {err:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    @property
    def dagger(self) -> "UnitaryMatrix":
        return UnitaryMatrix(self.matrix.conj().T)

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        return UnitaryMatrix(self.matrix @ other.matrix)

    def __repr__(self):
        return f"UnitaryMatrix(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``state = sum_k coefficients[k] |left_basis[k]> |right_basis[k]>``.

    ``left_qubits``/``right_qubits`` record which original qubits (ascending)
    each basis lives on, so :meth:`reconstruct` can restore the qubit order.
    """

    coefficients: np.ndarray
    left_basis: tuple
    right_basis: tuple
    left_qubits: tuple
    right_qubits: tuple

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def reconstruct(self) -> StateVector:
        total = sum(
            lam * np.kron(a.amplitudes, b.amplitudes)
            for lam, a, b in zip(self.coefficients, self.left_basis, self.right_basis)
        )
        order = self.left_qubits + self.right_qubits
        n = len(order)
        inverse = np.argsort(order)
        return StateVector(np.transpose(np.reshape(total, [2] * n), inverse).reshape(-1))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def tensor(parts: Iterable[StateVector]) -> StateVector:
    """Left-to-right tensor product of states."""
    parts = list(parts)
    if not parts:
        raise QlinError("empty tensor product")
    amps = parts[0].amplitudes
    for p in parts[1:]:
        amps = np.kron(amps, p.amplitudes)
    return StateVector(amps)


def kron_gates(gates: Iterable[UnitaryMatrix]) -> UnitaryMatrix:
    gates = list(gates)
    if not gates:
        raise QlinError("empty tensor product")
    m = gates[0].matrix
    for g in gates[1:]:
        m = np.kron(m, g.matrix)
    return UnitaryMatrix(m)


_PAULI = {
    "identity": np.eye(2),
    "pauli_x": np.array([[0, 1], [1, 0]]),
    "pauli_y": np.array([[0, -1j], [1j, 0]]),
    "pauli_z": np.array([[1, 0], [0, -1]]),
}

# Phases chosen so that R_b (x) I maps |Phi+> onto the tilde Bell state b
# exactly; R_11 is therefore i*sigma_y rather than sigma_y.
_R_PAULI = {
    (0, 0): _PAULI["identity"],
    (0, 1): _PAULI["pauli_z"],
    (1, 0): _PAULI["pauli_x"],
    (1, 1): 1j * _PAULI["pauli_y"],
}

_RY_HALF_PI = _SQRT2_INV * np.array([[1, -1], [1, 1]])

# Columns are the tilde-labelled Bell states 00, 01, 10, 11.
BELL_BASIS = _SQRT2_INV * np.array(
    [[1, 1, 0, 0],
     [0, 0, 1, 1],
     [0, 0, 1, -1],
     [1, -1, 0, 0]],
    dtype=complex,
)

_BY_LABEL_PERMUTATION = {0: 0, 1: 2, 2: 1, 3: 3}


def _by_bilateral():
    perm = np.zeros((4, 4))
    for src, dst in _BY_LABEL_PERMUTATION.items():
        perm[dst, src] = 1
    return BELL_BASIS @ perm @ BELL_BASIS.conj().T


_CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
)

GATE_NAMES = (
    "identity", "pauli_x", "pauli_y", "pauli_z", "hadamard", "ry_half_pi",
    "cnot", "by_bilateral", "by_rotation", "r_pauli",
)


def standard_gate(name: str, params: tuple | None = None) -> UnitaryMatrix:
    """Return one of the fixed gates by name.

    ``r_pauli`` takes ``params=(b0, b1)`` and returns the single-qubit flip
    that turns the first half of ``|Phi+>`` into the tilde Bell state
    ``b0 b1``.  ``by_bilateral`` swaps the tilde labels 01 and 10 and fixes
    00 and 11, all with unit phase; ``by_rotation`` is the literal
    ``Ry(pi/2) (x) Ry(pi/2)``, which realizes the same label map but sends
    the 10 state to minus the 01 state.
    """
    if name in _PAULI:
        return UnitaryMatrix(_PAULI[name])
    if name == "hadamard":
        return UnitaryMatrix(_SQRT2_INV * np.array([[1, 1], [1, -1]]))
    if name == "ry_half_pi":
        return UnitaryMatrix(_RY_HALF_PI)
    if name == "cnot":
        return UnitaryMatrix(_CNOT)
    if name == "by_bilateral":
        return UnitaryMatrix(_by_bilateral())
    if name == "by_rotation":
        return UnitaryMatrix(np.kron(_RY_HALF_PI, _RY_HALF_PI))
    if name == "r_pauli":
        if params is None or len(params) != 2:
            raise QlinError("r_pauli needs a bit pair (b0, b1)")
        key = tuple(int(b) for b in params)
        if key not in _R_PAULI:
            raise QlinError(f"r_pauli bits must be 0/1, got {params}")
        return UnitaryMatrix(_R_PAULI[key])
    raise QlinError(f"unknown gate {name!r}")


def bell_state(label: str) -> StateVector:
    """Tilde-labelled Bell state: ``"00"`` is Phi+, 01 Phi-, 10 Psi+, 11 Psi-."""
    return StateVector(BELL_BASIS[:, int(label, 2)])


def multiplexed(gates: Sequence[UnitaryMatrix]) -> UnitaryMatrix:
    """Block-diagonal ``sum_k |k><k| (x) gates[k]``; the selector register comes first."""
    from scipy.linalg import block_diag

    if not gates:
        raise QlinError("no gates to multiplex")
    _num_qubits_for(len(gates))
    dims = {g.dim for g in gates}
    if len(dims) != 1:
        raise QlinError("multiplexed gates must share a dimension")
    return UnitaryMatrix(block_diag(*(g.matrix for g in gates)))


def controlled(gate: UnitaryMatrix) -> UnitaryMatrix:
    return multiplexed([UnitaryMatrix(np.eye(gate.dim)), gate])


def _apply_matrix(tensor_state, matrix, targets, n):
    k = len(targets)
    moved = np.moveaxis(tensor_state, targets, range(k))
    shape = moved.shape
    out = (matrix @ moved.reshape(1 << k, -1)).reshape(shape)
    return np.moveaxis(out, range(k), targets)


def apply_unitary(state: StateVector, gate: UnitaryMatrix, targets: Sequence[int]) -> StateVector:
    """Apply ``gate`` to ``targets``; ``targets[0]`` is the gate's most significant qubit."""
    targets = _check_indices(targets, state.num_qubits)
    if gate.dim != 1 << len(targets):
        raise QlinError(
            f"gate of dimension {gate.dim} cannot act on {len(targets)} qubit(s)"
        )
    out = _apply_matrix(state.tensor(), gate.matrix, targets, state.num_qubits)
    return StateVector(out.reshape(-1))


def circuit_unitary(num_qubits: int, steps: Sequence[tuple]) -> UnitaryMatrix:
    """Compose ``[(gate, targets), ...]`` (applied in order) into one matrix."""
    d = 1 << num_qubits
    cols = np.eye(d, dtype=complex).reshape([2] * num_qubits + [d])
    for gate, targets in steps:
        targets = _check_indices(targets, num_qubits)
        if gate.dim != 1 << len(targets):
            raise QlinError("gate dimension does not match its targets")
        cols = _apply_matrix(cols, gate.matrix, targets, num_qubits)
    return UnitaryMatrix(cols.reshape(d, d))


def density_from_pure(state: StateVector) -> DensityOperator:
    a = state.amplitudes
    return DensityOperator(np.outer(a, a.conj()))


def reduced_density(state: StateVector, keep: Iterable[int]) -> DensityOperator:
    """Reduced operator of a pure state on ``keep`` without forming the full projector."""
    n = state.num_qubits
    keep = sorted(_check_indices(keep, n))
    if not keep:
        raise QlinError("empty keep set; use the trace instead")
    rest = [q for q in range(n) if q not in keep]
    m = np.transpose(state.tensor(), keep + rest).reshape(1 << len(keep), -1)
    return DensityOperator(m @ m.conj().T)


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Trace out every qubit not in ``keep``; kept qubits stay in ascending order."""
    n = rho.num_qubits
    keep = sorted(_check_indices(keep, n))
    if not keep:
        raise QlinError("empty keep set; use the trace instead")
    rest = [q for q in range(n) if q not in keep]
    dk, dr = 1 << len(keep), 1 << len(rest)
    t = rho.matrix.reshape([2] * (2 * n))
    t = np.transpose(t, keep + rest + [n + q for q in keep] + [n + q for q in rest])
    t = t.reshape(dk, dr, dk, dr)
    return DensityOperator(np.einsum("ajbj->ab", t))


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    if rho.matrix.shape != sigma.matrix.shape:
        raise QlinError("trace distance needs operators of equal dimension")
    # fixed argument order makes the result exactly symmetric
    if rho.matrix.tobytes() > sigma.matrix.tobytes():
        rho, sigma = sigma, rho
    diff = rho.matrix - sigma.matrix
    diff = (diff + diff.conj().T) / 2
    value = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return min(max(value, 0.0), 1.0)


def schmidt_decompose(state: StateVector, left: Iterable[int], cutoff: float = 1e-12) -> SchmidtDecomposition:
    """Schmidt form across ``left`` versus the remaining qubits.

    Coefficients at or below ``cutoff`` are dropped, so ``rank`` is the
    Schmidt rank at that cutoff.
    """
    n = state.num_qubits
    left = tuple(sorted(_check_indices(left, n)))
    right = tuple(q for q in range(n) if q not in left)
    if not left or not right:
        raise QlinError("degenerate bipartition: both sides must be nonempty")
    m = np.transpose(state.tensor(), left + right).reshape(1 << len(left), -1)
    u, s, vh = np.linalg.svd(m)
    r = int(np.sum(s > cutoff))
    return SchmidtDecomposition(
        coefficients=s[:r].copy(),
        left_basis=tuple(StateVector(u[:, k]) for k in range(r)),
        right_basis=tuple(StateVector(vh[k]) for k in range(r)),
        left_qubits=left,
        right_qubits=right,
    )
