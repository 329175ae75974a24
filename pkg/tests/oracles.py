"""Independent oracles and frozen expected values.

Nothing here imports the package's simulation code: states are typed in
by hand as ket lists and operators are built with plain ``np.kron`` on
explicit matrices.
"""
import numpy as np

S2 = 1 / np.sqrt(2)

# Hand-tabulated final states of the O-OT gate, quantum channels, Alice
# superposed.  Entries: (Alice ket A0 A1 T0, Bob ket T1 T2 B0, sign); scale
# 1/(2 sqrt 2).  The c=1 list is kept as originally tabulated, with Bob's
# ket |100> in two terms although the gate never touches B0, so |101> is
# the consistent value.
TABULATED_OUT = {
    0: [("000", "000", 1), ("010", "000", 1), ("001", "110", 1), ("011", "110", -1),
        ("100", "100", 1), ("110", "100", 1), ("101", "010", 1), ("111", "010", -1)],
    1: [("000", "001", 1), ("100", "001", 1), ("001", "111", 1), ("101", "111", -1),
        ("010", "100", 1), ("110", "100", 1), ("011", "011", 1), ("111", "011", -1)],
}

# Corrected c=1 list: Bob's choice qubit is |1> in every term.
CORRECTED_OUT = {
    0: TABULATED_OUT[0],
    1: [(a, "101" if b == "100" else b, s) for a, b, s in TABULATED_OUT[1]],
}

# Classical-channel lists, (Alice ket, M ket, Bob ket) -> sign, c=1 corrected.
CLASSICAL_OUT = {
    0: [("000", "00", "000", 1), ("010", "01", "000", 1), ("001", "00", "110", 1),
        ("011", "01", "110", -1), ("100", "10", "100", 1), ("110", "11", "100", 1),
        ("101", "10", "010", 1), ("111", "11", "010", -1)],
    1: [("000", "00", "001", 1), ("100", "10", "001", 1), ("001", "00", "111", 1),
        ("101", "10", "111", -1), ("010", "01", "101", 1), ("110", "11", "101", 1),
        ("011", "01", "011", 1), ("111", "11", "011", -1)],
}

# Exact value from sympy: eigenvalues of rho_A(c=0) - rho_A(c=1) built from
# TABULATED_OUT are {+1/4 (x2), -1/4 (x2), 0 (x4)}; half the absolute sum is 1/2.
# Recomputed in test_acceptance.py::test_oracle_recomputes_frozen_distance.
ALICE_TRACE_DISTANCE_QUANTUM = 0.5
ALICE_GUESS_PROBABILITY_QUANTUM = 0.75

# Eigenvalues of |Phi+><Phi+| - r_AB are {+1/2, -1/2, 0, 0} by hand, so the
# trace distance is 1/2.
EPR_VS_RANDOM_BITS = 0.5


def state_from_terms(terms, n):
    """Vector from ``[(bitstring, sign), ...]`` with the 1/(2 sqrt 2) scale."""
    v = np.zeros(2 ** n, dtype=complex)
    for bits, sign in terms:
        v[int(bits, 2)] += sign
    return v / (2 * np.sqrt(2))


def tabulated_out_vector(c, corrected=True):
    table = CORRECTED_OUT if corrected else TABULATED_OUT
    return state_from_terms([(a + b, s) for a, b, s in table[c]], 6)


def alice_density_from_terms(terms):
    """Alice's 8x8 reduction straight from (alice, bob, sign) kets, no partial-trace code."""
    rho = np.zeros((8, 8))
    for a, b, s in terms:
        for a2, b2, s2 in terms:
            if b == b2:
                rho[int(a, 2), int(a2, 2)] += s * s2 / 8
    return rho


# --- explicit operators on A0 A1 T0 T1 T2 B0 ---------------------------------

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
IY = np.array([[0, 1], [-1, 0]], dtype=complex)  # i * sigma_y
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)
RY = S2 * np.array([[1, -1], [1, 1]], dtype=complex)

BELL = {
    "00": S2 * np.array([1, 0, 0, 1], dtype=complex),
    "01": S2 * np.array([1, 0, 0, -1], dtype=complex),
    "10": S2 * np.array([0, 1, 1, 0], dtype=complex),
    "11": S2 * np.array([0, 1, -1, 0], dtype=complex),
}
BY_TABLE = {"00": "00", "01": "10", "10": "01", "11": "11"}
BY_PERMUTATION = sum(np.outer(BELL[dst], BELL[src].conj()) for src, dst in BY_TABLE.items())


def kron(*ms):
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


def oot_operators():
    """Bell prep and the three trusted-party steps as explicit 64x64 matrices."""
    prep = kron(I2, I2, RY, I2, I2, I2)
    prep = (kron(I2, I2, P0, I2, I2, I2) + kron(I2, I2, P1, X, I2, I2)) @ prep
    flips = {(0, 0): I2, (0, 1): Z, (1, 0): X, (1, 1): IY}
    controlled_r = sum(
        kron(P0 if b0 == 0 else P1, P0 if b1 == 0 else P1, r, I2, I2, I2)
        for (b0, b1), r in flips.items()
    )
    controlled_by = kron(I2, I2, np.eye(4), I2, P0) + kron(I2, I2, BY_PERMUTATION, I2, P1)
    cnot_t0_t2 = kron(I2, I2, P0, I2, I2, I2) + kron(I2, I2, P1, I2, X, I2)
    return prep, controlled_by @ controlled_r, cnot_t0_t2


def oot_final_vector(b0, b1, c):
    prep, rb, cnot = oot_operators()
    v = np.zeros(64, dtype=complex)
    v[int(f"{b0}{b1}000{c}", 2)] = 1
    return cnot @ rb @ prep @ v


def bob_parity_distribution(v):
    """P(T1 xor T2 = 0), P(... = 1) by enumerating basis kets."""
    p = [0.0, 0.0]
    for k, amp in enumerate(v):
        bits = format(k, "06b")
        p[int(bits[3]) ^ int(bits[4])] += abs(amp) ** 2
    return p
