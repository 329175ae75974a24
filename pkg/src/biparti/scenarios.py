"""Worked protocol runs: the trusted-party oblivious-transfer gate over both
channel kinds, the EPR coin flip, EPR pair versus shared random bit, and a
toy commitment broken by a switch unitary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import model, nogo, qlin
from .model import Party
from .qlin import DensityOperator, StateVector

QUANTUM = "quantum"
CLASSICAL = "classical"
SUPERPOSED = "superposed"

GOLDEN_TOL = 1e-9

# Reference final states of the O-OT gate with Alice's inputs in uniform
# superposition and Bob honest.  Keys are "A B" ket strings: Alice's three
# qubits (inputs, first trusted qubit), then Bob's three (second and third
# trusted qubits, choice bit); every amplitude is +-1/(2 sqrt 2).  For c = 1
# every Bob ket ends in the choice bit 1.
REFERENCE_OUT_QUANTUM = {
    0: {"000000": 1, "010000": 1, "001110": 1, "011110": -1,
        "100100": 1, "110100": 1, "101010": 1, "111010": -1},
    1: {"000001": 1, "100001": 1, "001111": 1, "101111": -1,
        "010101": 1, "110101": 1, "011011": 1, "111011": -1},
}

# Same runs with Alice's inputs sent classically: "A M B" with the two
# environment qubits that recorded her inputs in the middle.
REFERENCE_OUT_CLASSICAL = {
    0: {"00000000": 1, "01001000": 1, "00100110": 1, "01101110": -1,
        "10010100": 1, "11011100": 1, "10110010": 1, "11111010": -1},
    1: {"00000001": 1, "10010001": 1, "00100111": 1, "10110111": -1,
        "01001101": 1, "11011101": 1, "01101011": 1, "11111011": -1},
}

OOT_LABELS = ("A0", "A1", "T0", "T1", "T2", "B0")
OOT_SPLIT = {"A0": Party.ALICE, "A1": Party.ALICE, "T0": Party.ALICE,
             "T1": Party.BOB, "T2": Party.BOB, "B0": Party.BOB}


@dataclass(frozen=True, eq=False)
class ScenarioOutcome:
    name: str
    final_state: StateVector
    reports: list = field(default_factory=list)
    samples: dict | None = None
    golden_deltas: dict = field(default_factory=dict)
    golden_tolerances: dict = field(default_factory=dict)
    world: model.WorldState | None = None
    densities: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.golden_deltas[k] <= self.golden_tolerances[k] for k in self.golden_deltas)

    @property
    def failed_checks(self) -> list:
        return [k for k in self.golden_deltas if self.golden_deltas[k] > self.golden_tolerances[k]]


def _reference_state(kets):
    return StateVector.from_kets(kets, scale=1 / (2 * np.sqrt(2)))


def oot_gate() -> qlin.UnitaryMatrix:
    """The trusted party's circuit on ``A0 A1 T0 T1 T2 B0``.

    Alice's bits select the flip ``R_{b0 b1}`` on T0, Bob's bit controls the
    Bell-label swap on T0 T1, and T0 is copied onto T2.
    """
    flips = qlin.multiplexed([qlin.standard_gate("r_pauli", b) for b in product((0, 1), repeat=2)])
    swap = qlin.controlled(qlin.standard_gate("by_bilateral"))
    return qlin.circuit_unitary(6, [
        (flips, (0, 1, 2)),
        (swap, (5, 2, 3)),
        (qlin.standard_gate("cnot"), (2, 4)),
    ])


def prepare_bell_pair(world, first, second):
    """Trusted party turns its ``|00>`` into ``|Phi+>``: y-rotation by pi/2 on ``first``, then CNOT."""
    world = model.apply_local(world, Party.TRUSTED_PARTY, qlin.standard_gate("ry_half_pi"), [first])
    return model.apply_local(world, Party.TRUSTED_PARTY, qlin.standard_gate("cnot"), [first, second])


def _plus():
    return StateVector(np.array([1, 1]) / np.sqrt(2))


def _send(world, channel, sender, receiver, labels):
    if channel == QUANTUM:
        return model.send_quantum(world, sender, receiver, labels)
    if channel == CLASSICAL:
        return model.send_classical(world, sender, receiver, labels)
    raise ValueError(f"unknown channel kind {channel!r}")


def _check_modes(channel, alice, bob):
    if channel not in (QUANTUM, CLASSICAL):
        raise ValueError(f"unknown channel kind {channel!r}")
    if alice != SUPERPOSED and (len(alice) != 2 or any(b not in (0, 1) for b in alice)):
        raise ValueError(f"alice mode must be 'superposed' or a bit pair, got {alice!r}")
    if bob != SUPERPOSED and bob not in (0, 1):
        raise ValueError(f"bob mode must be 'superposed' or a bit, got {bob!r}")


def oot_world(channel: str, alice, bob) -> model.WorldState:
    """Run the O-OT protocol once and return the final world.

    ``alice`` is ``"superposed"`` or ``(b0, b1)``; ``bob`` is ``"superposed"``
    or ``c``.  Environment qubits, when any, follow the six protocol qubits.
    """
    _check_modes(channel, alice, bob)
    a_init = [_plus(), _plus()] if alice == SUPERPOSED else list(alice)
    b_init = _plus() if bob == SUPERPOSED else bob
    world = model.init_protocol([
        ("A0", Party.ALICE, a_init[0]),
        ("A1", Party.ALICE, a_init[1]),
        ("T0", Party.TRUSTED_PARTY, 0),
        ("T1", Party.TRUSTED_PARTY, 0),
        ("T2", Party.TRUSTED_PARTY, 0),
        ("B0", Party.BOB, b_init),
    ])
    world = prepare_bell_pair(world, "T0", "T1")
    world = _send(world, channel, Party.ALICE, Party.TRUSTED_PARTY, ["A0", "A1"])
    world = _send(world, channel, Party.BOB, Party.TRUSTED_PARTY, ["B0"])
    return model.trusted_apply_and_split(world, oot_gate(), OOT_LABELS, OOT_SPLIT)


def bob_readout(world: model.WorldState) -> dict:
    """Distribution of Bob's decoded bit ``T1 xor T2`` (his copy of ``b_c``)."""
    probs = model.marginal_distribution(world, ["T1", "T2"])
    return {0: float(probs[0] + probs[3]), 1: float(probs[1] + probs[2])}


def _alice_qubits(world):
    return world.layout.owned_by([Party.ALICE])


def _bob_qubits(world):
    return world.layout.owned_by([Party.BOB])


def _reordered_for_reference(world):
    """Final state permuted to Alice | environment | Bob order, environment from Bob's choice last."""
    layout = world.layout
    env = layout.owned_by([Party.ENVIRONMENT])
    alice_env = tuple(k for k in env if layout.labels[k] in _env_of(world, "A0", "A1"))
    bob_env = tuple(k for k in env if k not in alice_env)
    order = layout.indices(["A0", "A1", "T0"]) + alice_env + layout.indices(["T1", "T2", "B0"]) + bob_env
    return world.state.permuted(order), len(bob_env)


def _env_of(world, *labels):
    out = []
    for e in world.transcript:
        if e.op == "send_classical" and set(e.labels) & set(labels):
            out.extend(e.args["ancillas"])
    return set(out)


def _golden_delta(world, channel, c):
    state, extra = _reordered_for_reference(world)
    table = REFERENCE_OUT_QUANTUM if channel == QUANTUM else REFERENCE_OUT_CLASSICAL
    ref = _reference_state(table[c])
    if extra:
        # Bob's classical choice leaves a product record |c> in the environment.
        ref = qlin.tensor([ref] + [StateVector.basis(str(c))] * extra)
    return 1 - abs(state.overlap(ref))


def run_oot(channel: str, alice_mode=SUPERPOSED, bob_mode=0) -> ScenarioOutcome:
    """O-OT through the trusted gate, with security reports for both sides.

    The Alice-side report compares her reduced state for ``c = 0`` and
    ``c = 1`` (same ``alice_mode``).  Bob-side reports compare his reduced
    state across Alice bit pairs that agree on ``b_c``; when Bob is
    superposed an extra report checks his view against a coin-flipped
    honest choice.
    """
    _check_modes(channel, alice_mode, bob_mode)
    world = oot_world(channel, alice_mode, bob_mode)
    deltas, tols, densities, values = {}, {}, {}, {}
    reports = []

    # Alice side: can she learn c?
    alice_views = {}
    for c in (0, 1):
        w = world if bob_mode == c else oot_world(channel, alice_mode, c)
        alice_views[c] = model.reduced_view(w, [Party.ALICE])
        densities[f"alice_c{c}"] = alice_views[c].matrix
        if alice_mode == SUPERPOSED:
            deltas[f"reference_out_c{c}"] = _golden_delta(w, channel, c)
            tols[f"reference_out_c{c}"] = GOLDEN_TOL
            if channel == CLASSICAL:
                key = f"alice_maximally_mixed_c{c}"
                deltas[key] = float(np.max(np.abs(alice_views[c].matrix - np.eye(8) / 8)))
                tols[key] = GOLDEN_TOL
    d_alice = qlin.trace_distance(alice_views[0], alice_views[1])
    reports.append(nogo.SecurityReport(d_alice, tolerance=GOLDEN_TOL, label="alice_learns_c"))
    values["alice_distance"] = d_alice
    values["alice_guess_probability"] = nogo.guess_probability(alice_views[0], alice_views[1])

    # Bob side: does he learn anything beyond b_c?
    honest_c = (0, 1) if bob_mode == SUPERPOSED else (bob_mode,)
    for c in honest_c:
        bob_views = {b: model.reduced_view(oot_world(channel, b, c), [Party.BOB])
                     for b in product((0, 1), repeat=2)}
        worst = 0.0
        for b, b2 in product(bob_views, repeat=2):
            if b < b2 and b[c] == b2[c]:
                worst = max(worst, qlin.trace_distance(bob_views[b], bob_views[b2]))
        reports.append(nogo.SecurityReport(worst, tolerance=GOLDEN_TOL, label=f"bob_learns_other_bit_c{c}"))

    if bob_mode == SUPERPOSED and alice_mode != SUPERPOSED:
        mixed = sum(0.5 * model.reduced_view(oot_world(channel, alice_mode, c), [Party.BOB]).matrix
                    for c in (0, 1))
        view = model.reduced_view(world, [Party.BOB])
        d = qlin.trace_distance(view, DensityOperator(mixed))
        reports.append(nogo.SecurityReport(d, tolerance=GOLDEN_TOL, label="bob_superposed_vs_random_choice"))

    if alice_mode != SUPERPOSED and bob_mode != SUPERPOSED:
        expected = alice_mode[bob_mode]
        deltas["honest_readout"] = 1 - bob_readout(world)[expected]
        tols["honest_readout"] = GOLDEN_TOL

    densities["bob"] = model.reduced_view(world, [Party.BOB]).matrix
    values["global_purity_defect"] = abs(1 - float(np.vdot(world.state.amplitudes, world.state.amplitudes).real))
    return ScenarioOutcome(
        name="oot", final_state=world.state, reports=reports, golden_deltas=deltas,
        golden_tolerances=tols, world=world, densities=densities, values=values,
    )


def random_bits_density() -> DensityOperator:
    """Shared random bit: ``(|00><00| + |11><11|) / 2``."""
    m = np.zeros((4, 4))
    m[0, 0] = m[3, 3] = 0.5
    return DensityOperator(m)


def _epr_split_world():
    world = model.init_protocol([("T0", Party.TRUSTED_PARTY, 0), ("T1", Party.TRUSTED_PARTY, 0)])
    world = prepare_bell_pair(world, "T0", "T1")
    return model.trusted_apply_and_split(
        world, qlin.UnitaryMatrix(np.eye(4)), ["T0", "T1"], {"T0": Party.ALICE, "T1": Party.BOB},
    )


def run_epr_coinflip(shots: int, seed: int) -> ScenarioOutcome:
    """Trusted party hands out halves of ``|Phi+>``; both parties read out through the classical channel."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    world = _epr_split_world()
    world = model.announce(world, Party.ALICE, ["T0"])
    world = model.announce(world, Party.BOB, ["T1"])
    joint = model.reduced_view(world, [Party.ALICE, Party.BOB])

    seeds = np.random.SeedSequence(seed).generate_state(2 * shots, dtype=np.uint64)
    counts = {"00": 0, "01": 0, "10": 0, "11": 0}
    for k in range(shots):
        (a,), after = model.measure_registers(world, Party.ALICE, ["T0"], int(seeds[2 * k]))
        (b,), _ = model.measure_registers(after, Party.BOB, ["T1"], int(seeds[2 * k + 1]))
        counts[f"{a}{b}"] += 1

    freq = counts["00"] / shots
    deltas = {
        "joint_equals_random_bits": float(np.max(np.abs(joint.matrix - random_bits_density().matrix))),
        "frequency_00": abs(freq - 0.5),
        "disagreements": float(counts["01"] + counts["10"]),
    }
    tols = {
        "joint_equals_random_bits": GOLDEN_TOL,
        "frequency_00": 3 * np.sqrt(0.25 / shots),
        "disagreements": 0.0,
    }
    return ScenarioOutcome(
        name="coinflip", final_state=world.state, samples=counts, golden_deltas=deltas,
        golden_tolerances=tols, world=world, densities={"joint": joint.matrix},
        values={"frequency_00": freq},
    )


def run_epr_vs_random_bit() -> ScenarioOutcome:
    """How far an unmeasured EPR pair is from a shared random bit, before and after a common record."""
    world = _epr_split_world()
    epr = model.reduced_view(world, [Party.ALICE, Party.BOB])
    recorded = model.announce(world, Party.ALICE, ["T0"])
    measured = model.reduced_view(recorded, [Party.ALICE, Party.BOB])
    r_ab = random_bits_density()
    d_epr = qlin.trace_distance(epr, r_ab)
    d_measured = qlin.trace_distance(measured, r_ab)
    deltas = {
        "epr_vs_random_bits": abs(d_epr - 0.5),
        "measured_vs_random_bits": d_measured,
        "random_bits_trace": abs(float(np.trace(r_ab.matrix).real) - 1),
    }
    tols = {"epr_vs_random_bits": 1e-12, "measured_vs_random_bits": 1e-12, "random_bits_trace": 1e-12}
    reports = [
        nogo.SecurityReport(d_epr, tolerance=1e-12, label="epr_distinguishable_from_random_bits"),
        nogo.SecurityReport(d_measured, tolerance=1e-12, label="measured_epr_distinguishable_from_random_bits"),
    ]
    return ScenarioOutcome(
        name="eprbit", final_state=recorded.state, reports=reports, golden_deltas=deltas,
        golden_tolerances=tols, world=recorded,
        densities={"epr": epr.matrix, "measured": measured.matrix, "random_bits": r_ab.matrix},
        values={"epr_distance": d_epr, "measured_distance": d_measured},
    )


def toy_commitment_images():
    """Commit states on ``A0 A1 B0 B1``; Bob holds ``B0 B1`` and sees ``I/4`` either way.

    Bit 0 commits to Phi+ on both pairs, bit 1 to Psi- on (A0, B0) and Phi-
    on (A1, B1).
    """
    def pairs(first, second):
        s = qlin.tensor([qlin.bell_state(first), qlin.bell_state(second)])
        # tensor order is A0 B0 A1 B1; reorder to A0 A1 B0 B1
        return s.permuted((0, 2, 1, 3))

    return pairs("00", "00"), pairs("11", "01")


def run_toy_commitment_attack() -> ScenarioOutcome:
    """Alice commits to 0, then switches to 1 with a unitary on her own qubits."""
    image0, image1 = toy_commitment_images()
    alice, bob = (0, 1), (2, 3)
    report = nogo.check_equal_reduced(image0, image1, side=alice, tol=GOLDEN_TOL, label="bob_learns_bit")
    w = nogo.synth_cheat_unitary(image0, image1, alice)
    switched = qlin.apply_unitary(image0, w, alice)
    action = switched.phase_distance(image1)
    accept = abs(image1.overlap(switched)) ** 2
    report = nogo.SecurityReport(report.concealment_distance, tolerance=GOLDEN_TOL,
                                 cheat_unitary=w, label="bob_learns_bit")
    deltas = {
        "concealment_distance": report.concealment_distance,
        "switch_action_error": action,
        "opening_rejects_switched": 1 - accept,
    }
    tols = {"concealment_distance": GOLDEN_TOL, "switch_action_error": nogo.ACTION_TOL,
            "opening_rejects_switched": nogo.ACTION_TOL}
    return ScenarioOutcome(
        name="commit-attack", final_state=switched, reports=[report], golden_deltas=deltas,
        golden_tolerances=tols,
        densities={"bob_commit0": qlin.reduced_density(image0, bob).matrix,
                   "bob_commit1": qlin.reduced_density(image1, bob).matrix},
        values={"opening_acceptance": accept},
    )
