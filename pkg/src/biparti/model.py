"""Two-party protocol engine over an ownership-tracked global pure state.

A :class:`WorldState` holds one pure state for everything: Alice, Bob, the
trusted party, message registers and the environment that records every
classical transmission.  Each operation returns a new world and appends an
:class:`Event` to the transcript; :func:`replay` re-executes a transcript.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import qlin
from .qlin import DensityOperator, StateVector, UnitaryMatrix


class ProtocolError(ValueError):
    pass


class Party(enum.Enum):
    ALICE = "Alice"
    BOB = "Bob"
    CHANNEL = "Channel"
    TRUSTED_PARTY = "TrustedParty"
    ENVIRONMENT = "Environment"

    def __str__(self):
        return self.value


PROTOCOL_PARTIES = (Party.ALICE, Party.BOB)


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered ``(label, owner)`` pairs; position ``k`` is qubit ``k`` of the state."""

    entries: tuple = ()

    def __post_init__(self):
        entries = tuple((str(label), Party(owner)) for label, owner in self.entries)
        labels = [label for label, _ in entries]
        if len(set(labels)) != len(labels):
            raise ProtocolError(f"duplicate register label in {labels}")
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.entries)

    def index(self, label: str) -> int:
        for k, (lab, _) in enumerate(self.entries):
            if lab == label:
                return k
        raise ProtocolError(f"unknown register {label!r}")

    def indices(self, labels: Iterable[str]) -> tuple:
        return tuple(self.index(label) for label in labels)

    def owner(self, label: str) -> Party:
        return self.entries[self.index(label)][1]

    def owned_by(self, parties: Iterable[Party]) -> tuple:
        parties = set(parties)
        return tuple(k for k, (_, owner) in enumerate(self.entries) if owner in parties)

    def labels_of(self, party: Party) -> tuple:
        return tuple(label for label, owner in self.entries if owner is party)

    def reassigned(self, mapping: Mapping[str, Party]) -> "RegisterLayout":
        for label in mapping:
            self.index(label)
        return RegisterLayout(tuple((lab, mapping.get(lab, own)) for lab, own in self.entries))

    def appended(self, label: str, owner: Party) -> "RegisterLayout":
        return RegisterLayout(self.entries + ((label, owner),))


@dataclass(frozen=True)
class Event:
    step: int
    op: str
    actor: Party | None
    labels: tuple
    args: dict = field(default_factory=dict, compare=False, repr=False)

    def log_line(self) -> str:
        return f"{self.step}\t{self.actor or '-'}\t{self.op}\t{','.join(self.labels)}"


@dataclass(frozen=True, eq=False)
class WorldState:
    layout: RegisterLayout
    state: StateVector
    transcript: tuple = ()

    def __post_init__(self):
        if len(self.layout) != self.state.num_qubits:
            raise ProtocolError("layout length differs from the number of qubits")

    def _next(self, op, actor, labels, layout=None, state=None, **args):
        event = Event(len(self.transcript), op, actor, tuple(labels), args)
        return WorldState(
            layout if layout is not None else self.layout,
            state if state is not None else self.state,
            self.transcript + (event,),
        )

    def owner(self, label: str) -> Party:
        return self.layout.owner(label)

    def export_transcript(self) -> str:
        """One event per line: ``step<TAB>actor<TAB>op<TAB>labels``."""
        return "\n".join(e.log_line() for e in self.transcript)


def _single_qubit(init):
    if isinstance(init, StateVector):
        if init.num_qubits != 1:
            raise ProtocolError("initial register states must be single-qubit")
        return init
    if init in (0, 1, "0", "1"):
        return StateVector.basis(str(int(init)))
    raise ProtocolError(f"cannot interpret initial value {init!r}")


def _require_owned(world, actor, labels, allow_channel=False):
    allowed = {actor, Party.CHANNEL} if allow_channel else {actor}
    for label in labels:
        if world.owner(label) not in allowed:
            raise ProtocolError(
                f"actor does not control register {label!r} "
                f"(owned by {world.owner(label)}, actor {actor})"
            )


def init_protocol(entries: Sequence[tuple]) -> WorldState:
    """Start a protocol from ``[(label, owner, 0 | 1 | StateVector), ...]``."""
    entries = list(entries)
    if not entries:
        raise ProtocolError("a protocol needs at least one register")
    layout = RegisterLayout(tuple((label, owner) for label, owner, _ in entries))
    states = [_single_qubit(init) for _, _, init in entries]
    world = WorldState(layout, qlin.tensor(states))
    return world._next(
        "init", None, layout.labels,
        entries=[(label, Party(owner), s) for (label, owner, _), s in zip(entries, states)],
    )


def apply_local(world: WorldState, actor: Party, gate: UnitaryMatrix, labels: Sequence[str]) -> WorldState:
    """``actor`` applies ``gate`` to registers it controls.

    Channel-owned registers are operable by whichever party is acting: the
    message space always sits at the location of the party whose round it is.
    """
    actor = Party(actor)
    if actor is Party.ENVIRONMENT:
        raise ProtocolError("the environment performs no local operations")
    labels = tuple(labels)
    _require_owned(world, actor, labels, allow_channel=True)
    state = qlin.apply_unitary(world.state, gate, world.layout.indices(labels))
    return world._next("apply_local", actor, labels, state=state, gate=gate)


def send_quantum(world: WorldState, sender: Party, receiver: Party, labels: Sequence[str]) -> WorldState:
    sender, receiver = Party(sender), Party(receiver)
    labels = tuple(labels)
    if receiver is Party.ENVIRONMENT or sender is Party.ENVIRONMENT:
        raise ProtocolError("environment registers cannot be sent or received")
    _require_owned(world, sender, labels, allow_channel=True)
    layout = world.layout.reassigned({label: receiver for label in labels})
    return world._next("send_quantum", sender, labels, layout=layout, receiver=receiver)


def _environment_label(layout):
    k = len(layout.labels_of(Party.ENVIRONMENT))
    while f"M{k}" in layout.labels:
        k += 1
    return f"M{k}"


def announce(world: WorldState, actor: Party, labels: Sequence[str]) -> WorldState:
    """Pass ``labels`` through the trusted measurement machine without handing them over.

    Each register is CNOT-copied onto a fresh environment ancilla appended
    at the end of the layout; ownership of ``labels`` is unchanged.
    """
    actor = Party(actor)
    labels = tuple(labels)
    _require_owned(world, actor, labels, allow_channel=True)
    layout, state = world.layout, world.state
    cnot = qlin.standard_gate("cnot")
    ancillas = []
    for label in labels:
        anc = _environment_label(layout)
        layout = layout.appended(anc, Party.ENVIRONMENT)
        state = qlin.tensor([state, StateVector.basis("0")])
        state = qlin.apply_unitary(state, cnot, (layout.index(label), layout.index(anc)))
        ancillas.append(anc)
    return world._next("announce", actor, labels, layout=layout, state=state, ancillas=tuple(ancillas))


def send_classical(world: WorldState, sender: Party, receiver: Party, labels: Sequence[str]) -> WorldState:
    """Send ``labels`` over the classical channel: record in the environment, then transfer.

    The channel keeps no copy for the sender; a sender that must remember
    the message CNOTs it onto one of its own registers first.
    """
    sender, receiver = Party(sender), Party(receiver)
    if receiver is Party.ENVIRONMENT:
        raise ProtocolError("environment registers cannot receive messages")
    labels = tuple(labels)
    _require_owned(world, sender, labels, allow_channel=True)
    coupled = announce(world, sender, labels)
    ancillas = coupled.transcript[-1].args["ancillas"]
    layout = coupled.layout.reassigned({label: receiver for label in labels})
    return world._next(
        "send_classical", sender, labels,
        layout=layout, state=coupled.state, receiver=receiver, ancillas=ancillas,
    )


def trusted_apply_and_split(
    world: WorldState,
    gate: UnitaryMatrix,
    inputs: Sequence[str],
    split: Mapping[str, Party],
) -> WorldState:
    """The trusted party runs ``gate`` on ``inputs`` and immediately returns every register it holds."""
    inputs = tuple(inputs)
    _require_owned(world, Party.TRUSTED_PARTY, inputs)
    held = set(world.layout.labels_of(Party.TRUSTED_PARTY))
    split = {label: Party(p) for label, p in split.items()}
    missing = held - set(split)
    if missing:
        raise ProtocolError(f"incomplete split map: no destination for {sorted(missing)}")
    extra = set(split) - held
    if extra:
        raise ProtocolError(f"split map names registers the trusted party does not hold: {sorted(extra)}")
    bad = {p for p in split.values() if p not in PROTOCOL_PARTIES}
    if bad:
        raise ProtocolError("outputs can only be split to Alice or Bob")
    state = qlin.apply_unitary(world.state, gate, world.layout.indices(inputs))
    layout = world.layout.reassigned(split)
    return world._next(
        "trusted_apply_and_split", Party.TRUSTED_PARTY, inputs,
        layout=layout, state=state, gate=gate, split=dict(split),
    )


def purify_choice(
    world: WorldState,
    actor: Party,
    choices: Sequence[tuple],
    choice_labels: Sequence[str] | None = None,
    dice_prefix: str = "P",
) -> WorldState:
    """Replace a random choice by an entangled dice register.

    ``choices`` is ``[(bits, weight), ...]``; the appended registers hold
    ``sum_i sqrt(w_i) |i>_dice |bits_i>``, dice first, both owned by ``actor``.
    """
    actor = Party(actor)
    if actor not in PROTOCOL_PARTIES:
        raise ProtocolError("only Alice or Bob make private random choices")
    choices = [(str(bits), float(w)) for bits, w in choices]
    if not choices:
        raise ProtocolError("no choices given")
    weights = np.array([w for _, w in choices])
    if np.any(weights < 0) or abs(weights.sum() - 1) > qlin.NORM_TOL:
        raise ProtocolError(f"choice weights must be non-negative and sum to 1, got {weights.sum()!r}")
    width = {len(bits) for bits, _ in choices}
    if len(width) != 1:
        raise ProtocolError("all choices must have the same bit width")
    (width,) = width
    dice_width = max(1, (len(choices) - 1).bit_length())
    if choice_labels is None:
        choice_labels = [f"{actor.value[0]}{k}" for k in range(width)]
    choice_labels = list(choice_labels)
    if len(choice_labels) != width:
        raise ProtocolError("one label per choice bit is required")
    dice_labels = [f"{dice_prefix}{k}" for k in range(dice_width)]

    amps = np.zeros(1 << (dice_width + width), dtype=complex)
    for i, (bits, w) in enumerate(choices):
        amps[(i << width) | int(bits, 2)] += np.sqrt(w)
    layout = world.layout
    for label in dice_labels + choice_labels:
        layout = layout.appended(label, actor)
    state = qlin.tensor([world.state, StateVector(amps)])
    return world._next(
        "purify_choice", actor, tuple(dice_labels + choice_labels),
        layout=layout, state=state, choices=choices,
        choice_labels=tuple(choice_labels), dice_prefix=dice_prefix,
    )


def reduced_view(world: WorldState, viewer: Iterable[Party], include_environment: bool = False) -> DensityOperator:
    """Reduced state of the registers owned by ``viewer``, in layout order."""
    viewer = {Party(p) for p in viewer}
    if not viewer:
        raise ProtocolError("viewer set is empty")
    if Party.ENVIRONMENT in viewer and not include_environment:
        raise ProtocolError("environment view is diagnostic only; pass include_environment=True")
    keep = world.layout.owned_by(viewer)
    if not keep:
        raise ProtocolError(f"viewer {sorted(p.value for p in viewer)} owns no qubits")
    return qlin.reduced_density(world.state, keep)


def marginal_distribution(world: WorldState, labels: Sequence[str]) -> np.ndarray:
    """Computational-basis outcome probabilities of ``labels`` (big-endian index)."""
    idx = world.layout.indices(labels)
    n = world.state.num_qubits
    rest = [q for q in range(n) if q not in idx]
    probs = np.transpose(world.state.probabilities().reshape([2] * n), list(idx) + rest)
    return probs.reshape(1 << len(idx), -1).sum(axis=1)


def measure_registers(world: WorldState, actor: Party, labels: Sequence[str], seed: int) -> tuple:
    """Projective computational-basis measurement; returns ``(bits, new_world)``."""
    actor = Party(actor)
    labels = tuple(labels)
    _require_owned(world, actor, labels)
    probs = marginal_distribution(world, labels)
    rng = np.random.default_rng(seed)
    cumulative = np.cumsum(probs)
    outcome = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    outcome = min(outcome, len(probs) - 1)
    bits = tuple(int(b) for b in format(outcome, f"0{len(labels)}b"))

    idx = world.layout.indices(labels)
    n = world.state.num_qubits
    t = world.state.amplitudes.reshape([2] * n).copy()
    for q, b in zip(idx, bits):
        sl = [slice(None)] * n
        sl[q] = 1 - b
        t[tuple(sl)] = 0
    amps = t.reshape(-1)
    amps = amps / np.linalg.norm(amps)
    new = world._next("measure", actor, labels, state=StateVector(amps), seed=seed, outcome=bits)
    return bits, new


def replay(transcript: Sequence[Event]) -> WorldState:
    """Re-execute a transcript from its init event."""
    transcript = list(transcript)
    if not transcript or transcript[0].op != "init":
        raise ProtocolError("transcript must start with an init event")
    world = init_protocol(
        [(label, owner, state) for label, owner, state in transcript[0].args["entries"]]
    )
    for e in transcript[1:]:
        a = e.args
        if e.op == "apply_local":
            world = apply_local(world, e.actor, a["gate"], e.labels)
        elif e.op == "send_quantum":
            world = send_quantum(world, e.actor, a["receiver"], e.labels)
        elif e.op == "send_classical":
            world = send_classical(world, e.actor, a["receiver"], e.labels)
        elif e.op == "announce":
            world = announce(world, e.actor, e.labels)
        elif e.op == "trusted_apply_and_split":
            world = trusted_apply_and_split(world, a["gate"], e.labels, a["split"])
        elif e.op == "purify_choice":
            world = purify_choice(world, e.actor, a["choices"], a["choice_labels"], a["dice_prefix"])
        elif e.op == "measure":
            _, world = measure_registers(world, e.actor, e.labels, a["seed"])
        else:
            raise ProtocolError(f"cannot replay operation {e.op!r}")
    return world
