"""Invariant suite run by ``biparti selftest``.

Each check returns ``(ok, detail)``; :func:`run_selftest` collects them in
order.  The pytest suite covers the same ground in more depth.
"""
from __future__ import annotations

from itertools import product

import numpy as np

from . import nogo, qlin, scenarios
from .randomized import (random_density, random_low_rank_state, random_one_sided_protocol,
                         random_state, random_unitary)


def check_gate_table(rng):
    phi = qlin.bell_state("00")
    worst = 0.0
    for b in product((0, 1), repeat=2):
        out = qlin.apply_unitary(phi, qlin.standard_gate("r_pauli", b), [0])
        worst = max(worst, np.max(np.abs(out.amplitudes - qlin.bell_state(f"{b[0]}{b[1]}").amplitudes)))
    return worst <= qlin.GATE_TOL, f"max entry error {worst:.2e}"


def check_by_table(rng):
    by = qlin.standard_gate("by_bilateral")
    worst = 0.0
    for src, dst in {"00": "00", "01": "10", "10": "01", "11": "11"}.items():
        out = qlin.apply_unitary(qlin.bell_state(src), by, [0, 1])
        worst = max(worst, out.phase_distance(qlin.bell_state(dst)))
    return worst <= qlin.GATE_TOL, f"max ray error {worst:.2e}"


def check_norm_preservation(rng, trials=50):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, min(n, 3) + 1))
        targets = rng.permutation(n)[:k]
        out = qlin.apply_unitary(random_state(rng, n), random_unitary(rng, k), targets)
        worst = max(worst, abs(np.linalg.norm(out.amplitudes) - 1))
    return worst <= qlin.NORM_TOL, f"max norm defect {worst:.2e}"


def check_partial_trace_composition(rng, trials=30):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        rho = random_density(rng, n)
        order = rng.permutation(n)
        k1 = int(rng.integers(1, n))
        k2 = int(rng.integers(0, n - k1 + 1))
        keep1 = sorted(order[:k1])
        both = sorted(order[:k1 + k2])
        inner = qlin.partial_trace(rho, both)
        pos = [both.index(q) for q in keep1]
        worst = max(worst, np.max(np.abs(
            qlin.partial_trace(inner, pos).matrix - qlin.partial_trace(rho, keep1).matrix)))
    return worst <= qlin.NORM_TOL, f"max entry error {worst:.2e}"


def check_schmidt_reconstruction(rng, trials=200):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        state = random_state(rng, n)
        k = int(rng.integers(1, n))
        left = rng.permutation(n)[:k]
        sd = qlin.schmidt_decompose(state, left)
        worst = max(worst, np.linalg.norm(sd.reconstruct().amplitudes - state.amplitudes),
                    abs(np.sum(sd.coefficients ** 2) - 1))
    return worst <= 1e-8, f"max reconstruction error {worst:.2e}"


def check_trace_distance_metric(rng, trials=100):
    worst_sym, worst_tri = 0.0, 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        a, b, c = (random_density(rng, n) for _ in range(3))
        worst_sym = max(worst_sym, abs(qlin.trace_distance(a, b) - qlin.trace_distance(b, a)))
        excess = qlin.trace_distance(a, c) - qlin.trace_distance(a, b) - qlin.trace_distance(b, c)
        worst_tri = max(worst_tri, excess)
    ok = worst_sym == 0.0 and worst_tri <= qlin.NORM_TOL
    return ok, f"asymmetry {worst_sym:.2e}, triangle excess {worst_tri:.2e}"


def check_cheat_synthesis(rng, trials=100):
    worst = 0.0
    for _ in range(trials):
        a, b = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        v0 = random_low_rank_state(rng, a, b)
        side = tuple(range(a))
        v1 = qlin.apply_unitary(v0, random_unitary(rng, a), side)
        w = nogo.synth_cheat_unitary(v0, v1, side)
        worst = max(worst, nogo.action_error(w, v0, v1, side))
    return worst <= nogo.ACTION_TOL, f"max action error {worst:.2e}"


def check_lo_extraction(rng, trials=20):
    mismatches = 0
    for t in range(trials):
        proto = random_one_sided_protocol(rng, alice_bits=1 + t % 2, bob_values=2 + t % 2)
        result = nogo.lo_attack(**proto)
        direct = _direct_table(proto)
        mismatches += sum(result.table[key] != direct[key] for key in direct)
    return mismatches == 0, f"{mismatches} table mismatches"


def _direct_table(proto):
    joint = proto["joint"]
    n = joint.num_qubits
    table = {}
    for i, j in product(proto["alice_inputs"], proto["bob_inputs"]):
        bits = ["0"] * n
        for reg, value in ((proto["alice_register"], i), (proto["bob_register"], j)):
            for q, bit in zip(reg, format(value, f"0{len(reg)}b")):
                bits[q] = bit
        out = joint.matrix[:, int("".join(bits), 2)]
        k = int(np.argmax(np.abs(out)))
        full = format(k, f"0{n}b")
        table[(i, j)] = tuple(int(full[q]) for q in proto["result_readout"])
    return table


def check_scenarios(rng):
    outcomes = [
        scenarios.run_oot(scenarios.QUANTUM),
        scenarios.run_oot(scenarios.CLASSICAL),
        scenarios.run_epr_coinflip(2000, int(rng.integers(2 ** 62))),
        scenarios.run_epr_vs_random_bit(),
        scenarios.run_toy_commitment_attack(),
    ]
    failed = [f"{o.name}:{k}" for o in outcomes for k in o.failed_checks]
    return not failed, "all golden checks pass" if not failed else f"failed {failed}"


def check_honest_oot(rng):
    wrong = []
    for (b0, b1), c in product(product((0, 1), repeat=2), (0, 1)):
        for channel in (scenarios.QUANTUM, scenarios.CLASSICAL):
            dist = scenarios.bob_readout(scenarios.oot_world(channel, (b0, b1), c))
            if dist[(b0, b1)[c]] < 1 - qlin.NORM_TOL:
                wrong.append((channel, b0, b1, c))
    return not wrong, "Bob reads b_c in all 16 runs" if not wrong else f"wrong readout {wrong}"


CHECKS = (
    ("gate_table", check_gate_table),
    ("by_permutation", check_by_table),
    ("norm_preservation", check_norm_preservation),
    ("partial_trace_composition", check_partial_trace_composition),
    ("schmidt_reconstruction", check_schmidt_reconstruction),
    ("trace_distance_metric", check_trace_distance_metric),
    ("cheat_synthesis", check_cheat_synthesis),
    ("lo_extraction", check_lo_extraction),
    ("scenario_golden_checks", check_scenarios),
    ("honest_oot_readout", check_honest_oot),
)


def run_selftest(seed: int = 0) -> list:
    results = []
    for name, check in CHECKS:
        rng = np.random.default_rng([seed, len(results)])
        try:
            ok, detail = check(rng)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
