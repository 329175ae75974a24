"""Command-line entry point.

    biparti oot --channel classical --format json
    biparti coinflip --shots 10000 --seed 7
    biparti eprbit
    biparti commit-attack
    biparti selftest

Exit status: 0 when every golden check passes (a broken protocol is a
finding, not a failure), 2 when a golden check fails, 1 on usage errors.
The seed falls back to ``$BIPARTI_SEED``, then 0.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import nogo, scenarios
from .selftest import run_selftest

SUBCOMMANDS = ("oot", "coinflip", "eprbit", "commit-attack", "selftest")

EXIT_OK, EXIT_USAGE, EXIT_GOLDEN = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    channel: str = scenarios.QUANTUM
    shots: int = 10_000
    seed: int = 0
    tolerance: float = 1e-9
    format: str = "text"
    alice: str = scenarios.SUPERPOSED
    bob: str = "0"

    def __post_init__(self):
        if self.scenario not in SUBCOMMANDS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_seed():
    raw = os.environ.get("BIPARTI_SEED")
    if raw is None:
        return 0
    try:
        return int(raw, 0)
    except ValueError:
        raise SystemExit(f"BIPARTI_SEED is not an integer: {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (default: $BIPARTI_SEED or 0)")
    common.add_argument("--tolerance", type=float, default=1e-9, help="verdict tolerance on trace distances")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = _Parser(prog="biparti", description="Two-party quantum protocol simulator")
    sub = parser.add_subparsers(dest="scenario", required=True, parser_class=_Parser)
    oot = sub.add_parser("oot", parents=[common], help="trusted-party O-OT gate")
    oot.add_argument("--channel", choices=(scenarios.QUANTUM, scenarios.CLASSICAL), default=scenarios.QUANTUM)
    oot.add_argument("--alice", default=scenarios.SUPERPOSED,
                     help="'superposed' or two bits b0b1, e.g. 10")
    oot.add_argument("--bob", default="0", help="'superposed', 0 or 1")
    coin = sub.add_parser("coinflip", parents=[common], help="EPR coin flip via the trusted party")
    coin.add_argument("--shots", type=int, default=10_000)
    sub.add_parser("eprbit", parents=[common], help="EPR pair versus shared random bit")
    sub.add_parser("commit-attack", parents=[common], help="toy commitment and Alice's switch")
    sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    return parser


def parse_config(argv) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    kwargs = {k: v for k, v in vars(ns).items() if v is not None}
    kwargs.setdefault("seed", _default_seed())
    try:
        return RunConfig(**kwargs)
    except ValueError as exc:
        parser.error(str(exc))


def _parse_alice(raw):
    if raw == scenarios.SUPERPOSED:
        return raw
    if len(raw) == 2 and set(raw) <= {"0", "1"}:
        return (int(raw[0]), int(raw[1]))
    raise ValueError(f"--alice must be 'superposed' or two bits, got {raw!r}")


def _parse_bob(raw):
    if raw == scenarios.SUPERPOSED:
        return raw
    if raw in ("0", "1"):
        return int(raw)
    raise ValueError(f"--bob must be 'superposed', 0 or 1, got {raw!r}")


def run_scenario(cfg: RunConfig) -> scenarios.ScenarioOutcome:
    if cfg.scenario == "oot":
        return scenarios.run_oot(cfg.channel, _parse_alice(cfg.alice), _parse_bob(cfg.bob))
    if cfg.scenario == "coinflip":
        return scenarios.run_epr_coinflip(cfg.shots, cfg.seed)
    if cfg.scenario == "eprbit":
        return scenarios.run_epr_vs_random_bit()
    if cfg.scenario == "commit-attack":
        return scenarios.run_toy_commitment_attack()
    raise ValueError(f"not a scenario: {cfg.scenario}")


def _config_dict(cfg):
    d = asdict(cfg)
    del d["format"]
    if cfg.scenario != "oot":
        for key in ("channel", "alice", "bob"):
            d.pop(key)
    if cfg.scenario != "coinflip":
        d.pop("shots")
    return d


def _matrix_dict(m):
    m = np.asarray(m)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def build_report(cfg: RunConfig, outcome: scenarios.ScenarioOutcome) -> dict:
    reports = [
        nogo.SecurityReport(r.concealment_distance, tolerance=cfg.tolerance,
                            cheat_unitary=r.cheat_unitary, label=r.label).to_dict()
        for r in outcome.reports
    ]
    transcript = []
    if outcome.world is not None:
        transcript = [
            {"step": e.step, "actor": str(e.actor or "-"), "op": e.op, "labels": list(e.labels)}
            for e in outcome.world.transcript
        ]
    return {
        "scenario": outcome.name,
        "config": _config_dict(cfg),
        "reports": reports,
        "golden_deltas": {k: float(v) for k, v in outcome.golden_deltas.items()},
        "golden_tolerances": {k: float(v) for k, v in outcome.golden_tolerances.items()},
        "passed": outcome.passed,
        "samples": outcome.samples,
        "values": {k: float(v) for k, v in outcome.values.items()},
        "densities": {k: _matrix_dict(v) for k, v in outcome.densities.items()},
        "transcript": transcript,
    }


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _grid(m, places=6):
    width = places + 3
    return "\n".join("  " + " ".join(f"{x:{width}.{places}f}" for x in row) for row in m)


def to_text(report: dict) -> str:
    lines = [f"scenario: {report['scenario']}"]
    lines.append("config: " + ", ".join(f"{k}={v}" for k, v in report["config"].items()))
    for r in report["reports"]:
        lines.append(
            f"report {r['label']}: distance={r['concealment_distance']:.6g} "
            f"guess={r['guess_probability']:.6f} verdict={r['verdict']}"
        )
    for k, v in report["golden_deltas"].items():
        tol = report["golden_tolerances"][k]
        lines.append(f"golden {k}: delta={v:.3e} tol={tol:.1e} {'ok' if v <= tol else 'FAIL'}")
    for k, v in report["values"].items():
        lines.append(f"value {k}: {v:.12g}")
    if report["samples"]:
        lines.append("samples: " + " ".join(f"{k}={v}" for k, v in report["samples"].items()))
    for name, m in report["densities"].items():
        lines.append(f"density {name} (real):")
        lines.append(_grid(m["re"]))
        if np.max(np.abs(m["im"])) > 5e-7:
            lines.append(f"density {name} (imag):")
            lines.append(_grid(m["im"]))
    lines.append(f"transcript: {len(report['transcript'])} events")
    for e in report["transcript"]:
        lines.append(f"  {e['step']}\t{e['actor']}\t{e['op']}\t{','.join(e['labels'])}")
    lines.append("PASS" if report["passed"] else "GOLDEN CHECK FAILED")
    return "\n".join(lines)


def _selftest(cfg):
    results = run_selftest(cfg.seed)
    passed = all(ok for _, ok, _ in results)
    if cfg.format == "json":
        print(to_json({
            "scenario": "selftest",
            "config": _config_dict(cfg),
            "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results],
            "passed": passed,
        }))
    else:
        for name, ok, detail in results:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return EXIT_OK if passed else EXIT_GOLDEN


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if cfg.scenario == "selftest":
        return _selftest(cfg)
    try:
        outcome = run_scenario(cfg)
    except ValueError as exc:
        print(f"biparti: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = build_report(cfg, outcome)
    print(to_json(report) if cfg.format == "json" else to_text(report))
    return EXIT_OK if report["passed"] else EXIT_GOLDEN


if __name__ == "__main__":
    sys.exit(main())
