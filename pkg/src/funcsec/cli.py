"""Command-line front end.

Exit codes: 0 affirmative verdict, 1 negative verdict, 2 usage or input error.
Reports go to stdout as JSON (keys sorted, floats to 10 significant digits);
``--pretty`` prints a short human summary instead.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import characterize, eavesdrop, noninteractive, privacy, protocol, simharness
from .core import (
    CapExceeded,
    FunctionTriple,
    InputError,
    JointDistribution,
    dumps,
    format_rational,
    parse_distribution,
    parse_triple,
)
from .info import entropy, joint_from_function, mutual_information
from .protocol import Speaker

DEFAULT_SEED = 7

EXIT_YES, EXIT_NO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg}, line {exc.lineno})") from None


def _triple(path: str) -> FunctionTriple:
    return parse_triple(_read_json(path))


def _dist(path: str) -> JointDistribution:
    return parse_distribution(_read_json(path))


def _protocol(path: str) -> protocol.ProtocolTree:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: protocol must be a JSON object")
    return protocol.tree_from_dict(doc)


def _same_alphabets(triple: FunctionTriple, dist: JointDistribution) -> None:
    if (triple.x_alphabet, triple.y_alphabet) != (dist.x_alphabet, dist.y_alphabet):
        raise UsageError("distribution alphabets differ from the triple's alphabets")


def _covers_all(tree: protocol.ProtocolTree, nx: int, ny: int) -> None:
    rect = tree.rect
    if rect is not None and (rect.rows != tuple(range(nx)) or rect.cols != tuple(range(ny))):
        raise UsageError(f"protocol root rectangle must cover all {nx}x{ny} inputs")


def _bits(v: float) -> float:
    return float(f"{v:.10g}")


# -- subcommands ---------------------------------------------------------------------------


def cmd_analyze(args) -> tuple[dict, int]:
    triple = _triple(args.triple)
    decision = characterize.decide(triple)
    report = {"command": "analyze", **characterize.decision_to_dict(decision)}
    if isinstance(decision, characterize.Computable):
        tree = decision.protocol
        if args.emit_protocol:
            Path(args.emit_protocol).write_text(dumps(protocol.tree_to_dict(tree)))
        if args.dot:
            Path(args.dot).write_text(protocol.to_dot(tree, triple.x_alphabet, triple.y_alphabet))
        return report, EXIT_YES
    return report, EXIT_NO


def cmd_verify(args) -> tuple[dict, int]:
    triple = _triple(args.triple)
    tree = _protocol(args.protocol)
    _covers_all(tree, *triple.shape)
    corr = privacy.check_correct(tree, triple)
    alice = privacy.check_transcript_privacy(tree, triple, Speaker.ALICE)
    bob = privacy.check_transcript_privacy(tree, triple, Speaker.BOB)
    secure = corr.correct and alice.ok and bob.ok
    report = {
        "command": "verify",
        "correctness": corr.to_dict(),
        "privacy": {"alice": alice.to_dict(), "bob": bob.to_dict()},
        "secure": secure,
    }
    return report, EXIT_YES if secure else EXIT_NO


def cmd_claim1(args) -> tuple[dict, int]:
    triple = _triple(args.triple)
    tree = _protocol(args.protocol)
    dist = _dist(args.dist)
    _same_alphabets(triple, dist)
    _covers_all(tree, *triple.shape)
    audit = privacy.claim1_audit(tree, triple, dist)
    suite = privacy.cmi_audit_suite(tree, triple, samples=args.samples, seed=args.seed)
    ok = audit.private and suite.all_zero
    report = {"command": "claim1", "seed": args.seed, "audit": audit.to_dict(), "suite": suite.to_dict(),
              "private": ok}
    return report, EXIT_YES if ok else EXIT_NO


def cmd_perfect(args) -> tuple[dict, int]:
    triple = _triple(args.triple)
    dist = _dist(args.dist)
    _same_alphabets(triple, dist)
    report: dict = {"command": "perfect"}
    if args.search:
        result = noninteractive.search_deterministic_u(dist, triple)
        report["search"] = result.to_dict(triple.x_alphabet)
        channel = result.channel
        ok = result.partition is not None
    else:
        channel = noninteractive.parse_channel(_read_json(args.channel))
        check = noninteractive.check_perfect(channel, dist, triple)
        report["report"] = check.to_dict()
        ok = check.secure
    if ok:
        tree = noninteractive.one_shot_protocol(channel, dist, triple)
        one = noninteractive.check_one_shot(tree, dist, triple)
        report["one_shot"] = {"error": format_rational(one.error), "leakage_zero": one.leakage_zero,
                              "leakage_bits": _bits(one.leakage_bits)}
    report["secure"] = ok
    return report, EXIT_YES if ok else EXIT_NO


def _instance(path: str) -> eavesdrop.EavesdropInstance:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: instance must be a JSON object")
    return eavesdrop.parse_instance(doc)


def cmd_leakage(args) -> tuple[dict, int]:
    tree = _protocol(args.protocol)
    inst = _instance(args.instance)
    rep = eavesdrop.leakage(tree, inst, args.n)
    ok = rep.exact_zero and rep.error_prob == 0
    return {"command": "leakage", **rep.to_dict(), "secure": ok}, EXIT_YES if ok else EXIT_NO


def cmd_frontier(args) -> tuple[dict, int]:
    inst = _instance(args.instance)
    res = eavesdrop.brute_force_noninteractive(inst, args.m1, args.m2)
    if args.csv:
        Path(args.csv).write_text(res.to_csv())
    ok = res.zero_error_witness is not None and res.zero_error_witness.exact_zero
    return {"command": "frontier", "m1": args.m1, "m2": args.m2, **res.to_dict()}, EXIT_YES if ok else EXIT_NO


def cmd_omniscience(args) -> tuple[dict, int]:
    dist = _dist(args.dist)
    doc = _read_json(args.g_table)
    table = doc.get("g") if isinstance(doc, dict) else doc
    if not isinstance(table, list):
        raise UsageError(f"{args.g_table}: expected a table or an object with a 'g' table")
    res = eavesdrop.omniscience_feasible(dist, table)
    return {"command": "omniscience", **res.to_dict()}, EXIT_YES if res.feasible else EXIT_NO


def cmd_simulate(args) -> tuple[dict, int]:
    tree = _protocol(args.protocol)
    dist = _dist(args.dist)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    stats = simharness.run_trials(tree, dist, args.trials, args.seed)
    if args.csv:
        Path(args.csv).write_text(stats.to_csv(dist))
    report = {"command": "simulate", **stats.to_dict(dist),
              "tv_distance": _bits(simharness.tv_distance(stats, tree, dist))}
    return report, EXIT_YES


def cmd_info(args) -> tuple[dict, int]:
    triple = _triple(args.triple)
    dist = _dist(args.dist)
    _same_alphabets(triple, dist)

    def h_of(table):
        pmf: dict = {}
        for (x, y), p in dist.items():
            pmf[table[x][y]] = pmf.get(table[x][y], 0) + p
        return _bits(entropy(pmf))

    joint = joint_from_function(("X", "Y"), dist.items())
    report = {"command": "info", "H(F)": h_of(triple.f), "H(G)": h_of(triple.g), "H(H)": h_of(triple.h),
              "I(X;Y)": _bits(mutual_information(joint, "X", "Y"))}
    return report, EXIT_YES


# -- human rendering -------------------------------------------------------------------------


def render(report: dict) -> str:
    cmd = report.get("command")
    lines = [f"[{cmd}]"]
    if cmd == "analyze":
        if report["verdict"] == "computable":
            lines.append("securely computable; synthesized protocol attached in JSON mode")
        else:
            lines.append(f"not securely computable; forbidden rect rows={report['rect']['rows']} "
                         f"cols={report['rect']['cols']}")
    else:
        for k, v in sorted(report.items()):
            if k == "command":
                continue
            text = json.dumps(v, sort_keys=True)
            lines.append(f"{k}: {text if len(text) < 120 else text[:117] + '...'}")
    return "\n".join(lines) + "\n"


# -- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="funcsec", description="Function-level two-party secure computation toolkit.")
    p.add_argument("--pretty", action="store_true", help="human-readable summary instead of JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=fn)
        return sp

    sp = add("analyze", cmd_analyze, "decide secure computability and synthesize a protocol")
    sp.add_argument("--triple", required=True)
    sp.add_argument("--emit-protocol")
    sp.add_argument("--dot")

    sp = add("verify", cmd_verify, "check correctness and transcript privacy of a protocol")
    sp.add_argument("--triple", required=True)
    sp.add_argument("--protocol", required=True)

    sp = add("claim1", cmd_claim1, "conditional mutual information audit of a protocol")
    sp.add_argument("--triple", required=True)
    sp.add_argument("--protocol", required=True)
    sp.add_argument("--dist", required=True)
    sp.add_argument("--samples", type=int, default=32)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sp = add("perfect", cmd_perfect, "one-message perfect security check or witness search")
    sp.add_argument("--triple", required=True)
    sp.add_argument("--dist", required=True)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--channel")
    grp.add_argument("--search", action="store_true")

    sp = add("leakage", cmd_leakage, "exact eavesdropper leakage of a block protocol")
    sp.add_argument("--protocol", required=True)
    sp.add_argument("--instance", required=True)
    sp.add_argument("--n", type=int, default=1)

    sp = add("frontier", cmd_frontier, "exhaustive non-interactive (error, leakage) frontier")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--m1", type=int, required=True)
    sp.add_argument("--m2", type=int, required=True)
    sp.add_argument("--csv")

    sp = add("omniscience", cmd_omniscience, "check H(g(X,Y)) < I(X;Y)")
    sp.add_argument("--dist", required=True)
    sp.add_argument("--g-table", required=True)

    sp = add("simulate", cmd_simulate, "run the two-party simulation harness")
    sp.add_argument("--protocol", required=True)
    sp.add_argument("--dist", required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--csv")

    sp = add("info", cmd_info, "entropies of f, g, h and I(X;Y) under a distribution")
    sp.add_argument("--triple", required=True)
    sp.add_argument("--dist", required=True)
    return p


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    try:
        report, code = args.func(args)
    except (UsageError, InputError, CapExceeded, ValueError, KeyError, TypeError) as exc:
        print(f"funcsec {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"funcsec {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(report) if args.pretty else dumps(report))
    return code


def main() -> None:
    sys.exit(dispatch())
