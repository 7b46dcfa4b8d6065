"""In-process two-party simulation of protocol trees.

Each trial samples an input pair, hands x to an Alice endpoint and y to a
Bob endpoint, and lets them exchange child indices over a lossless ordered
link.  An eavesdropper tap on the link records the transcript.  Every trial
draws from its own seeded streams, so results do not depend on the order
in which trials are run.
"""

from __future__ import annotations

import math
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .core import JointDistribution
from .info import joint_from_function, mutual_information
from .protocol import Internal, Leaf, Node, ProtocolTree, Speaker, Transcript, draw_child, transcript_pmf


class PartyEndpoint:
    """One party's view: its own input, the messages it has seen, its own coins."""

    def __init__(self, role: Speaker, own_input: int, root: Node, rng: random.Random):
        self.role = role
        self._input = own_input
        self.node = root
        self.rng = rng
        self.seen: list[int] = []
        self.input_reads = 0

    def _read_input(self) -> int:
        self.input_reads += 1
        return self._input

    def speak(self) -> int:
        node = self.node
        if not isinstance(node, Internal) or node.speaker is not self.role:
            raise RuntimeError(f"{self.role.name} asked to speak out of turn")
        own = self._read_input()
        if own not in node.branch:
            raise ValueError(f"{self.role.name} input {own} is outside {node.rect}")
        msg = draw_child(node.branch[own], self.rng)
        self._advance(msg)
        return msg

    def receive(self, msg: int) -> None:
        self._advance(msg)

    def _advance(self, msg: int) -> None:
        self.seen.append(msg)
        self.node = self.node.children[msg]

    @property
    def done(self) -> bool:
        return isinstance(self.node, Leaf)


class Link:
    """Lossless ordered link with a passive tap."""

    def __init__(self):
        self.queue: deque[tuple[Speaker, int]] = deque()
        self.tap: list[int] = []

    def send(self, sender: Speaker, msg: int) -> None:
        self.queue.append((sender, msg))
        self.tap.append(msg)

    def deliver(self) -> tuple[Speaker, int]:
        return self.queue.popleft()


def _trial_rng(seed: int, trial: int, stream: str) -> random.Random:
    return random.Random(f"{seed}:{trial}:{stream}")


def _sample_input(dist: JointDistribution, rng: random.Random) -> tuple[int, int]:
    cells = [(c, p) for c, p in dist.items() if p]
    den = math.lcm(*(p.denominator for _, p in cells))
    u = rng.randrange(den)
    acc = 0
    for c, p in cells:
        acc += p.numerator * (den // p.denominator)
        if u < acc:
            return c
    raise AssertionError("distribution does not sum to 1")


def run_once(tree: ProtocolTree, x: int, y: int, seed: int, trial: int) -> tuple[Transcript, PartyEndpoint, PartyEndpoint]:
    alice = PartyEndpoint(Speaker.ALICE, x, tree.root, _trial_rng(seed, trial, "alice"))
    bob = PartyEndpoint(Speaker.BOB, y, tree.root, _trial_rng(seed, trial, "bob"))
    parties = {Speaker.ALICE: alice, Speaker.BOB: bob}
    link = Link()
    while not alice.done:
        speaker = alice.node.speaker
        link.send(speaker, parties[speaker].speak())
        sender, msg = link.deliver()
        parties[sender.other].receive(msg)
    if alice.seen != bob.seen:
        raise AssertionError("parties disagree on the transcript")
    return Transcript(tuple(link.tap), alice.node.output), alice, bob


@dataclass
class EmpiricalStats:
    trials: int
    seed: int
    transcripts: dict[tuple[int, int], Counter] = field(default_factory=dict)
    outputs: Counter = field(default_factory=Counter)

    def joint_counts(self) -> Counter:
        out: Counter = Counter()
        for cell, counts in self.transcripts.items():
            for t, k in counts.items():
                out[cell, t] += k
        return out

    def to_dict(self, dist: JointDistribution | None = None) -> dict:
        def label(cell):
            if dist is None:
                return f"{cell[0]},{cell[1]}"
            return f"{dist.x_alphabet[cell[0]]},{dist.y_alphabet[cell[1]]}"

        return {
            "trials": self.trials,
            "seed": self.seed,
            "transcripts": {
                label(cell): {str(t): k for t, k in sorted(c.items(), key=lambda kv: str(kv[0]))}
                for cell, c in sorted(self.transcripts.items())
            },
            "outputs": dict(sorted(self.outputs.items())),
        }

    def to_csv(self, dist: JointDistribution | None = None) -> str:
        lines = ["x,y,transcript,count"]
        for cell, c in sorted(self.transcripts.items()):
            xs = dist.x_alphabet[cell[0]] if dist else cell[0]
            ys = dist.y_alphabet[cell[1]] if dist else cell[1]
            for t, k in sorted(c.items(), key=lambda kv: str(kv[0])):
                lines.append(f'"{xs}","{ys}",{t},{k}')
        return "\n".join(lines) + "\n"


def run_trials(tree: ProtocolTree, dist: JointDistribution, trials: int, seed: int = 7) -> EmpiricalStats:
    if trials < 1:
        raise ValueError("trials must be positive")
    for x, y in dist.support():
        if not tree.covers(x, y):
            raise ValueError(f"support point ({x}, {y}) lies outside the protocol's root rectangle")
    stats = EmpiricalStats(trials, seed)
    for trial in range(trials):
        x, y = _sample_input(dist, _trial_rng(seed, trial, "input"))
        t, _, _ = run_once(tree, x, y, seed, trial)
        stats.transcripts.setdefault((x, y), Counter())[t] += 1
        stats.outputs[t.output] += 1
    return stats


def tv_distance(stats: EmpiricalStats, tree: ProtocolTree, dist: JointDistribution) -> float:
    """Total variation between empirical and exact laws of (input, transcript)."""
    exact: dict = {}
    for (x, y), p in dist.items():
        if p:
            for t, q in transcript_pmf(tree, x, y).items():
                exact[(x, y), t] = p * q
    emp = stats.joint_counts()
    keys = set(exact) | set(emp)
    n = stats.trials
    return float(sum(abs(Fraction(emp.get(k, 0), n) - exact.get(k, 0)) for k in keys) / 2)


def empirical_leakage(stats: EmpiricalStats, g_table) -> float:
    """Plug-in estimate of I(M; G) from the recorded transcripts."""
    cells = []
    for (x, y), counts in stats.transcripts.items():
        for t, k in counts.items():
            cells.append(((t, g_table[x][y]), Fraction(k, stats.trials)))
    return mutual_information(joint_from_function(("M", "G"), cells), "M", "G")
