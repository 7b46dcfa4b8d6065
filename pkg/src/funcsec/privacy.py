"""Correctness and privacy checks for protocols computing a function triple.

Transcript privacy is checked pairwise and exactly: whenever two inputs
share Alice's x, agree on f and disagree on g, their transcript
distributions must coincide (and symmetrically for Bob with h).  The
information-theoretic form is audited on the joint of (X, Y, F, G, H, M):
both I(M; G | F, X) and I(M; H | F, Y) must vanish.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .core import FunctionTriple, JointDistribution, format_rational
from .info import Joint, conditional_mutual_information, exact_cond_independent, joint_from_function
from .protocol import ProtocolTree, Speaker, Transcript, transcript_pmf

AUGMENTED_NAMES = ("X", "Y", "F", "G", "H", "M")


# -- correctness ---------------------------------------------------------------


@dataclass(frozen=True)
class CorrectnessReport:
    errors: tuple[tuple[Fraction, ...], ...]

    @property
    def max_error(self) -> Fraction:
        return max(max(row) for row in self.errors)

    @property
    def perfect(self) -> bool:
        return self.max_error == 0

    @property
    def correct(self) -> bool:
        """Every input is answered correctly with probability above one half."""
        return self.max_error < Fraction(1, 2)

    def to_dict(self) -> dict:
        return {
            "errors": [[format_rational(e) for e in row] for row in self.errors],
            "max_error": format_rational(self.max_error),
            "perfect": self.perfect,
            "correct": self.correct,
        }


def check_correct(tree: ProtocolTree, triple: FunctionTriple) -> CorrectnessReport:
    nx, ny = triple.shape
    rows = []
    for x in range(nx):
        row = []
        for y in range(ny):
            pmf = transcript_pmf(tree, x, y)
            row.append(sum((p for t, p in pmf.items() if t.output != triple.f[x][y]), Fraction(0)))
        rows.append(tuple(row))
    return CorrectnessReport(tuple(rows))


# -- transcript privacy --------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    first: tuple[int, int]
    second: tuple[int, int]
    transcript: Transcript
    p_first: Fraction
    p_second: Fraction

    def to_dict(self) -> dict:
        return {
            "inputs": [list(self.first), list(self.second)],
            "transcript": {"messages": list(self.transcript.messages), "output": self.transcript.output},
            "probabilities": [format_rational(self.p_first), format_rational(self.p_second)],
        }


@dataclass(frozen=True)
class PrivacyReport:
    side: Speaker
    violation: Violation | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def to_dict(self) -> dict:
        return {
            "side": "alice" if self.side is Speaker.ALICE else "bob",
            "status": "ok" if self.ok else "violation",
            "violation": None if self.ok else self.violation.to_dict(),
        }


def qualifying_pairs(triple: FunctionTriple, side: Speaker) -> Iterator[tuple[tuple[int, int], tuple[int, int]]]:
    """Input pairs the protected party must not be able to tell apart.

    Alice side: (x, y1), (x, y2) with equal f and different g.
    Bob side: (x1, y), (x2, y) with equal f and different h.
    """
    nx, ny = triple.shape
    f = triple.f
    if side is Speaker.ALICE:
        g = triple.g
        for x in range(nx):
            for y1 in range(ny):
                for y2 in range(y1 + 1, ny):
                    if f[x][y1] == f[x][y2] and g[x][y1] != g[x][y2]:
                        yield (x, y1), (x, y2)
    else:
        h = triple.h
        for y in range(ny):
            for x1 in range(nx):
                for x2 in range(x1 + 1, nx):
                    if f[x1][y] == f[x2][y] and h[x1][y] != h[x2][y]:
                        yield (x1, y), (x2, y)


def _first_difference(p: dict, q: dict) -> Transcript | None:
    for t in sorted(set(p) | set(q), key=lambda t: (t.messages, t.output)):
        if p.get(t, 0) != q.get(t, 0):
            return t
    return None


def check_transcript_privacy(tree: ProtocolTree, triple: FunctionTriple, side: Speaker) -> PrivacyReport:
    cache: dict[tuple[int, int], dict] = {}

    def pmf(cell):
        if cell not in cache:
            cache[cell] = transcript_pmf(tree, *cell)
        return cache[cell]

    for a, b in qualifying_pairs(triple, side):
        pa, pb = pmf(a), pmf(b)
        t = _first_difference(pa, pb)
        if t is not None:
            return PrivacyReport(side, Violation(a, b, t, pa.get(t, Fraction(0)), pb.get(t, Fraction(0))))
    return PrivacyReport(side)


# -- conditional mutual information audit over distributions ---------------------


def augmented_joint(tree: ProtocolTree, triple: FunctionTriple, dist: JointDistribution) -> Joint:
    """Exact joint of (X, Y, F, G, H, M), M being the whole transcript."""
    if dist.shape != triple.shape:
        raise ValueError(f"distribution shape {dist.shape} does not match triple shape {triple.shape}")

    def cells():
        for (x, y), p in dist.items():
            if not p:
                continue
            for t, q in transcript_pmf(tree, x, y).items():
                yield (x, y, triple.f[x][y], triple.g[x][y], triple.h[x][y], t), p * q

    return joint_from_function(AUGMENTED_NAMES, cells())


@dataclass(frozen=True)
class CmiAuditReport:
    alice_cmi_zero: bool
    bob_cmi_zero: bool
    alice_cmi: float
    bob_cmi: float

    @property
    def private(self) -> bool:
        return self.alice_cmi_zero and self.bob_cmi_zero

    def to_dict(self) -> dict:
        return {
            "alice_cmi_zero": self.alice_cmi_zero,
            "bob_cmi_zero": self.bob_cmi_zero,
            "cmi_values": {"alice": float(f"{self.alice_cmi:.10g}"), "bob": float(f"{self.bob_cmi:.10g}")},
        }


def claim1_audit(tree: ProtocolTree, triple: FunctionTriple, dist: JointDistribution) -> CmiAuditReport:
    joint = augmented_joint(tree, triple, dist)
    return CmiAuditReport(
        alice_cmi_zero=exact_cond_independent(joint, "M", "G", ("F", "X")),
        bob_cmi_zero=exact_cond_independent(joint, "M", "H", ("F", "Y")),
        alice_cmi=conditional_mutual_information(joint, "M", "G", ("F", "X")),
        bob_cmi=conditional_mutual_information(joint, "M", "H", ("F", "Y")),
    )


def two_point_distribution(triple: FunctionTriple, a: tuple[int, int], b: tuple[int, int]) -> JointDistribution:
    nx, ny = triple.shape
    half = Fraction(1, 2)
    pmf = [[Fraction(0)] * ny for _ in range(nx)]
    pmf[a[0]][a[1]] += half
    pmf[b[0]][b[1]] += half
    return JointDistribution(triple.x_alphabet, triple.y_alphabet, pmf)


def random_full_support(triple: FunctionTriple, rng: random.Random, max_weight: int = 16) -> JointDistribution:
    nx, ny = triple.shape
    weights = [[rng.randint(1, max_weight) for _ in range(ny)] for _ in range(nx)]
    return JointDistribution.from_weights(triple.x_alphabet, triple.y_alphabet, weights)


@dataclass
class CmiAuditSuite:
    """Audit over every qualifying two-point distribution plus seeded random ones."""

    seed: int
    samples: int
    two_point: list[tuple[Speaker, tuple, tuple, CmiAuditReport]] = field(default_factory=list)
    sampled: list[CmiAuditReport] = field(default_factory=list)

    @property
    def all_zero(self) -> bool:
        return all(r.private for *_, r in self.two_point) and all(r.private for r in self.sampled)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "all_zero": self.all_zero,
            "two_point": [
                {"side": "alice" if s is Speaker.ALICE else "bob", "inputs": [list(a), list(b)], **r.to_dict()}
                for s, a, b, r in self.two_point
            ],
            "sampled_nonzero": sum(not r.private for r in self.sampled),
        }


def cmi_audit_suite(tree: ProtocolTree, triple: FunctionTriple, samples: int = 32, seed: int = 7) -> CmiAuditSuite:
    suite = CmiAuditSuite(seed=seed, samples=samples)
    for side in (Speaker.ALICE, Speaker.BOB):
        for a, b in qualifying_pairs(triple, side):
            report = claim1_audit(tree, triple, two_point_distribution(triple, a, b))
            suite.two_point.append((side, a, b, report))
    rng = random.Random(seed)
    for _ in range(samples):
        suite.sampled.append(claim1_audit(tree, triple, random_full_support(triple, rng)))
    return suite
