"""One-message secure computation with privacy against the receiver.

Alice (rows) sends U drawn from a channel p(u|x); Bob (columns) must
recover f from (U, y) while learning nothing more about g.  A channel is a
perfect-security witness when H(F | U, Y) = 0 and I(U; G | F, Y) = 0; the
Markov chain U - X - Y holds automatically because U is generated from x
alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .core import (
    DEFAULT_LIMITS,
    Alphabet,
    CapExceeded,
    FunctionTriple,
    InputError,
    JointDistribution,
    Limits,
    SubRect,
    format_rational,
    parse_rational,
)
from .info import Joint, conditional_mutual_information, find_dependence, joint_from_function
from .protocol import Internal, Leaf, ProtocolTree, Speaker, deterministic_node, transcript_pmf


@dataclass(frozen=True)
class Channel:
    u_alphabet: Alphabet
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(p) for p in row) for row in self.matrix)
        for i, row in enumerate(rows):
            if len(row) != len(self.u_alphabet):
                raise InputError(f"expected {len(self.u_alphabet)} entries", f"$.rows[{i}]")
            if any(p < 0 for p in row) or sum(row) != 1:
                raise InputError("row must be nonnegative and sum to 1", f"$.rows[{i}]")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def deterministic(cls, assignment: Sequence[int], labels: Sequence[str] | None = None) -> "Channel":
        k = max(assignment) + 1
        labels = labels or [str(i) for i in range(k)]
        return cls(Alphabet(tuple(labels)),
                   tuple(tuple(Fraction(int(u == a)) for u in range(k)) for a in assignment))

    def to_dict(self) -> dict:
        return {"u_alphabet": list(self.u_alphabet),
                "rows": [[format_rational(p) for p in row] for row in self.matrix]}


def parse_channel(doc: Mapping) -> Channel:
    for key in ("u_alphabet", "rows"):
        if key not in doc:
            raise InputError(f"missing field '{key}'")
    rows = [[parse_rational(p, f"$.rows[{i}][{j}]") for j, p in enumerate(r)] for i, r in enumerate(doc["rows"])]
    return Channel(Alphabet(tuple(doc["u_alphabet"])), rows)


@dataclass(frozen=True)
class PerfectSecurityReport:
    zero_cond_entropy_ok: bool
    privacy_ok: bool
    violating_cell: tuple | None = None
    markov_ok: bool = True

    @property
    def secure(self) -> bool:
        return self.markov_ok and self.zero_cond_entropy_ok and self.privacy_ok

    def to_dict(self) -> dict:
        return {
            "markov_ok": self.markov_ok,
            "zero_cond_entropy_ok": self.zero_cond_entropy_ok,
            "privacy_ok": self.privacy_ok,
            "secure": self.secure,
            "violating_cell": None if self.violating_cell is None else list(self.violating_cell),
        }


def channel_joint(channel: Channel, dist: JointDistribution, triple: FunctionTriple) -> Joint:
    """Exact joint of (X, Y, U, F, G) with U drawn from the channel on x."""
    if dist.shape != triple.shape:
        raise ValueError(f"distribution shape {dist.shape} does not match triple {triple.shape}")
    if len(channel.matrix) != triple.shape[0]:
        raise ValueError(f"channel has {len(channel.matrix)} rows, sender alphabet has {triple.shape[0]}")

    def cells():
        for (x, y), p in dist.items():
            for u, q in enumerate(channel.matrix[x]):
                yield (x, y, u, triple.f[x][y], triple.g[x][y]), p * q

    return joint_from_function(("X", "Y", "U", "F", "G"), cells())


def check_perfect(channel: Channel, dist: JointDistribution, triple: FunctionTriple) -> PerfectSecurityReport:
    joint = channel_joint(channel, dist, triple)
    seen: dict[tuple, str] = {}
    for (u, y, fv) in sorted(joint.marginal(("U", "Y", "F"))):
        if seen.setdefault((u, y), fv) != fv:
            return PerfectSecurityReport(False, _private(joint) is None, violating_cell=(u, y))
    dep = _private(joint)
    if dep is not None:
        (u,), (g,), (fv, y) = dep
        return PerfectSecurityReport(True, False, violating_cell=(u, g, fv, y))
    return PerfectSecurityReport(True, True)


def _private(joint: Joint):
    return find_dependence(joint, "U", "G", ("F", "Y"))


# -- deterministic witness search -----------------------------------------------


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length n in lexicographic order (coarsest first)."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(rgs)
            return
        for v in range(top + 2):
            rgs[i] = v
            yield from rec(i + 1, max(top, v))

    rgs[0] = 0
    yield from rec(1, 0)


def blocks_of(rgs: Sequence[int]) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
    for i, b in enumerate(rgs):
        out[b].append(i)
    return out


@dataclass
class SearchResult:
    partition: list[list[int]] | None
    report: PerfectSecurityReport | None
    candidates_checked: int
    channel: Channel | None = None
    # a miss only rules out deterministic channels
    conclusive: bool = field(init=False)

    def __post_init__(self):
        self.conclusive = self.partition is not None

    def to_dict(self, x_alphabet: Alphabet | None = None) -> dict:
        label = (lambda i: x_alphabet[i]) if x_alphabet else (lambda i: i)
        return {
            "found": self.partition is not None,
            "partition": None if self.partition is None else [[label(i) for i in b] for b in self.partition],
            "channel": None if self.channel is None else self.channel.to_dict(),
            "report": None if self.report is None else self.report.to_dict(),
            "candidates_checked": self.candidates_checked,
            "conclusive": self.conclusive,
            "note": None if self.conclusive else
            "no deterministic channel works; randomized channels were not searched",
        }


def search_deterministic_u(dist: JointDistribution, triple: FunctionTriple,
                           limits: Limits = DEFAULT_LIMITS) -> SearchResult:
    nx = triple.shape[0]
    if nx > limits.max_partition_inputs:
        raise CapExceeded(f"sender alphabet of size {nx} exceeds partition search cap {limits.max_partition_inputs}")
    checked = 0
    for rgs in set_partitions(nx):
        checked += 1
        channel = Channel.deterministic(rgs)
        report = check_perfect(channel, dist, triple)
        if report.secure:
            return SearchResult(blocks_of(rgs), report, checked, channel)
    return SearchResult(None, None, checked)


# -- induced one-shot protocol ----------------------------------------------------


def one_shot_protocol(channel: Channel, dist: JointDistribution, triple: FunctionTriple) -> ProtocolTree:
    """Alice sends u ~ p(u|x); Bob announces the f value determined by (u, y).

    Bob's announcement makes the output part of the transcript, so I(M; G | Z, Y)
    equals I(U; G | Z, Y).
    """
    nx, ny = triple.shape
    rect = SubRect.full(nx, ny)
    used = [u for u in range(len(channel.u_alphabet)) if any(row[u] for row in channel.matrix)]
    joint = channel_joint(channel, dist, triple)
    decoded: dict[tuple[int, int], str] = {}
    for (u, y, fv) in joint.marginal(("U", "Y", "F")):
        decoded.setdefault((u, y), fv)
    fallback = triple.f[0][0]
    children = []
    for u in used:
        rows = tuple(x for x in range(nx) if channel.matrix[x][u])
        sub = SubRect(rows, rect.cols)
        outs = [decoded.get((u, y), fallback) for y in range(ny)]
        values = sorted(set(outs), key=outs.index)
        leaves = [Leaf(v, SubRect(rows, tuple(y for y in range(ny) if outs[y] == v))) for v in values]
        children.append(deterministic_node(Speaker.BOB, sub, {y: values.index(outs[y]) for y in range(ny)}, leaves))
    branch = {x: {k: channel.matrix[x][u] for k, u in enumerate(used) if channel.matrix[x][u]} for x in range(nx)}
    return ProtocolTree(Internal(Speaker.ALICE, rect, branch, tuple(children)))


@dataclass(frozen=True)
class OneShotCheck:
    error: Fraction
    leakage_zero: bool
    leakage_bits: float


def check_one_shot(tree: ProtocolTree, dist: JointDistribution, triple: FunctionTriple) -> OneShotCheck:
    """Error P(Z != F) and I(M; G | Z, Y) for a one-shot protocol, exactly."""

    def cells():
        for (x, y), p in dist.items():
            if p:
                for t, q in transcript_pmf(tree, x, y).items():
                    yield (y, triple.f[x][y], triple.g[x][y], t, t.output), p * q

    joint = joint_from_function(("Y", "F", "G", "M", "Z"), cells())
    error = sum((p for k, p in joint.pmf.items() if k[1] != k[4]), Fraction(0))
    return OneShotCheck(
        error=error,
        leakage_zero=find_dependence(joint, "M", "G", ("Z", "Y")) is None,
        leakage_bits=conditional_mutual_information(joint, "M", "G", ("Z", "Y")),
    )
