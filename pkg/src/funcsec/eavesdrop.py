"""Leakage of public transcripts to an eavesdropper.

Alice and Bob compute f1 and f2 over i.i.d. blocks while an eavesdropper
sees every message; the quantity of interest is I(M; G^n).  This module
computes it exactly for a given block protocol, builds the interactive
protocol for the selected-bit example (Alice announces x, Bob answers with
y_x) and certifies by exhaustive search that no deterministic one-shot
non-interactive protocol is both correct and leak-free on it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .core import (
    DEFAULT_LIMITS,
    Alphabet,
    CapExceeded,
    InputError,
    JointDistribution,
    Limits,
    SubRect,
    Table,
    block_digits,
    block_index,
    block_label,
    block_table,
    check_block_size,
    format_rational,
    iid_extend,
    parse_distribution,
    tabulate,
)
from .info import entropy, exact_cond_independent, joint_from_function, mutual_information
from .protocol import Leaf, ProtocolTree, Speaker, Transcript, deterministic_node, transcript_pmf

OUTPUT_SEP = "|"


@dataclass(frozen=True)
class EavesdropInstance:
    dist: JointDistribution
    f1: Table
    f2: Table
    g: Table
    block_length: int = 1

    def __post_init__(self):
        nx, ny = self.dist.shape
        for name in ("f1", "f2", "g"):
            table = tuple(tuple(str(v) for v in row) for row in getattr(self, name))
            if len(table) != nx or any(len(r) != ny for r in table):
                raise InputError(f"table must be {nx}x{ny}", f"$.{name}")
            object.__setattr__(self, name, table)

    def extend(self, n: int, limits: Limits = DEFAULT_LIMITS) -> "EavesdropInstance":
        if self.block_length != 1:
            raise ValueError("only single-letter instances can be extended")
        return EavesdropInstance(iid_extend(self.dist, n, limits), block_table(self.f1, n),
                                 block_table(self.f2, n), block_table(self.g, n), n)

    def to_dict(self) -> dict:
        doc = self.dist.to_dict()
        doc.update({k: [list(r) for r in getattr(self, k)] for k in ("f1", "f2", "g")})
        return doc


def parse_instance(doc: Mapping, limits: Limits = DEFAULT_LIMITS) -> EavesdropInstance:
    dist = parse_distribution(doc, limits)
    tables = {}
    for key in ("f1", "f2", "g"):
        if key not in doc:
            raise InputError(f"missing field '{key}'")
        tables[key] = doc[key]
    return EavesdropInstance(dist, tables["f1"], tables["f2"], tables["g"])


# -- decoders and leakage ---------------------------------------------------------

Decoder = Callable[[int, Transcript], str]


def split_output(label: str) -> tuple[str, str]:
    """Leaf label 'z1|z2' gives separate outputs; a plain label is shared by both parties."""
    if OUTPUT_SEP in label:
        z1, z2 = label.split(OUTPUT_SEP, 1)
        return z1, z2
    return label, label


@dataclass(frozen=True)
class Decoders:
    """Output maps; Alice decodes from (x, transcript), Bob from (y, transcript)."""

    alice: Decoder
    bob: Decoder


LEAF_DECODERS = Decoders(lambda x, t: split_output(t.output)[0], lambda y, t: split_output(t.output)[1])


@dataclass(frozen=True)
class LeakageReport:
    total_bits: float
    per_symbol_bits: float
    exact_zero: bool
    error_prob: Fraction
    n: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "total_bits": float(f"{self.total_bits:.10g}"),
            "per_symbol_bits": float(f"{self.per_symbol_bits:.10g}"),
            "exact_zero": self.exact_zero,
            "error_prob": format_rational(self.error_prob),
        }


def _block_instance(instance: EavesdropInstance, n: int, limits: Limits) -> EavesdropInstance:
    if instance.block_length == n:
        return instance
    if instance.block_length != 1:
        raise ValueError(f"instance has block length {instance.block_length}, protocol needs {n}")
    nx, ny = instance.dist.shape
    check_block_size(nx, ny, n, limits)
    return instance.extend(n, limits)


def leakage(tree: ProtocolTree, instance: EavesdropInstance, n: int = 1,
            decoders: Decoders = LEAF_DECODERS, limits: Limits = DEFAULT_LIMITS) -> LeakageReport:
    blk = _block_instance(instance, n, limits)
    rect = tree.rect
    nx, ny = blk.dist.shape
    if rect is not None and (rect.rows[-1] >= nx or rect.cols[-1] >= ny):
        raise ValueError(f"protocol rectangle exceeds the {nx}x{ny} block alphabets")
    error = Fraction(0)
    cells = []
    for (x, y), p in blk.dist.items():
        if not p:
            continue
        for t, q in transcript_pmf(tree, x, y).items():
            w = p * q
            cells.append(((x, y, t, blk.g[x][y]), w))
            if decoders.alice(x, t) != blk.f1[x][y] or decoders.bob(y, t) != blk.f2[x][y]:
                error += w
    joint = joint_from_function(("X", "Y", "M", "G"), cells)
    total = mutual_information(joint, "M", "G")
    return LeakageReport(total, total / n, exact_cond_independent(joint, "M", "G"), error, n)


# -- the selected-bit example ----------------------------------------------------------


def selected_bit_base() -> EavesdropInstance:
    """X uniform bit, Y = (Y0, Y1) uniform bits; f1 = f2 = y_x, g = y_(1-x)."""
    xa = Alphabet(("0", "1"))
    ya = Alphabet(("00", "01", "10", "11"))
    dist = JointDistribution.uniform(xa, ya)
    fx = tabulate(2, 4, lambda x, y: ya[y][x])
    gx = tabulate(2, 4, lambda x, y: ya[y][1 - x])
    return EavesdropInstance(dist, fx, fx, gx)


def _selected_bits_tree(n: int) -> ProtocolTree:
    nx, ny = 2**n, 4**n
    rect = SubRect.full(nx, ny)
    children = []
    for xb in range(nx):
        xs = block_digits(xb, 2, n)
        assign = {}
        for yb in range(ny):
            ys = block_digits(yb, 4, n)
            bits = [(y >> (1 - x)) & 1 for x, y in zip(xs, ys)]
            assign[yb] = block_index(bits, 2)
        leaves = []
        for k in range(2**n):
            cols = tuple(yb for yb, v in assign.items() if v == k)
            leaves.append(Leaf(block_label([str(b) for b in block_digits(k, 2, n)]), SubRect((xb,), cols)))
        children.append(deterministic_node(Speaker.BOB, SubRect((xb,), rect.cols), assign, leaves))
    return ProtocolTree(deterministic_node(Speaker.ALICE, rect, {x: x for x in range(nx)}, children))


def selected_bit_instance(n: int = 1, limits: Limits = DEFAULT_LIMITS) -> tuple[EavesdropInstance, ProtocolTree]:
    """Block instance of length n and the two-round protocol (Alice: x^n, Bob: y_x^n)."""
    if not 1 <= n <= limits.max_selected_bit_n:
        raise CapExceeded(f"block length {n} outside 1..{limits.max_selected_bit_n}")
    return selected_bit_base().extend(n, limits), _selected_bits_tree(n)


# -- exhaustive non-interactive search -----------------------------------------------------


@dataclass(frozen=True)
class FrontierPoint:
    error: Fraction
    leakage_bits: float
    exact_zero: bool
    phi: tuple[int, ...]
    psi: tuple[int, ...]
    count: int = 1

    def describe(self) -> str:
        return "phi=" + "".join(map(str, self.phi)) + " psi=" + "".join(map(str, self.psi))

    def to_dict(self) -> dict:
        return {
            "error": format_rational(self.error),
            "leakage_bits": float(f"{self.leakage_bits:.10g}"),
            "exact_zero": self.exact_zero,
            "phi": list(self.phi),
            "psi": list(self.psi),
            "equivalent_encoders": self.count,
        }


@dataclass
class FrontierResult:
    points: list[FrontierPoint]
    pairs_checked: int
    min_zero_error_leakage: float | None
    zero_error_witness: FrontierPoint | None = None
    scope: str = field(default="deterministic non-interactive protocols, block length 1")

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "pairs_checked": self.pairs_checked,
            "min_zero_error_leakage": None if self.min_zero_error_leakage is None
            else float(f"{self.min_zero_error_leakage:.10g}"),
            "zero_error_protocol": None if self.zero_error_witness is None else self.zero_error_witness.to_dict(),
            "frontier": [p.to_dict() for p in self.points],
        }

    def to_csv(self) -> str:
        lines = ["error,leakage_bits,encoder_description"]
        for p in self.points:
            lines.append(f"{format_rational(p.error)},{p.leakage_bits:.10g},{p.describe()}")
        return "\n".join(lines) + "\n"


def _map_decode(weights: Mapping[tuple, Mapping[str, Fraction]]) -> dict[tuple, str]:
    # ties go to the smallest label so the search is deterministic
    return {k: min(v, key=lambda z: (-v[z], z)) for k, v in weights.items()}


def map_decoders(instance: EavesdropInstance, phi: Sequence[int], psi: Sequence[int]):
    """Per-party MAP outputs: Alice from (x, psi(y)), Bob from (y, phi(x))."""
    a_w: dict = {}
    b_w: dict = {}
    for (x, y), p in instance.dist.items():
        if not p:
            continue
        za = a_w.setdefault((x, psi[y]), {})
        za[instance.f1[x][y]] = za.get(instance.f1[x][y], 0) + p
        zb = b_w.setdefault((y, phi[x]), {})
        zb[instance.f2[x][y]] = zb.get(instance.f2[x][y], 0) + p
    return _map_decode(a_w), _map_decode(b_w)


def _evaluate_pair(instance: EavesdropInstance, phi, psi) -> tuple[Fraction, float, bool]:
    dec_a, dec_b = map_decoders(instance, phi, psi)
    error = Fraction(0)
    cells = []
    for (x, y), p in instance.dist.items():
        if not p:
            continue
        m1, m2 = phi[x], psi[y]
        cells.append(((m1, m2, instance.g[x][y]), p))
        if dec_a[x, m2] != instance.f1[x][y] or dec_b[y, m1] != instance.f2[x][y]:
            error += p
    joint = joint_from_function(("M1", "M2", "G"), cells)
    bits = mutual_information(joint, ("M1", "M2"), "G")
    return error, bits, exact_cond_independent(joint, ("M1", "M2"), "G")


def _pareto(points: list[FrontierPoint], tol: float = 1e-12) -> list[FrontierPoint]:
    merged: dict[tuple, FrontierPoint] = {}
    for p in points:
        key = (p.error, round(p.leakage_bits / tol))
        if key in merged:
            q = merged[key]
            merged[key] = FrontierPoint(q.error, q.leakage_bits, q.exact_zero, q.phi, q.psi, q.count + 1)
        else:
            merged[key] = p
    ordered = sorted(merged.values(), key=lambda p: (p.error, p.leakage_bits))
    front: list[FrontierPoint] = []
    best = math.inf
    for p in ordered:
        if p.leakage_bits < best - tol:
            front.append(p)
            best = p.leakage_bits
    return front


def brute_force_noninteractive(instance: EavesdropInstance, m1_size: int, m2_size: int, n: int = 1,
                               limits: Limits = DEFAULT_LIMITS) -> FrontierResult:
    """Every deterministic encoder pair (phi: X -> M1, psi: Y -> M2) with MAP decoders.

    Reports the (error, leakage) Pareto frontier and the least leakage among
    zero-error pairs.  Only block length 1 and deterministic encoders are
    covered.
    """
    if n != 1:
        raise ValueError("exhaustive search is only defined for block length 1")
    blk = _block_instance(instance, 1, limits)
    nx, ny = blk.dist.shape
    if m1_size < 1 or m2_size < 1:
        raise ValueError("message alphabets must be nonempty")
    total = m1_size**nx * m2_size**ny
    if total > limits.max_encoder_pairs:
        raise CapExceeded(f"{total} encoder pairs exceed cap {limits.max_encoder_pairs}")
    points = []
    best_zero: FrontierPoint | None = None
    for phi in itertools.product(range(m1_size), repeat=nx):
        for psi in itertools.product(range(m2_size), repeat=ny):
            err, bits, zero = _evaluate_pair(blk, phi, psi)
            pt = FrontierPoint(err, bits, zero, phi, psi)
            points.append(pt)
            if err == 0 and (best_zero is None or bits < best_zero.leakage_bits):
                best_zero = pt
    return FrontierResult(_pareto(points), total, None if best_zero is None else best_zero.leakage_bits, best_zero)


def encoder_protocol(instance: EavesdropInstance, phi: Sequence[int], psi: Sequence[int]) -> tuple[ProtocolTree, Decoders]:
    """Protocol tree and MAP decoders realising an encoder pair, for replay through :func:`leakage`."""
    nx, ny = instance.dist.shape
    rect = SubRect.full(nx, ny)
    used1 = sorted(set(phi))
    used2 = sorted(set(psi))
    children = []
    for m1 in used1:
        rows = tuple(x for x in range(nx) if phi[x] == m1)
        leaves = [Leaf("*", SubRect(rows, tuple(y for y in range(ny) if psi[y] == m2))) for m2 in used2]
        children.append(deterministic_node(Speaker.BOB, SubRect(rows, rect.cols),
                                           {y: used2.index(psi[y]) for y in range(ny)}, leaves))
    tree = ProtocolTree(deterministic_node(Speaker.ALICE, rect, {x: used1.index(phi[x]) for x in range(nx)}, children))
    dec_a, dec_b = map_decoders(instance, phi, psi)

    def alice(x: int, t: Transcript) -> str:
        return dec_a.get((x, used2[t.messages[1]]), "")

    def bob(y: int, t: Transcript) -> str:
        return dec_b.get((y, used1[t.messages[0]]), "")

    return tree, Decoders(alice, bob)


# -- omniscience condition ---------------------------------------------------------------


@dataclass(frozen=True)
class OmniscienceResult:
    feasible: bool
    h_g: float
    i_xy: float

    def to_dict(self) -> dict:
        return {"feasible": self.feasible, "h_g": float(f"{self.h_g:.10g}"), "i_xy": float(f"{self.i_xy:.10g}")}


def omniscience_feasible(dist: JointDistribution, g: Table, tol: float = 1e-9) -> OmniscienceResult:
    """Sufficient condition H(g(X,Y)) < I(X;Y) for computing anything while hiding g."""
    nx, ny = dist.shape
    if len(g) != nx or any(len(r) != ny for r in g):
        raise InputError(f"g table must be {nx}x{ny}", "$.g")
    pg: dict[str, Fraction] = {}
    for (x, y), p in dist.items():
        pg[str(g[x][y])] = pg.get(str(g[x][y]), Fraction(0)) + p
    joint = joint_from_function(("X", "Y"), dist.items())
    h_g = entropy(pg)
    i_xy = mutual_information(joint, "X", "Y")
    return OmniscienceResult(i_xy - h_g > tol, h_g, i_xy)
