"""Protocol trees: execution, exact transcript distributions, JSON and DOT.

A node is either a :class:`Leaf` carrying the output label, or an
:class:`Internal` node where one party sends a child index.  The branch map
of an internal node gives, for each of the speaker's inputs inside the
node's rectangle, a rational pmf over child indices.  Because a speaker's
choice only looks at its own input and the path so far, any tree built this
way factorizes as p(m1|x) p(m2|y,m1) ... by construction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .core import Axis, InputError, SubRect, format_rational, parse_rational


class Speaker(Enum):
    ALICE = "A"
    BOB = "B"

    @property
    def axis(self) -> Axis:
        return Axis.ROW if self is Speaker.ALICE else Axis.COL

    @property
    def other(self) -> "Speaker":
        return Speaker.BOB if self is Speaker.ALICE else Speaker.ALICE


@dataclass(frozen=True)
class Leaf:
    output: str
    rect: SubRect | None = None


@dataclass(frozen=True)
class Internal:
    speaker: Speaker
    rect: SubRect
    branch: Mapping[int, Mapping[int, Fraction]]
    children: tuple["Node", ...]

    def __post_init__(self):
        if not self.children:
            raise ValueError("internal node needs at least one child")
        own = self.rect.along(self.speaker.axis)
        if sorted(self.branch) != list(own):
            raise ValueError(f"branch keys {sorted(self.branch)} must equal the speaker's indices {list(own)}")
        frozen = {}
        for i, pmf in self.branch.items():
            pmf = {int(c): Fraction(p) for c, p in pmf.items() if p != 0}
            if any(p < 0 for p in pmf.values()) or sum(pmf.values()) != 1:
                raise ValueError(f"branch pmf for input {i} must be nonnegative and sum to 1")
            if any(not 0 <= c < len(self.children) for c in pmf):
                raise ValueError(f"branch for input {i} names a missing child")
            frozen[int(i)] = dict(sorted(pmf.items()))
        object.__setattr__(self, "branch", frozen)

    @property
    def deterministic(self) -> bool:
        return all(len(pmf) == 1 for pmf in self.branch.values())

    def child_rect(self, child: int) -> SubRect | None:
        """Inputs that reach ``child`` with positive probability, or None if none do."""
        axis = self.speaker.axis
        idx = [i for i, pmf in self.branch.items() if child in pmf]
        return self.rect.restrict(axis, idx) if idx else None


Node = Union[Leaf, Internal]


@dataclass(frozen=True)
class Transcript:
    messages: tuple[int, ...]
    output: str

    def __str__(self) -> str:
        return "/".join(map(str, self.messages)) + f"->{self.output}"


@dataclass(frozen=True)
class ProtocolTree:
    root: Node
    synthesized: bool = False

    @property
    def rect(self) -> SubRect | None:
        return self.root.rect

    def covers(self, x: int, y: int) -> bool:
        return self.rect is None or (x, y) in self.rect

    def nodes(self) -> Iterator[tuple[tuple[int, ...], Node]]:
        """Pre-order walk yielding (path, node)."""
        stack: list[tuple[tuple[int, ...], Node]] = [((), self.root)]
        while stack:
            path, node = stack.pop()
            yield path, node
            if isinstance(node, Internal):
                for c in reversed(range(len(node.children))):
                    stack.append((path + (c,), node.children[c]))

    @property
    def deterministic(self) -> bool:
        return all(n.deterministic for _, n in self.nodes() if isinstance(n, Internal))

    def depth(self) -> int:
        return max(len(p) for p, _ in self.nodes())


def _check_input(tree: ProtocolTree, x: int, y: int) -> None:
    if not tree.covers(x, y):
        raise ValueError(f"input ({x}, {y}) lies outside the protocol's root rectangle")


def draw_child(pmf: Mapping[int, Fraction], rng: random.Random | None) -> int:
    if len(pmf) == 1:
        return next(iter(pmf))
    if rng is None:
        raise ValueError("randomized node reached without a sampler")
    # exact sampling: draw an integer below the common denominator
    den = math.lcm(*(p.denominator for p in pmf.values()))
    u = rng.randrange(den)
    acc = 0
    for child, p in pmf.items():
        acc += p.numerator * (den // p.denominator)
        if u < acc:
            return child
    raise AssertionError("branch pmf does not sum to 1")


def _own_input(node: Internal, x: int, y: int) -> int:
    own = x if node.speaker is Speaker.ALICE else y
    if own not in node.branch:
        raise ValueError(f"input ({x}, {y}) is outside node rectangle {node.rect}")
    return own


def evaluate(tree: ProtocolTree, x: int, y: int, rng: random.Random | None = None) -> Transcript:
    _check_input(tree, x, y)
    node, msgs = tree.root, []
    while isinstance(node, Internal):
        c = draw_child(node.branch[_own_input(node, x, y)], rng)
        msgs.append(c)
        node = node.children[c]
    return Transcript(tuple(msgs), node.output)


def transcript_pmf(tree: ProtocolTree, x: int, y: int) -> dict[Transcript, Fraction]:
    """Exact distribution of the transcript on input (x, y)."""
    _check_input(tree, x, y)
    out: dict[Transcript, Fraction] = {}

    def walk(node: Node, msgs: tuple[int, ...], p: Fraction) -> None:
        if isinstance(node, Leaf):
            t = Transcript(msgs, node.output)
            out[t] = out.get(t, Fraction(0)) + p
            return
        for c, q in node.branch[_own_input(node, x, y)].items():
            walk(node.children[c], msgs + (c,), p * q)

    walk(tree.root, (), Fraction(1))
    return out


# -- construction helpers ----------------------------------------------------


def deterministic_node(speaker: Speaker, rect: SubRect, assign: Mapping[int, int], children) -> Internal:
    return Internal(speaker, rect, {i: {c: Fraction(1)} for i, c in assign.items()}, tuple(children))


def full_revelation(nx: int, ny: int, f_table, reveal_y: bool = True) -> ProtocolTree:
    """Alice sends x, then (optionally) Bob sends y, then the output f(x, y)."""
    rect = SubRect.full(nx, ny)
    alice_children = []
    for x in range(nx):
        sub = SubRect((x,), rect.cols)
        if reveal_y:
            leaves = [Leaf(f_table[x][y], SubRect((x,), (y,))) for y in range(ny)]
            alice_children.append(deterministic_node(Speaker.BOB, sub, {y: y for y in range(ny)}, leaves))
        else:
            values = sorted(set(f_table[x]), key=f_table[x].index)
            leaves = [Leaf(v, SubRect((x,), tuple(y for y in range(ny) if f_table[x][y] == v))) for v in values]
            assign = {y: values.index(f_table[x][y]) for y in range(ny)}
            alice_children.append(deterministic_node(Speaker.BOB, sub, assign, leaves))
    return ProtocolTree(deterministic_node(Speaker.ALICE, rect, {x: x for x in range(nx)}, alice_children))


# -- JSON ------------------------------------------------------------------


def node_to_dict(node: Node) -> dict:
    if isinstance(node, Leaf):
        doc: dict = {"leaf": node.output}
        if node.rect is not None:
            doc["rect"] = node.rect.to_dict()
        return doc
    return {
        "speaker": node.speaker.value,
        "rect": node.rect.to_dict(),
        "branch": {
            str(i): [[c, format_rational(p)] for c, p in pmf.items()] for i, pmf in sorted(node.branch.items())
        },
        "children": [node_to_dict(c) for c in node.children],
    }


def tree_to_dict(tree: ProtocolTree) -> dict:
    doc = node_to_dict(tree.root)
    if tree.synthesized:
        doc["synthesized"] = True
    return doc


def node_from_dict(doc: Mapping, path: str = "$", rect: SubRect | None = None) -> Node:
    """Parse a node; a missing 'rect' on a child is derived from its parent's branch."""
    if not isinstance(doc, Mapping):
        raise InputError("node must be an object", path)
    if "rect" in doc:
        rect = SubRect.from_dict(doc["rect"], f"{path}.rect")
    if "leaf" in doc:
        return Leaf(str(doc["leaf"]), rect)
    for key in ("speaker", "branch", "children"):
        if key not in doc:
            raise InputError(f"missing field '{key}'", path)
    if rect is None:
        raise InputError("internal node needs a 'rect'", path)
    try:
        speaker = Speaker(doc["speaker"])
    except ValueError:
        raise InputError(f"speaker must be 'A' or 'B', got {doc['speaker']!r}", path) from None
    branch: dict[int, dict[int, Fraction]] = {}
    for key, entries in doc["branch"].items():
        bpath = f"{path}.branch.{key}"
        try:
            i = int(key)
            pairs = [(int(c), parse_rational(p, bpath)) for c, p in entries]
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad branch entry ({exc})", bpath) from None
        pmf: dict[int, Fraction] = {}
        for c, p in pairs:
            pmf[c] = pmf.get(c, Fraction(0)) + p
        branch[i] = pmf
    raw_children = doc["children"]
    if not isinstance(raw_children, list) or not raw_children:
        raise InputError("children must be a nonempty list", path)
    axis = speaker.axis
    children = []
    for c, child_doc in enumerate(raw_children):
        reach = [i for i, pmf in branch.items() if pmf.get(c, 0) > 0]
        derived = rect.restrict(axis, reach) if reach else None
        cpath = f"{path}.children[{c}]"
        if derived is not None and isinstance(child_doc, Mapping) and "rect" in child_doc:
            given = SubRect.from_dict(child_doc["rect"], f"{cpath}.rect")
            if given != derived:
                raise InputError(f"child rect {given.to_dict()} does not match branch support {derived.to_dict()}",
                                 cpath)
        children.append(node_from_dict(child_doc, cpath, derived))
    try:
        return Internal(speaker, rect, branch, tuple(children))
    except ValueError as exc:
        raise InputError(str(exc), path) from None


def tree_from_dict(doc: Mapping) -> ProtocolTree:
    return ProtocolTree(node_from_dict(doc), bool(doc.get("synthesized", False)) if isinstance(doc, Mapping) else False)


# -- DOT -------------------------------------------------------------------


def _rect_label(rect: SubRect | None, x_labels=None, y_labels=None) -> str:
    if rect is None:
        return "*"
    rows = [x_labels[i] for i in rect.rows] if x_labels else list(map(str, rect.rows))
    cols = [y_labels[j] for j in rect.cols] if y_labels else list(map(str, rect.cols))
    return "{" + ",".join(rows) + "} x {" + ",".join(cols) + "}"


def to_dot(tree: ProtocolTree, x_labels=None, y_labels=None) -> str:
    """Graphviz rendering: one node per tree node, edges labelled by message index."""
    lines = ["digraph protocol {", '  node [fontname="monospace"];']
    ids: dict[tuple[int, ...], str] = {}
    for path, node in tree.nodes():
        nid = "n" + "_".join(map(str, path)) if path else "root"
        ids[path] = nid
        rect = _rect_label(node.rect, x_labels, y_labels).replace('"', '\\"')
        if isinstance(node, Leaf):
            out = node.output.replace('"', '\\"')
            lines.append(f'  {nid} [shape=box, label="out {out}\\n{rect}"];')
        else:
            who = "Alice" if node.speaker is Speaker.ALICE else "Bob"
            lines.append(f'  {nid} [shape=ellipse, label="{who}\\n{rect}"];')
        if path:
            lines.append(f'  {ids[path[:-1]]} -> {nid} [label="{path[-1]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
