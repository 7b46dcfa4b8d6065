"""Secure-computability decision for function triples.

Two rows x1, x2 of a sub-rectangle C x D are *related* when some column
y in D has f(x1, y) == f(x2, y) but h(x1, y) != h(x2, y): Bob would learn
something about h if Alice's message told x1 and x2 apart.  Columns are
related through g symmetrically.  The equivalence classes of the closure
give the finest split each party may announce.  Recursively splitting the
matrix either reaches monochromatic leaves (a secure deterministic protocol)
or gets stuck on a non-monochromatic rectangle whose rows and columns are
each a single class, which certifies that no secure protocol exists.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Union

from .core import Axis, FunctionTriple, SubRect
from .protocol import Leaf, Node, ProtocolTree, Speaker, deterministic_node, tree_to_dict


class UnionFind:
    """Disjoint sets over arbitrary hashable items, union by size with path halving."""

    def __init__(self, items):
        self.parent = {i: i for i in items}
        self.size = {i: 1 for i in self.parent}

    def find(self, i):
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self) -> list[tuple]:
        out: dict = {}
        for i in self.parent:
            out.setdefault(self.find(i), []).append(i)
        return sorted((tuple(sorted(g)) for g in out.values()), key=lambda g: g[0])


# -- relations ---------------------------------------------------------------


def relation_witness(triple: FunctionTriple, rect: SubRect, axis: Axis, i: int, j: int) -> int | None:
    """Opposite-axis index witnessing ``i ~ j`` inside ``rect``, or None."""
    own = rect.along(axis)
    if i not in own or j not in own:
        raise ValueError(f"indices {i}, {j} must both lie on the {axis.value} axis of {rect}")
    f = triple.f
    if axis is Axis.ROW:
        h = triple.h
        for y in rect.cols:
            if f[i][y] == f[j][y] and h[i][y] != h[j][y]:
                return y
    else:
        g = triple.g
        for x in rect.rows:
            if f[x][i] == f[x][j] and g[x][i] != g[x][j]:
                return x
    return None


def related(triple: FunctionTriple, rect: SubRect, axis: Axis, i: int, j: int) -> bool:
    return relation_witness(triple, rect, axis, i, j) is not None


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    via: int  # opposite-axis index where f agrees and the hidden function differs


@dataclass(frozen=True)
class Partition:
    axis: Axis
    rect: SubRect
    blocks: tuple[tuple[int, ...], ...]
    witness_edges: tuple[tuple[Edge, ...], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, i: int) -> int:
        return next(k for k, b in enumerate(self.blocks) if i in b)


def equivalence_partition(triple: FunctionTriple, rect: SubRect, axis: Axis) -> Partition:
    own = rect.along(axis)
    uf = UnionFind(own)
    tree_edges: list[Edge] = []
    for a_pos, a in enumerate(own):
        for b in own[a_pos + 1:]:
            if uf.find(a) == uf.find(b):
                continue
            via = relation_witness(triple, rect, axis, a, b)
            if via is not None:
                uf.union(a, b)
                tree_edges.append(Edge(a, b, via))
    blocks = tuple(uf.groups())
    edges = tuple(tuple(e for e in tree_edges if e.a in blk) for blk in blocks)
    return Partition(axis, rect, blocks, edges)


def is_monochromatic(triple: FunctionTriple, rect: SubRect) -> bool:
    return len({triple.f[x][y] for x, y in rect.cells()}) == 1


# -- witnesses ----------------------------------------------------------------


@dataclass(frozen=True)
class ChainLink:
    index: int
    parent: int
    via: int


def _chain(part: Partition) -> tuple[ChainLink, ...]:
    """Order the single block so each later element is related to an earlier one."""
    (block,), (edges,) = part.blocks, part.witness_edges
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in block}
    for e in edges:
        adj[e.a].append((e.b, e.via))
        adj[e.b].append((e.a, e.via))
    start = block[0]
    seen, links, queue = {start}, [], deque([start])
    while queue:
        cur = queue.popleft()
        for nxt, via in sorted(adj[cur]):
            if nxt not in seen:
                seen.add(nxt)
                links.append(ChainLink(nxt, cur, via))
                queue.append(nxt)
    return (ChainLink(start, start, -1),) + tuple(links)


@dataclass(frozen=True)
class ForbiddenWitness:
    rect: SubRect
    distinct_values: tuple[tuple[int, int], tuple[int, int]]
    row_chain: tuple[ChainLink, ...]
    col_chain: tuple[ChainLink, ...]

    def to_dict(self) -> dict:
        def chain(links):
            return [{"index": l.index, "parent": None if l.via < 0 else l.parent,
                     "via": None if l.via < 0 else l.via} for l in links]
        return {
            "rect": self.rect.to_dict(),
            "distinct_values": [list(c) for c in self.distinct_values],
            "chains": {"rows": chain(self.row_chain), "cols": chain(self.col_chain)},
        }


def _distinct_cells(triple: FunctionTriple, rect: SubRect) -> tuple[tuple[int, int], tuple[int, int]]:
    first = next(rect.cells())
    v = triple.f[first[0]][first[1]]
    other = next(c for c in rect.cells() if triple.f[c[0]][c[1]] != v)
    return first, other


def make_witness(triple: FunctionTriple, rect: SubRect) -> ForbiddenWitness:
    rows = equivalence_partition(triple, rect, Axis.ROW)
    cols = equivalence_partition(triple, rect, Axis.COL)
    if is_monochromatic(triple, rect) or len(rows) != 1 or len(cols) != 1:
        raise ValueError(f"{rect} is not a forbidden sub-rectangle")
    return ForbiddenWitness(rect, _distinct_cells(triple, rect), _chain(rows), _chain(cols))


def verify_witness(triple: FunctionTriple, rect: SubRect) -> bool:
    return (
        not is_monochromatic(triple, rect)
        and len(equivalence_partition(triple, rect, Axis.ROW)) == 1
        and len(equivalence_partition(triple, rect, Axis.COL)) == 1
    )


def check_chain(triple: FunctionTriple, rect: SubRect, axis: Axis, links) -> bool:
    """Independent replay of an ordering certificate against the raw tables."""
    own = rect.along(axis)
    if sorted(l.index for l in links) != list(own):
        return False
    placed = {links[0].index}
    for link in links[1:]:
        if link.parent not in placed:
            return False
        i, j, k = link.index, link.parent, link.via
        if axis is Axis.ROW:
            ok = k in rect.cols and triple.f[i][k] == triple.f[j][k] and triple.h[i][k] != triple.h[j][k]
        else:
            ok = k in rect.rows and triple.f[k][i] == triple.f[k][j] and triple.g[k][i] != triple.g[k][j]
        if not ok:
            return False
        placed.add(i)
    return True


# -- decision -----------------------------------------------------------------


@dataclass(frozen=True)
class Computable:
    protocol: ProtocolTree

    verdict = "computable"


@dataclass(frozen=True)
class NotComputable:
    witness: ForbiddenWitness

    verdict = "forbidden"


Decision = Union[Computable, NotComputable]


class _Stuck(Exception):
    def __init__(self, rect: SubRect):
        self.rect = rect


def _synthesize(triple: FunctionTriple, rect: SubRect) -> Node:
    if is_monochromatic(triple, rect):
        x, y = rect.rows[0], rect.cols[0]
        return Leaf(triple.f[x][y], rect)
    # Alice first; single-block splits carry no information and are skipped
    for speaker in (Speaker.ALICE, Speaker.BOB):
        part = equivalence_partition(triple, rect, speaker.axis)
        if len(part) >= 2:
            children = [_synthesize(triple, rect.restrict(speaker.axis, blk)) for blk in part.blocks]
            assign = {i: k for k, blk in enumerate(part.blocks) for i in blk}
            return deterministic_node(speaker, rect, assign, children)
    raise _Stuck(rect)


def decide(triple: FunctionTriple) -> Decision:
    try:
        root = _synthesize(triple, triple.full_rect)
    except _Stuck as stuck:
        return NotComputable(make_witness(triple, stuck.rect))
    return Computable(ProtocolTree(root, synthesized=True))


def decision_to_dict(decision: Decision) -> dict:
    if isinstance(decision, Computable):
        return {"verdict": "computable", "protocol": tree_to_dict(decision.protocol)}
    return {"verdict": "forbidden", **decision.witness.to_dict()}


def leaves(node: Node) -> Iterator[Leaf]:
    if isinstance(node, Leaf):
        yield node
    else:
        for c in node.children:
            yield from leaves(c)
