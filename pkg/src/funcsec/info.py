"""Finite joint distributions over named variables, with exact independence
checks and base-2 information measures.

Independence is decided with rational arithmetic.  Entropies and mutual
informations are floats, but conditional mutual information is summed
term by term as ``p(a,b,c) * log2(p(a,b,c) p(c) / (p(a,c) p(b,c)))`` with
the ratio formed exactly, so an exactly independent grouping reports 0.0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping, Sequence

CMI_GUARD = 1e-12

Outcome = tuple[Hashable, ...]


@dataclass(frozen=True)
class Joint:
    """Exact pmf over tuples, one coordinate per entry of ``names``."""

    names: tuple[str, ...]
    pmf: Mapping[Outcome, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        pmf = {k: Fraction(v) for k, v in self.pmf.items() if v}
        if any(len(k) != len(self.names) for k in pmf):
            raise ValueError("every outcome must have one coordinate per variable")
        if any(p < 0 for p in pmf.values()):
            raise ValueError("negative probability")
        if sum(pmf.values()) != 1:
            raise ValueError(f"joint sums to {sum(pmf.values())}, not 1")
        object.__setattr__(self, "pmf", pmf)

    def positions(self, group: Iterable[str]) -> tuple[int, ...]:
        if isinstance(group, str):
            group = (group,)
        try:
            return tuple(self.names.index(n) for n in group)
        except ValueError:
            raise KeyError(f"unknown variable in {list(group)}; have {list(self.names)}") from None

    def marginal(self, group: Iterable[str]) -> dict[Outcome, Fraction]:
        pos = self.positions(group)
        out: dict[Outcome, Fraction] = {}
        for k, p in self.pmf.items():
            key = tuple(k[i] for i in pos)
            out[key] = out.get(key, Fraction(0)) + p
        return out


def _group(g) -> tuple[str, ...]:
    if g is None:
        return ()
    return (g,) if isinstance(g, str) else tuple(g)


def find_dependence(joint: Joint, a, b, c=()) -> tuple[Outcome, Outcome, Outcome] | None:
    """First (a, b, c) cell breaking p(a,b,c) p(c) == p(a,c) p(b,c), or None."""
    a, b, c = _group(a), _group(b), _group(c)
    pa, pb, pc = joint.positions(a), joint.positions(b), joint.positions(c)
    abc: dict = {}
    ac: dict = {}
    bc: dict = {}
    cc: dict = {}
    for k, p in joint.pmf.items():
        ka, kb, kc = tuple(k[i] for i in pa), tuple(k[i] for i in pb), tuple(k[i] for i in pc)
        abc[ka, kb, kc] = abc.get((ka, kb, kc), 0) + p
        ac[ka, kc] = ac.get((ka, kc), 0) + p
        bc[kb, kc] = bc.get((kb, kc), 0) + p
        cc[kc] = cc.get(kc, 0) + p
    a_given: dict = {}
    b_given: dict = {}
    for ka, kc in ac:
        a_given.setdefault(kc, []).append(ka)
    for kb, kc in bc:
        b_given.setdefault(kc, []).append(kb)
    for kc in sorted(cc, key=repr):
        for ka in sorted(a_given[kc], key=repr):
            for kb in sorted(b_given[kc], key=repr):
                if abc.get((ka, kb, kc), 0) * cc[kc] != ac[ka, kc] * bc[kb, kc]:
                    return ka, kb, kc
    return None


def exact_cond_independent(joint: Joint, a, b, c=()) -> bool:
    """A independent of B given C, decided by exact factorization on supp(C)."""
    return find_dependence(joint, a, b, c) is None


def _probs(pmf: Any) -> Iterable:
    if isinstance(pmf, Joint):
        return pmf.pmf.values()
    if isinstance(pmf, Mapping):
        return pmf.values()
    return pmf


def entropy(pmf) -> float:
    """Shannon entropy in bits of a pmf (Joint, mapping, or sequence of probabilities)."""
    h = 0.0
    for p in _probs(pmf):
        if p:
            p = float(p)
            h -= p * math.log2(p)
    return h + 0.0


def joint_entropy(joint: Joint, group) -> float:
    return entropy(joint.marginal(_group(group)))


def conditional_entropy(joint: Joint, a, c=()) -> float:
    a, c = _group(a), _group(c)
    return joint_entropy(joint, a + c) - joint_entropy(joint, c)


def conditional_mutual_information(joint: Joint, a, b, c=()) -> float:
    a, b, c = _group(a), _group(b), _group(c)
    pabc = joint.marginal(a + b + c)
    pac = joint.marginal(a + c)
    pbc = joint.marginal(b + c)
    pc = joint.marginal(c)
    na, nb = len(a), len(b)
    total = 0.0
    for k, p in pabc.items():
        ka, kb, kc = k[:na], k[na:na + nb], k[na + nb:]
        ratio = p * pc[kc] / (pac[ka + kc] * pbc[kb + kc])
        if ratio != 1:
            total += float(p) * math.log2(ratio)
    if total < 0:
        if total < -CMI_GUARD:
            raise ArithmeticError(f"negative conditional mutual information {total}")
        total = 0.0
    return total


def mutual_information(joint: Joint, a, b) -> float:
    return conditional_mutual_information(joint, a, b, ())


def joint_from_function(names: Sequence[str], weighted: Iterable[tuple[Outcome, Fraction]]) -> Joint:
    """Accumulate (outcome, mass) pairs into a Joint, merging duplicates."""
    pmf: dict[Outcome, Fraction] = {}
    for k, p in weighted:
        if p:
            pmf[k] = pmf.get(k, Fraction(0)) + p
    return Joint(tuple(names), pmf)
