import random
from collections import Counter
from fractions import Fraction

import pytest

from funcsec import fixtures as F
from funcsec.core import InputError, SubRect
from funcsec.protocol import (
    Internal,
    Leaf,
    ProtocolTree,
    Speaker,
    Transcript,
    draw_child,
    evaluate,
    full_revelation,
    to_dot,
    transcript_pmf,
    tree_from_dict,
    tree_to_dict,
)


def coin_tree() -> ProtocolTree:
    """Alice flips a 1/3-biased coin regardless of x, then both output it."""
    rect = SubRect.full(2, 1)
    third = {0: Fraction(1, 3), 1: Fraction(2, 3)}
    return ProtocolTree(Internal(Speaker.ALICE, rect, {0: third, 1: third}, (Leaf("h", rect), Leaf("t", rect))))


def test_evaluate_full_revelation(hidden_3x3):
    tree = full_revelation(3, 3, hidden_3x3.f)
    t = evaluate(tree, 2, 0)
    assert t == Transcript((2, 0), "2")
    assert transcript_pmf(tree, 2, 0) == {t: 1}


def test_full_revelation_without_y_sends_value_index(hidden_3x3):
    tree = full_revelation(3, 3, hidden_3x3.f, reveal_y=False)
    # row x3 = (2, 1, 0): value indices in first-appearance order
    assert [evaluate(tree, 2, y).messages for y in range(3)] == [(2, 0), (2, 1), (2, 2)]
    # row x1 = (0, 0, 1): columns 1 and 2 collapse to the same message
    assert evaluate(tree, 0, 0) == evaluate(tree, 0, 1)


def test_randomized_pmf_and_sampling():
    tree = coin_tree()
    pmf = transcript_pmf(tree, 1, 0)
    assert pmf == {Transcript((0,), "h"): Fraction(1, 3), Transcript((1,), "t"): Fraction(2, 3)}
    with pytest.raises(ValueError, match="sampler"):
        evaluate(tree, 0, 0)
    rng = random.Random(3)
    counts = Counter(evaluate(tree, 0, 0, rng).output for _ in range(3000))
    assert abs(counts["h"] / 3000 - 1 / 3) < 0.04


def test_draw_child_uses_exact_lcm():
    class Fixed:
        def __init__(self, u):
            self.u = u

        def randrange(self, n):
            assert n == 6
            return self.u

    pmf = {0: Fraction(1, 2), 1: Fraction(1, 3), 2: Fraction(1, 6)}
    assert [draw_child(pmf, Fixed(u)) for u in range(6)] == [0, 0, 0, 1, 1, 2]


def test_input_outside_root_rejected():
    tree = coin_tree()
    with pytest.raises(ValueError, match="outside"):
        transcript_pmf(tree, 0, 1)


def test_internal_validation():
    rect = SubRect.full(2, 1)
    with pytest.raises(ValueError):
        Internal(Speaker.ALICE, rect, {0: {0: Fraction(1)}}, (Leaf("a", rect),))
    with pytest.raises(ValueError):
        Internal(Speaker.ALICE, rect, {0: {0: Fraction(1, 2)}, 1: {0: Fraction(1)}}, (Leaf("a", rect),))


@pytest.mark.parametrize("make", [coin_tree, lambda: full_revelation(3, 3, F.hidden_3x3().f, reveal_y=False)])
def test_json_roundtrip(make):
    tree = make()
    back = tree_from_dict(tree_to_dict(tree))
    assert back == tree
    for x in tree.rect.rows:
        for y in tree.rect.cols:
            assert transcript_pmf(back, x, y) == transcript_pmf(tree, x, y)


def test_json_child_rects_derived_when_missing():
    doc = tree_to_dict(full_revelation(2, 2, [["0", "0"], ["0", "1"]]))
    for child in doc["children"]:
        del child["rect"]
    tree = tree_from_dict(doc)
    assert tree.root.children[1].rect == SubRect((1,), (0, 1))


def test_json_inconsistent_child_rect():
    doc = tree_to_dict(full_revelation(2, 2, [["0", "0"], ["0", "1"]]))
    doc["children"][0]["rect"] = {"rows": [1], "cols": [0, 1]}
    with pytest.raises(InputError) as err:
        tree_from_dict(doc)
    assert err.value.path == "$.children[0]"


def test_json_bad_speaker():
    doc = tree_to_dict(coin_tree())
    doc["speaker"] = "C"
    with pytest.raises(InputError, match="speaker"):
        tree_from_dict(doc)


def test_synthesized_flag_survives(hidden3_tree):
    doc = tree_to_dict(hidden3_tree)
    assert doc["synthesized"] is True
    assert tree_from_dict(doc).synthesized


def test_dot_has_one_node_per_tree_node(hidden3_tree, hidden_3x3):
    dot = to_dot(hidden3_tree, hidden_3x3.x_alphabet, hidden_3x3.y_alphabet)
    n = sum(1 for _ in hidden3_tree.nodes())
    assert dot.startswith("digraph protocol {")
    assert dot.count("[shape=") == n
    assert dot.count("->") == n - 1
    assert "x1" in dot


def test_tree_helpers():
    tree = full_revelation(2, 3, [["a"] * 3] * 2)
    assert tree.deterministic and tree.depth() == 2
    assert not coin_tree().deterministic
