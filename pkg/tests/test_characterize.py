import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funcsec import fixtures as F
from funcsec.characterize import (
    Computable,
    NotComputable,
    check_chain,
    decide,
    decision_to_dict,
    equivalence_partition,
    leaves,
    related,
    verify_witness,
)
from funcsec.core import Alphabet, Axis, FunctionTriple, SubRect
from funcsec.privacy import check_correct, check_transcript_privacy
from funcsec.protocol import Speaker

from oracles import classic_decomposable, col_classes, row_classes


def blocks(part):
    return sorted(map(set, part.blocks), key=min)


def test_hidden_3x3_top_level_partitions(hidden_3x3):
    rect = hidden_3x3.full_rect
    # h separates x3 from x1, x2; rows related only where f agrees and h differs
    rows = equivalence_partition(hidden_3x3, rect, Axis.ROW)
    assert blocks(rows) == sorted(row_classes(hidden_3x3, rect.rows, rect.cols), key=min)
    cols = equivalence_partition(hidden_3x3, rect, Axis.COL)
    assert blocks(cols) == sorted(col_classes(hidden_3x3, rect.rows, rect.cols), key=min)


def test_hidden_3x3_relations_pointwise(hidden_3x3):
    rect = hidden_3x3.full_rect
    f, g, h = hidden_3x3.f, hidden_3x3.g, hidden_3x3.h
    for i, j in itertools.combinations(range(3), 2):
        assert related(hidden_3x3, rect, Axis.ROW, i, j) == any(f[i][y] == f[j][y] and h[i][y] != h[j][y] for y in range(3))
        assert related(hidden_3x3, rect, Axis.COL, i, j) == any(f[x][i] == f[x][j] and g[x][i] != g[x][j] for x in range(3))


def test_raw_relation_is_symmetric_not_reflexive():
    t = F.classic_3x3()
    rect = t.full_rect
    for i, j in itertools.product(range(3), repeat=2):
        assert related(t, rect, Axis.ROW, i, j) == related(t, rect, Axis.ROW, j, i)
    assert not related(t, rect, Axis.ROW, 1, 1)


def test_hidden_3x3_is_computable(hidden_3x3):
    d = decide(hidden_3x3)
    assert isinstance(d, Computable)
    for leaf in leaves(d.protocol.root):
        assert len({hidden_3x3.f[x][y] for x, y in leaf.rect.cells()}) == 1


@pytest.mark.parametrize("make", [F.classic_3x3, F.classic_and, F.and_hidden_bit])
def test_standard_privacy_negatives(make):
    t = make()
    d = decide(t)
    assert isinstance(d, NotComputable)
    w = d.witness
    assert verify_witness(t, w.rect)
    assert check_chain(t, w.rect, Axis.ROW, w.row_chain)
    assert check_chain(t, w.rect, Axis.COL, w.col_chain)
    (a, b) = w.distinct_values
    assert t.f[a[0]][a[1]] != t.f[b[0]][b[1]]


def test_classic_3x3_witness_is_whole_matrix():
    t = F.classic_3x3()
    assert decide(t).witness.rect == t.full_rect


def test_forged_chain_rejected():
    t = F.classic_and()
    w = decide(t).witness
    bad = list(w.row_chain)
    bad[1] = type(bad[1])(bad[1].index, bad[1].parent, 99)
    assert not check_chain(t, w.rect, Axis.ROW, bad)


def test_witness_dict_shape():
    doc = decision_to_dict(decide(F.classic_and()))
    assert doc["verdict"] == "forbidden"
    assert doc["chains"]["rows"][0]["parent"] is None
    assert set(doc) == {"verdict", "rect", "distinct_values", "chains"}


def test_monochromatic_is_single_leaf():
    t = F.constant_hidden([["1", "1"], ["1", "1"]])
    d = decide(t)
    assert isinstance(d, Computable) and d.protocol.depth() == 0


def test_one_by_one():
    t = F.constant_hidden([["7"]])
    assert decide(t).protocol.root.output == "7"


def test_x_only_function_speaks_once():
    t = F.constant_hidden([["a", "a"], ["b", "b"]])
    root = decide(t).protocol.root
    assert root.speaker is Speaker.ALICE
    assert all(c.__class__.__name__ == "Leaf" for c in root.children)


def _all_binary(nx, ny):
    cells = nx * ny
    for bits in itertools.product("01", repeat=cells):
        yield [list(bits[r * ny:(r + 1) * ny]) for r in range(nx)]


@pytest.mark.parametrize("shape", [(2, 2), (2, 3), (3, 2)])
def test_standard_requirements_match_classic_decomposability(shape):
    nx, ny = shape
    for f in _all_binary(nx, ny):
        t = F.standard(F.constant_hidden(f))
        assert isinstance(decide(t), Computable) == classic_decomposable(f), f


def test_constant_hidden_always_computable():
    # nothing to hide: rows and columns are never related
    for f in _all_binary(2, 3):
        assert isinstance(decide(F.constant_hidden(f)), Computable)


label = st.sampled_from("01")


@st.composite
def small_triples(draw):
    nx, ny = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    tab = lambda: [[draw(label) for _ in range(ny)] for _ in range(nx)]
    return FunctionTriple(Alphabet(tuple(f"x{i}" for i in range(nx))), Alphabet(tuple(f"y{j}" for j in range(ny))),
                          tab(), tab(), tab())


@settings(max_examples=150, deadline=None)
@given(small_triples())
def test_transpose_duality(t):
    assert type(decide(t)) is type(decide(t.transposed()))


@settings(max_examples=150, deadline=None)
@given(small_triples())
def test_partitions_match_closure_oracle(t):
    rect = t.full_rect
    assert blocks(equivalence_partition(t, rect, Axis.ROW)) == sorted(row_classes(t, rect.rows, rect.cols), key=min)
    assert blocks(equivalence_partition(t, rect, Axis.COL)) == sorted(col_classes(t, rect.rows, rect.cols), key=min)


@settings(max_examples=150, deadline=None)
@given(small_triples())
def test_decision_is_certified(t):
    d = decide(t)
    if isinstance(d, Computable):
        assert check_correct(d.protocol, t).perfect
        assert check_transcript_privacy(d.protocol, t, Speaker.ALICE).ok
        assert check_transcript_privacy(d.protocol, t, Speaker.BOB).ok
    else:
        w = d.witness
        assert verify_witness(t, w.rect)
        assert check_chain(t, w.rect, Axis.ROW, w.row_chain)
        assert check_chain(t, w.rect, Axis.COL, w.col_chain)


def test_subrect_relations_are_local():
    t = F.classic_3x3()
    # restricted to a single column, rows agree on f only where they actually do
    rect = SubRect((0, 1, 2), (2,))
    part = equivalence_partition(t, rect, Axis.ROW)
    assert blocks(part) == sorted(row_classes(t, rect.rows, rect.cols), key=min)
