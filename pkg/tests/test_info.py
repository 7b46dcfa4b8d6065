import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funcsec.info import (
    Joint,
    conditional_entropy,
    conditional_mutual_information,
    entropy,
    exact_cond_independent,
    find_dependence,
    joint_entropy,
    joint_from_function,
    mutual_information,
)

from oracles import entropy_bits


@pytest.mark.parametrize("k", [1, 2, 3, 4, 8, 16])
def test_uniform_entropy(k):
    assert abs(entropy([Fraction(1, k)] * k) - math.log2(k)) <= 1e-12


def test_binary_entropy_quarter():
    assert abs(entropy({"a": Fraction(1, 4), "b": Fraction(3, 4)}) - 0.8112781244591328) < 1e-9


def test_entropy_ignores_zeros():
    assert entropy([Fraction(1), Fraction(0)]) == 0.0


def test_joint_rejects_bad_mass():
    with pytest.raises(ValueError):
        Joint(("A",), {(0,): Fraction(1, 2)})
    with pytest.raises(ValueError):
        Joint(("A", "B"), {(0,): Fraction(1)})


def xor_joint():
    q = Fraction(1, 4)
    return joint_from_function(("A", "B", "C"), (((a, b, a ^ b), q) for a in (0, 1) for b in (0, 1)))


def test_xor_pairwise_independent_but_not_given_third():
    j = xor_joint()
    assert exact_cond_independent(j, "A", "B")
    assert mutual_information(j, "A", "B") == 0.0
    assert not exact_cond_independent(j, "A", "B", "C")
    assert find_dependence(j, "A", "B", "C") is not None
    assert abs(conditional_mutual_information(j, "A", "B", "C") - 1.0) < 1e-12


def test_unknown_variable():
    with pytest.raises(KeyError):
        mutual_information(xor_joint(), "A", "Z")


@st.composite
def joints(draw):
    sizes = [draw(st.integers(1, 3)) for _ in range(3)]
    cells = [(a, b, c) for a in range(sizes[0]) for b in range(sizes[1]) for c in range(sizes[2])]
    w = [draw(st.integers(0, 4)) for _ in cells]
    if not any(w):
        w[0] = 1
    tot = sum(w)
    return joint_from_function(("A", "B", "C"), ((cell, Fraction(x, tot)) for cell, x in zip(cells, w)))


@settings(max_examples=200, deadline=None)
@given(joints())
def test_exact_and_float_agree(j):
    cmi = conditional_mutual_information(j, "A", "B", "C")
    assert cmi >= 0
    if exact_cond_independent(j, "A", "B", "C"):
        assert cmi == 0.0
    else:
        assert cmi > 1e-9


@settings(max_examples=200, deadline=None)
@given(joints())
def test_chain_rule_and_oracle(j):
    # I(A;B|C) = H(A|C) - H(A|B,C)
    lhs = conditional_mutual_information(j, "A", "B", "C")
    rhs = conditional_entropy(j, "A", "C") - conditional_entropy(j, "A", ("B", "C"))
    assert abs(lhs - rhs) < 1e-9
    assert abs(joint_entropy(j, ("A", "B", "C")) - entropy_bits([float(p) for p in j.pmf.values()])) < 1e-12
    # I(A;B,C) = I(A;C) + I(A;B|C)
    assert abs(mutual_information(j, "A", ("B", "C"))
               - mutual_information(j, "A", "C") - lhs) < 1e-9


@settings(max_examples=100, deadline=None)
@given(joints())
def test_product_is_independent(j):
    pa, pb = j.marginal("A"), j.marginal("B")
    prod = joint_from_function(("A", "B"), ((ka + kb, pa[ka] * pb[kb]) for ka in pa for kb in pb))
    assert exact_cond_independent(prod, "A", "B")
    assert mutual_information(prod, "A", "B") == 0.0
