import itertools
import math
from collections import defaultdict
from fractions import Fraction

import pytest

from funcsec.core import Alphabet, CapExceeded, JointDistribution, tabulate
from funcsec.eavesdrop import (
    Decoders,
    EavesdropInstance,
    brute_force_noninteractive,
    encoder_protocol,
    selected_bit_base,
    selected_bit_instance,
    leakage,
    map_decoders,
    omniscience_feasible,
    parse_instance,
    split_output,
)
from funcsec.protocol import Leaf, ProtocolTree, full_revelation

from oracles import entropy_bits


def oracle_pair_leakage(inst, phi, psi):
    """I(phi(X), psi(Y); G) in bits by explicit marginal sums."""
    pm, pg, pmg = defaultdict(float), defaultdict(float), defaultdict(float)
    for (x, y), p in inst.dist.items():
        p = float(p)
        m, g = (phi[x], psi[y]), inst.g[x][y]
        pm[m] += p
        pg[g] += p
        pmg[m, g] += p
    return entropy_bits(pm.values()) + entropy_bits(pg.values()) - entropy_bits(pmg.values())


def test_base_instance_tables():
    inst = selected_bit_base()
    assert inst.f1[0] == ("0", "0", "1", "1")  # y_0
    assert inst.f1[1] == ("0", "1", "0", "1")  # y_1
    assert inst.g[0] == inst.f1[1]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_interactive_protocol_is_exact(n):
    inst, tree = selected_bit_instance(n)
    rep = leakage(tree, inst, n)
    assert rep.exact_zero and rep.total_bits == 0.0 and rep.error_prob == 0


def test_extension_matches_block_instance():
    _, tree = selected_bit_instance(2)
    a = leakage(tree, selected_bit_base(), 2)
    b = leakage(tree, *selected_bit_instance(2)[:1], n=2)
    assert a == b


def test_block_cap():
    with pytest.raises(CapExceeded):
        selected_bit_instance(4)


def test_full_revelation_leaks_g():
    inst = selected_bit_base()
    tree = full_revelation(2, 4, inst.f1)
    rep = leakage(tree, inst)
    assert not rep.exact_zero and abs(rep.total_bits - 1.0) < 1e-12 and rep.error_prob == 0


def test_silent_protocol_guesses():
    inst = selected_bit_base()
    tree = ProtocolTree(Leaf("0"))
    rep = leakage(tree, inst)
    assert rep.exact_zero and rep.error_prob == Fraction(1, 2)


def test_split_output_convention():
    assert split_output("a|b") == ("a", "b")
    assert split_output("a") == ("a", "a")


def test_custom_decoders():
    inst = selected_bit_base()
    tree = full_revelation(2, 4, inst.f1)
    # Alice reads y_x from Bob's message; Bob knows x from Alice's
    dec = Decoders(lambda x, t: inst.f1[x][t.messages[1]], lambda y, t: inst.f1[t.messages[0]][y])
    assert leakage(tree, inst, decoders=dec).error_prob == 0


def test_frontier_selected_bit():
    res = brute_force_noninteractive(selected_bit_base(), 2, 4)
    assert res.pairs_checked == 2**2 * 4**4
    assert abs(res.min_zero_error_leakage - 1.0) < 1e-9
    w = res.zero_error_witness
    assert w.error == 0 and len(set(w.phi)) == 2 and len(set(w.psi)) == 4
    errs = [p.error for p in res.points]
    bits = [p.leakage_bits for p in res.points]
    assert errs == sorted(errs) and bits == sorted(bits, reverse=True)
    assert res.points[0].error == 0 and res.points[-1].leakage_bits == 0.0


def test_zero_error_needs_injective_encoders():
    # independent of the search: a zero-error pair must reveal both x and y
    inst = selected_bit_base()
    for phi in itertools.product(range(2), repeat=2):
        for psi in itertools.product(range(4), repeat=4):
            da, db = map_decoders(inst, phi, psi)
            ok = all(da[x, psi[y]] == inst.f1[x][y] and db[y, phi[x]] == inst.f2[x][y]
                     for x in range(2) for y in range(4))
            if ok:
                assert len(set(phi)) == 2 and len(set(psi)) == 4
                assert abs(oracle_pair_leakage(inst, phi, psi) - 1.0) < 1e-12


def test_frontier_points_replay_through_leakage():
    inst = selected_bit_base()
    res = brute_force_noninteractive(inst, 2, 4)
    for p in res.points:
        tree, dec = encoder_protocol(inst, p.phi, p.psi)
        rep = leakage(tree, inst, decoders=dec)
        assert rep.error_prob == p.error
        assert abs(rep.total_bits - p.leakage_bits) <= 1e-12
        assert abs(p.leakage_bits - oracle_pair_leakage(inst, p.phi, p.psi)) <= 1e-12


def test_frontier_csv_and_dict():
    res = brute_force_noninteractive(selected_bit_base(), 2, 2)
    csv = res.to_csv().splitlines()
    assert csv[0] == "error,leakage_bits,encoder_description"
    assert len(csv) == len(res.points) + 1
    assert res.to_dict()["scope"].startswith("deterministic")


def small_instance(f, g):
    a = Alphabet(("0", "1"))
    return EavesdropInstance(JointDistribution.uniform(a, a), f, f, g)


def test_constant_g_has_free_zero_error_point():
    f = tabulate(2, 2, lambda x, y: x ^ y)
    res = brute_force_noninteractive(small_instance(f, [["c"] * 2] * 2), 2, 2)
    assert res.min_zero_error_leakage == 0.0 and res.zero_error_witness.exact_zero


def test_g_equal_to_f_equal_to_x():
    # Bob must learn x, which is exactly what must stay hidden
    f = tabulate(2, 2, lambda x, y: x)
    res = brute_force_noninteractive(small_instance(f, f), 2, 2)
    assert abs(res.min_zero_error_leakage - 1.0) < 1e-9


def test_frontier_cap_and_block_length():
    with pytest.raises(CapExceeded):
        brute_force_noninteractive(selected_bit_base(), 4, 40)
    with pytest.raises(ValueError):
        brute_force_noninteractive(selected_bit_base(), 2, 4, n=2)


def test_instance_roundtrip():
    inst = selected_bit_base()
    assert parse_instance(inst.to_dict()) == inst


def test_omniscience():
    inst = selected_bit_base()
    res = omniscience_feasible(inst.dist, inst.g)
    assert not res.feasible and res.i_xy == 0.0 and abs(res.h_g - 1.0) < 1e-12
    a = Alphabet(("0", "1", "2", "3"))
    diag = JointDistribution(a, a, [[Fraction(int(i == j), 4) for j in range(4)] for i in range(4)])
    bit = tabulate(4, 4, lambda x, y: x & 1)
    res = omniscience_feasible(diag, bit)
    assert res.feasible and abs(res.i_xy - 2.0) < 1e-12 and math.isclose(res.h_g, 1.0)
