"""Reference instances used by the tests, the acceptance suite and ``data/``."""

from __future__ import annotations

from fractions import Fraction

from .core import Alphabet, FunctionTriple, JointDistribution, tabulate

X3 = Alphabet(("x1", "x2", "x3"))
Y3 = Alphabet(("y1", "y2", "y3"))
BIT = Alphabet(("0", "1"))
PAIR = Alphabet(("00", "01", "10", "11"))

HIDDEN3_F = (("0", "0", "1"), ("0", "1", "1"), ("2", "1", "0"))
HIDDEN3_G_BY_Y = ("1", "2", "2")
HIDDEN3_H_BY_X = ("1", "1", "2")


def hidden_3x3() -> FunctionTriple:
    """3x3 triple whose g depends on y only and h on x only; securely computable."""
    return FunctionTriple(
        X3, Y3, HIDDEN3_F,
        tabulate(3, 3, lambda x, y: HIDDEN3_G_BY_Y[y]),
        tabulate(3, 3, lambda x, y: HIDDEN3_H_BY_X[x]),
    )


def standard(triple: FunctionTriple) -> FunctionTriple:
    """Same f, with the classic requirement g(x, y) = y and h(x, y) = x."""
    nx, ny = triple.shape
    return triple.with_hidden(
        tabulate(nx, ny, lambda x, y: triple.y_alphabet[y]),
        tabulate(nx, ny, lambda x, y: triple.x_alphabet[x]),
    )


def classic_3x3() -> FunctionTriple:
    return standard(hidden_3x3())


def classic_and() -> FunctionTriple:
    return standard(FunctionTriple(BIT, BIT, tabulate(2, 2, lambda x, y: x & y), [["0"] * 2] * 2, [["0"] * 2] * 2))


def and_hidden_bit() -> FunctionTriple:
    """f = x AND y', g = y'', h = x with y = (y', y'')."""
    return FunctionTriple(
        BIT, PAIR,
        tabulate(2, 4, lambda x, y: x & int(PAIR[y][0])),
        tabulate(2, 4, lambda x, y: PAIR[y][1]),
        tabulate(2, 4, lambda x, y: BIT[x]),
    )


def one_way() -> FunctionTriple:
    """The AND-with-hidden-bit triple with the roles swapped: the holder of y = (y', y'') is the sender.

    The receiver (holding x) computes x AND y' and must not learn y''.
    """
    return FunctionTriple(
        PAIR, BIT,
        tabulate(4, 2, lambda s, r: r & int(PAIR[s][0])),
        tabulate(4, 2, lambda s, r: PAIR[s][1]),
        tabulate(4, 2, lambda s, r: BIT[r]),
    )


def one_way_uniform() -> JointDistribution:
    return JointDistribution.uniform(PAIR, BIT)


def one_way_correlated() -> JointDistribution:
    """X uniform and independent of Y, which is uniform on {00, 11}."""
    q = Fraction(1, 4)
    rows = [[q, q] if PAIR[s][0] == PAIR[s][1] else [0, 0] for s in range(4)]
    return JointDistribution(PAIR, BIT, rows)


def constant_hidden(f_table, value: str = "c") -> FunctionTriple:
    nx, ny = len(f_table), len(f_table[0])
    xa = Alphabet(tuple(f"x{i + 1}" for i in range(nx)))
    ya = Alphabet(tuple(f"y{j + 1}" for j in range(ny)))
    const = [[value] * ny for _ in range(nx)]
    return FunctionTriple(xa, ya, f_table, const, const)


def uniform(triple: FunctionTriple) -> JointDistribution:
    return JointDistribution.uniform(triple.x_alphabet, triple.y_alphabet)
