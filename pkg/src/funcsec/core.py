"""Domain types, exact rational helpers and JSON I/O.

Every probability in the package is a :class:`fractions.Fraction`.  Floats
only show up when an entropy is reported.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Sequence

Table = tuple[tuple[str, ...], ...]


class InputError(ValueError):
    """Malformed input document; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class CapExceeded(ValueError):
    """A configured size limit would be exceeded."""


@dataclass(frozen=True)
class Limits:
    max_alphabet: int = 64
    max_block_outcomes: int = 2**20
    max_partition_inputs: int = 10
    max_selected_bit_n: int = 3
    max_encoder_pairs: int = 2**20


DEFAULT_LIMITS = Limits()


class Axis(Enum):
    ROW = "row"
    COL = "col"

    @property
    def other(self) -> "Axis":
        return Axis.COL if self is Axis.ROW else Axis.ROW


# -- rationals -------------------------------------------------------------


def parse_rational(text: Any, path: str = "$") -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InputError(f"expected a rational string like '1/4', got {text!r}", path)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse rational {text!r}", path) from None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# -- alphabets and rectangles ----------------------------------------------


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(str(s) for s in self.symbols))
        if not self.symbols:
            raise InputError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            dup = next(s for s in self.symbols if self.symbols.count(s) > 1)
            raise InputError(f"duplicate alphabet label {dup!r}")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __getitem__(self, i: int) -> str:
        return self.symbols[i]

    def index(self, label: str) -> int:
        return self.symbols.index(label)


@dataclass(frozen=True)
class SubRect:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(sorted(set(self.rows)))
        cols = tuple(sorted(set(self.cols)))
        if not rows or not cols:
            raise ValueError("sub-rectangle needs at least one row and one column")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def full(cls, nx: int, ny: int) -> "SubRect":
        return cls(tuple(range(nx)), tuple(range(ny)))

    def along(self, axis: Axis) -> tuple[int, ...]:
        return self.rows if axis is Axis.ROW else self.cols

    def restrict(self, axis: Axis, indices: Iterable[int]) -> "SubRect":
        if axis is Axis.ROW:
            return SubRect(tuple(indices), self.cols)
        return SubRect(self.rows, tuple(indices))

    def cells(self) -> Iterator[tuple[int, int]]:
        return itertools.product(self.rows, self.cols)

    def __contains__(self, cell: tuple[int, int]) -> bool:
        x, y = cell
        return x in self.rows and y in self.cols

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols)}

    @classmethod
    def from_dict(cls, doc: Mapping, path: str = "$") -> "SubRect":
        try:
            rows = [int(r) for r in doc["rows"]]
            cols = [int(c) for c in doc["cols"]]
        except (KeyError, TypeError, ValueError):
            raise InputError("rect needs integer lists 'rows' and 'cols'", path) from None
        try:
            return cls(tuple(rows), tuple(cols))
        except ValueError as exc:
            raise InputError(str(exc), path) from None


# -- function triples ------------------------------------------------------


def _freeze_table(table: Sequence[Sequence[Any]]) -> Table:
    return tuple(tuple(str(v) for v in row) for row in table)


def _check_shape(table: Table, nx: int, ny: int, name: str) -> None:
    if len(table) != nx:
        raise InputError(f"expected {nx} rows, got {len(table)}", f"$.{name}")
    for i, row in enumerate(table):
        if len(row) != ny:
            raise InputError(f"expected {ny} entries, got {len(row)}", f"$.{name}[{i}]")


@dataclass(frozen=True)
class FunctionTriple:
    """Tables of f, g and h over X x Y, rows indexed by x.

    f is what the parties compute, g must stay hidden from Alice and h from Bob.
    """

    x_alphabet: Alphabet
    y_alphabet: Alphabet
    f: Table
    g: Table
    h: Table

    def __post_init__(self):
        nx, ny = len(self.x_alphabet), len(self.y_alphabet)
        for name in ("f", "g", "h"):
            table = _freeze_table(getattr(self, name))
            _check_shape(table, nx, ny, name)
            object.__setattr__(self, name, table)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.x_alphabet), len(self.y_alphabet)

    @property
    def full_rect(self) -> SubRect:
        return SubRect.full(*self.shape)

    def transposed(self) -> "FunctionTriple":
        """Swap the parties: f is transposed and the roles of g and h exchange."""
        return FunctionTriple(
            self.y_alphabet,
            self.x_alphabet,
            _transpose(self.f),
            _transpose(self.h),
            _transpose(self.g),
        )

    def with_hidden(self, g: Sequence[Sequence[Any]], h: Sequence[Sequence[Any]]) -> "FunctionTriple":
        return FunctionTriple(self.x_alphabet, self.y_alphabet, self.f, g, h)

    def to_dict(self) -> dict:
        return {
            "x_alphabet": list(self.x_alphabet),
            "y_alphabet": list(self.y_alphabet),
            "f": [list(r) for r in self.f],
            "g": [list(r) for r in self.g],
            "h": [list(r) for r in self.h],
        }


def _transpose(table: Table) -> Table:
    return tuple(zip(*table))


def tabulate(nx: int, ny: int, fn) -> Table:
    """Build a table from ``fn(x, y)`` over index ranges."""
    return tuple(tuple(str(fn(x, y)) for y in range(ny)) for x in range(nx))


# -- distributions ---------------------------------------------------------


@dataclass(frozen=True)
class JointDistribution:
    x_alphabet: Alphabet
    y_alphabet: Alphabet
    pmf: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        pmf = tuple(tuple(Fraction(p) for p in row) for row in self.pmf)
        nx, ny = len(self.x_alphabet), len(self.y_alphabet)
        if len(pmf) != nx or any(len(r) != ny for r in pmf):
            raise InputError(f"pmf must be {nx}x{ny}", "$.pmf")
        for i, row in enumerate(pmf):
            for j, p in enumerate(row):
                if p < 0:
                    raise InputError(f"negative probability {p}", f"$.pmf[{i}][{j}]")
        total = sum(sum(r) for r in pmf)
        if total != 1:
            raise InputError(f"probabilities sum to {total}, not 1", "$.pmf")
        object.__setattr__(self, "pmf", pmf)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.x_alphabet), len(self.y_alphabet)

    def prob(self, x: int, y: int) -> Fraction:
        return self.pmf[x][y]

    def support(self) -> list[tuple[int, int]]:
        nx, ny = self.shape
        return [(x, y) for x in range(nx) for y in range(ny) if self.pmf[x][y]]

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        for x, row in enumerate(self.pmf):
            for y, p in enumerate(row):
                yield (x, y), p

    def marginal_x(self) -> tuple[Fraction, ...]:
        return tuple(sum(row) for row in self.pmf)

    def marginal_y(self) -> tuple[Fraction, ...]:
        return tuple(sum(col) for col in zip(*self.pmf))

    def to_dict(self) -> dict:
        return {
            "x_alphabet": list(self.x_alphabet),
            "y_alphabet": list(self.y_alphabet),
            "pmf": [[format_rational(p) for p in row] for row in self.pmf],
        }

    @classmethod
    def uniform(cls, x_alphabet: Alphabet, y_alphabet: Alphabet) -> "JointDistribution":
        p = Fraction(1, len(x_alphabet) * len(y_alphabet))
        return cls(x_alphabet, y_alphabet, tuple((p,) * len(y_alphabet) for _ in x_alphabet))

    @classmethod
    def from_weights(cls, x_alphabet: Alphabet, y_alphabet: Alphabet, weights) -> "JointDistribution":
        total = sum(sum(Fraction(w) for w in row) for row in weights)
        return cls(x_alphabet, y_alphabet, tuple(tuple(Fraction(w) / total for w in row) for row in weights))


# -- parsing ---------------------------------------------------------------


def _load(document: str | bytes | Mapping) -> Mapping:
    if isinstance(document, Mapping):
        return document
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(doc, dict):
        raise InputError("top level must be a JSON object")
    return doc


def _field(doc: Mapping, key: str, path: str = "$") -> Any:
    if key not in doc:
        raise InputError(f"missing field '{key}'", path)
    return doc[key]


def _alphabet(doc: Mapping, key: str, limits: Limits) -> Alphabet:
    raw = _field(doc, key)
    path = f"$.{key}"
    if not isinstance(raw, list):
        raise InputError("alphabet must be a list of labels", path)
    if len(raw) > limits.max_alphabet:
        raise CapExceeded(f"{path}: alphabet size {len(raw)} exceeds cap {limits.max_alphabet}")
    try:
        return Alphabet(tuple(raw))
    except InputError as exc:
        raise InputError(str(exc).split(": ", 1)[1], path) from None


def _table(doc: Mapping, key: str) -> list[list[Any]]:
    raw = _field(doc, key)
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise InputError("table must be a list of rows", f"$.{key}")
    for i, row in enumerate(raw):
        for j, v in enumerate(row):
            if not isinstance(v, (str, int)) or isinstance(v, bool):
                raise InputError(f"value label must be a string or integer, got {v!r}", f"$.{key}[{i}][{j}]")
    return raw


def parse_triple(document: str | bytes | Mapping, limits: Limits = DEFAULT_LIMITS) -> FunctionTriple:
    doc = _load(document)
    xa = _alphabet(doc, "x_alphabet", limits)
    ya = _alphabet(doc, "y_alphabet", limits)
    tables = {name: _table(doc, name) for name in ("f", "g", "h")}
    return FunctionTriple(xa, ya, tables["f"], tables["g"], tables["h"])


def parse_distribution(document: str | bytes | Mapping, limits: Limits = DEFAULT_LIMITS) -> JointDistribution:
    doc = _load(document)
    xa = _alphabet(doc, "x_alphabet", limits)
    ya = _alphabet(doc, "y_alphabet", limits)
    raw = _table(doc, "pmf")
    pmf = [[parse_rational(v, f"$.pmf[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(raw)]
    if len(pmf) != len(xa):
        raise InputError(f"expected {len(xa)} rows, got {len(pmf)}", "$.pmf")
    for i, row in enumerate(pmf):
        if len(row) != len(ya):
            raise InputError(f"expected {len(ya)} entries, got {len(row)}", f"$.pmf[{i}]")
    return JointDistribution(xa, ya, pmf)


def dumps(obj: Any, pretty: bool = True) -> str:
    """Deterministic JSON rendering used by every writer in the package."""
    if pretty:
        return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def serialize_triple(triple: FunctionTriple) -> str:
    return dumps(triple.to_dict())


def serialize_distribution(dist: JointDistribution) -> str:
    return dumps(dist.to_dict())


# -- i.i.d. blocks ---------------------------------------------------------

BLOCK_SEP = ","


def block_label(labels: Sequence[str]) -> str:
    return BLOCK_SEP.join(labels)


def block_digits(index: int, base: int, n: int) -> tuple[int, ...]:
    """Mixed-radix digits of a block index, first coordinate most significant."""
    digits = []
    for _ in range(n):
        index, d = divmod(index, base)
        digits.append(d)
    return tuple(reversed(digits))


def block_index(digits: Sequence[int], base: int) -> int:
    idx = 0
    for d in digits:
        idx = idx * base + d
    return idx


def block_alphabet(alpha: Alphabet, n: int) -> Alphabet:
    return Alphabet(tuple(block_label(t) for t in itertools.product(alpha.symbols, repeat=n)))


def check_block_size(nx: int, ny: int, n: int, limits: Limits = DEFAULT_LIMITS) -> None:
    if n < 1:
        raise ValueError("block length must be positive")
    outcomes = (nx * ny) ** n
    if outcomes > limits.max_block_outcomes:
        raise CapExceeded(f"{nx}^{n} x {ny}^{n} = {outcomes} outcomes exceeds cap {limits.max_block_outcomes}")


def iid_extend(dist: JointDistribution, n: int, limits: Limits = DEFAULT_LIMITS) -> JointDistribution:
    """n-fold product distribution over X^n x Y^n, labels joined with ','."""
    nx, ny = dist.shape
    check_block_size(nx, ny, n, limits)
    xs = list(itertools.product(range(nx), repeat=n))
    ys = list(itertools.product(range(ny), repeat=n))
    pmf = tuple(
        tuple(math.prod((dist.pmf[a][b] for a, b in zip(xb, yb)), start=Fraction(1)) for yb in ys)
        for xb in xs
    )
    return JointDistribution(block_alphabet(dist.x_alphabet, n), block_alphabet(dist.y_alphabet, n), pmf)


def block_table(table: Table, n: int) -> Table:
    """Coordinate-wise extension of a value table to blocks of length n."""
    nx, ny = len(table), len(table[0])
    xs = list(itertools.product(range(nx), repeat=n))
    ys = list(itertools.product(range(ny), repeat=n))
    return tuple(
        tuple(block_label([table[a][b] for a, b in zip(xb, yb)]) for yb in ys) for xb in xs
    )
