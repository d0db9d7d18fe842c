"""Dense matrices of rational functions (the sizes in play are at most 3x3)."""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .ratfunc import RatFunc


class DimensionError(ValueError):
    """Matrix shapes are incompatible for the requested operation."""


class MatRF:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [tuple(RatFunc.coerce(v) for v in row) for row in entries]
        if not rows or not rows[0]:
            raise DimensionError("matrix must have at least one row and column")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(rows)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "MatRF":
        cols = rows if cols is None else cols
        z = RatFunc()
        return cls([[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "MatRF":
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, c) -> "MatRF":
        c = RatFunc.coerce(c)
        z = RatFunc()
        return cls([[c if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, n: int, i: int, j: int, c=1) -> "MatRF":
        """Matrix with ``c`` at (i, j), zero-based, and zeros elsewhere."""
        out = [[RatFunc()] * n for _ in range(n)]
        out[i][j] = RatFunc.coerce(c)
        return cls(out)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def map(self, fn: Callable[[RatFunc], RatFunc]) -> "MatRF":
        return MatRF([[fn(v) for v in row] for row in self.entries])

    def is_zero(self) -> bool:
        return all(not v for row in self.entries for v in row)

    def __bool__(self):
        return not self.is_zero()

    def vars(self) -> set:
        out = set()
        for row in self.entries:
            for v in row:
                out |= v.vars()
        return out

    def depends_only_on(self, var: str) -> bool:
        return self.vars() <= {var}

    def iter_entries(self) -> Iterable:
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                yield i, j, v

    # -- arithmetic -------------------------------------------------------
    def _check_same(self, other: "MatRF"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, MatRF):
            return NotImplemented
        self._check_same(other)
        return MatRF([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, MatRF):
            return NotImplemented
        self._check_same(other)
        return MatRF([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map(lambda v: -v)

    def __matmul__(self, other: "MatRF") -> "MatRF":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = RatFunc()
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if not a:
                        continue
                    b = other.entries[k][j]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return MatRF(out)

    def __mul__(self, other):
        if isinstance(other, MatRF):
            return self @ other
        try:
            c = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    def __rmul__(self, other):
        try:
            c = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    def scale(self, c) -> "MatRF":
        c = RatFunc.coerce(c)
        return self.map(lambda v: v * c)

    def derivative(self, var: str) -> "MatRF":
        return self.map(lambda v: v.derivative(var))

    def transpose(self) -> "MatRF":
        return MatRF([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __eq__(self, other):
        if not isinstance(other, MatRF):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_text(self) -> str:
        return "[" + ", ".join("[" + ", ".join(v.to_text() for v in row) + "]" for row in self.entries) + "]"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MatRF({self.to_text()})"


def mat_arith(a: MatRF, b, kind: str) -> MatRF:
    """Dispatch helper: kind is add, sub, mul or scale (b a RatFunc)."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a @ b
    if kind == "scale":
        return a.scale(b)
    raise ValueError(f"unknown matrix operation {kind!r}")
