"""Dense exact rational matrices and the subspace queries built on them."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from ._backend import echelon

Vector = tuple[Fraction, ...]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point entries are not allowed in exact matrices")
    return Fraction(x)


class RationalMatrix:
    """Immutable dense matrix with :class:`fractions.Fraction` entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(_frac(x) for x in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ValueError(f"ragged matrix: expected {cols} columns, got {len(row)}")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(([0] * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, k: int) -> RationalMatrix:
        return cls(([int(i == j) for j in range(k)] for i in range(k)), k)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> RationalMatrix:
        for c in columns:
            if len(c) != rows:
                raise ValueError("column length does not match row count")
        return cls(([c[i] for c in columns] for i in range(rows)), len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def row_list(self) -> list[Vector]:
        return list(self._data)

    def select_columns(self, idx: Iterable[int]) -> RationalMatrix:
        idx = list(idx)
        return RationalMatrix(([r[j] for j in idx] for r in self._data), len(idx))

    @property
    def T(self) -> RationalMatrix:
        return RationalMatrix(zip(*self._data), self.rows) if self.rows else RationalMatrix.zeros(self.cols, 0)

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return RationalMatrix(
            ([sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols] for r in self._data),
            other.cols,
        )

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        v = [_frac(x) for x in v]
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self._data], dtype=float).reshape(self.rows, self.cols)


def _integer_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    # scaling a row by a nonzero constant preserves rank and null space
    out = []
    for row in rows:
        row = [_frac(x) for x in row]
        d = lcm(*(x.denominator for x in row)) if row else 1
        out.append([x.numerator * (d // x.denominator) for x in row])
    return out


def _as_rows(M) -> tuple[list[Sequence], int]:
    if isinstance(M, RationalMatrix):
        return M.row_list(), M.cols
    rows = [list(r) for r in M]
    return rows, (len(rows[0]) if rows else 0)


def rank(M) -> int:
    """Exact rank of a :class:`RationalMatrix` (or a list of equal-length rows)."""
    rows, ncols = _as_rows(M)
    if not rows or ncols == 0:
        return 0
    return echelon(_integer_rows(rows), ncols)[0]


def span_rank(vectors: Sequence[Sequence], dim: int) -> int:
    """Dimension of the span of ``vectors`` in a ``dim``-dimensional space."""
    for v in vectors:
        if len(v) != dim:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {dim}")
    if not vectors or dim == 0:
        return 0
    return echelon(_integer_rows(vectors), dim)[0]


def _primitive(v: list[Fraction]) -> Vector:
    d = lcm(*(x.denominator for x in v))
    ints = [x.numerator * (d // x.denominator) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(Fraction(x // g) for x in ints) if g else tuple(Fraction(0) for _ in v)


def kernel_basis(M) -> list[Vector]:
    """Basis of the right null space, one vector per free column.

    The vector for free column ``f`` is supported on ``f`` and the pivot
    columns only (the fundamental circuit of ``f`` against the pivot basis),
    scaled to a primitive integer vector with a positive entry at ``f``.
    """
    rows, ncols = _as_rows(M)
    if ncols == 0:
        return []
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    r, pivots, ech = echelon(_integer_rows(rows), ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for k in range(r - 1, -1, -1):
            p = pivots[k]
            row = ech[k]
            s = sum((row[j] * x[j] for j in range(p + 1, ncols) if row[j]), Fraction(0))
            x[p] = -s / row[p]
        basis.append(_primitive(x))
    return basis


def member(v: Sequence, span: Sequence[Sequence]) -> bool:
    """True iff ``v`` lies in the linear span of ``span`` (decided exactly)."""
    dim = len(v)
    for w in span:
        if len(w) != dim:
            raise ValueError(f"dimension mismatch: {len(w)} != {dim}")
    if all(_frac(x) == 0 for x in v):
        return True
    if not span:
        return False
    return span_rank(list(span), dim) == span_rank(list(span) + [v], dim)


def sum_is_direct(subspaces: Sequence[Sequence[Sequence]], dim: int | None = None) -> bool:
    """True iff the sum of the spanned subspaces is direct.

    Each subspace is given by a spanning set; the test compares
    ``dim(sum)`` against the sum of the individual dimensions.
    """
    if dim is None:
        dims = {len(v) for s in subspaces for v in s}
        if len(dims) > 1:
            raise ValueError("subspaces live in different ambient dimensions")
        if not dims:
            return True
        dim = dims.pop()
    total = sum(span_rank(list(s), dim) for s in subspaces)
    combined = [v for s in subspaces for v in s]
    return span_rank(combined, dim) == total
