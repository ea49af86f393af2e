"""Exact rational containers and size/norm measurements.

Scalars are :class:`fractions.Fraction` (always stored in lowest terms with a
positive denominator).  Vectors are plain tuples of fractions and matrices are
stored sparsely in :class:`RatMatrix`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]

Number = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: Number | float) -> Fraction:
    """Convert ``value`` to a Fraction without any loss of precision.

    Floats are converted exactly (their binary value), strings accept
    ``"3/4"``, ``"0.1"`` and ``"1e-3"`` forms.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def as_ratvector(values: Iterable) -> tuple:
    return tuple(as_rational(v) for v in values)


class RatMatrix:
    """Sparse rational matrix in coordinate form.

    Entries are kept in a dict keyed by ``(row, col)``; explicit zeros are
    dropped on construction.  Instances are treated as immutable.
    """

    __slots__ = ("rows", "cols", "_entries", "_by_row", "_by_col")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], Number] | Iterable | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        data: dict[tuple[int, int], Fraction] = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, Mapping) else (((i, j), v) for i, j, v in entries)
            for (i, j), v in items:
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols} matrix")
                if (i, j) in data:
                    raise ValueError(f"duplicate entry ({i}, {j})")
                v = as_rational(v)
                if v:
                    data[(i, j)] = v
        self._entries = dict(sorted(data.items()))
        by_row: dict[int, dict[int, Fraction]] = {}
        by_col: dict[int, dict[int, Fraction]] = {}
        for (i, j), v in self._entries.items():
            by_row.setdefault(i, {})[j] = v
            by_col.setdefault(j, {})[i] = v
        self._by_row = by_row
        self._by_col = by_col

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Number]]) -> "RatMatrix":
        m = len(rows)
        n = len(rows[0]) if m else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                entries[(i, j)] = v
        return cls(m, n, entries)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def items(self) -> Iterator[tuple[int, int, Fraction]]:
        for (i, j), v in self._entries.items():
            yield i, j, v

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self._entries.get(key, ZERO)

    def row(self, i: int) -> dict[int, Fraction]:
        return self._by_row.get(i, {})

    def col(self, j: int) -> dict[int, Fraction]:
        return self._by_col.get(j, {})

    def to_dense(self) -> list[list[Fraction]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    def columns(self, idx: Sequence[int]) -> "RatMatrix":
        """Submatrix formed by the columns ``idx`` in the given order."""
        entries = {}
        for new, j in enumerate(idx):
            for i, v in self.col(j).items():
                entries[(i, new)] = v
        return RatMatrix(self.rows, len(idx), entries)

    def matvec(self, x: Sequence[Fraction]) -> tuple:
        if len(x) != self.cols:
            raise ValueError("dimension mismatch in matvec")
        out = [ZERO] * self.rows
        for i, row in self._by_row.items():
            s = ZERO
            for j, v in row.items():
                xj = x[j]
                if xj:
                    s += v * xj
            out[i] = s
        return tuple(out)

    def rmatvec(self, y: Sequence[Fraction]) -> tuple:
        """Return ``A^T y``."""
        if len(y) != self.rows:
            raise ValueError("dimension mismatch in rmatvec")
        out = [ZERO] * self.cols
        for j, col in self._by_col.items():
            s = ZERO
            for i, v in col.items():
                yi = y[i]
                if yi:
                    s += v * yi
            out[j] = s
        return tuple(out)

    def matmul(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matmul")
        acc: dict[tuple[int, int], Fraction] = {}
        for i, row in self._by_row.items():
            for k, a in row.items():
                for j, b in other.row(k).items():
                    acc[(i, j)] = acc.get((i, j), ZERO) + a * b
        return RatMatrix(self.rows, other.cols, acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self._entries.items())))

    def __repr__(self) -> str:
        return f"RatMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


# -- measurements ---------------------------------------------------------


def _int_size(n: int) -> int:
    # ceil(log2(k + 1)) == k.bit_length() for k >= 0
    return 1 + abs(n).bit_length()


def encoding_length(x) -> int:
    """Bit size of an integer, rational, vector or matrix.

    ``<n> = 1 + ceil(log2(|n| + 1))``, ``<p/q> = <p> + <q>`` and containers
    sum over their entries (a matrix counts its zeros too).
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a valid number")
    if isinstance(x, int):
        return _int_size(x)
    if isinstance(x, Fraction):
        return _int_size(x.numerator) + _int_size(x.denominator)
    if isinstance(x, RatMatrix):
        zeros = x.rows * x.cols - x.nnz
        # <0/1> = 1 + 2
        return 3 * zeros + sum(encoding_length(v) for _, _, v in x.items())
    if isinstance(x, (tuple, list)):
        return sum(encoding_length(as_rational(v) if not isinstance(v, int) else v) for v in x)
    raise TypeError(f"unsupported type {type(x).__name__}")


def max_norm(v: Sequence[Fraction]) -> Fraction:
    if len(v) == 0:
        raise ValueError("max_norm of an empty vector")
    return max(abs(as_rational(e)) for e in v)


def row_sum_norm(A: RatMatrix) -> Fraction:
    if A.rows == 0:
        raise ValueError("row_sum_norm of an empty matrix")
    return max((sum((abs(v) for v in A.row(i).values()), ZERO) for i in range(A.rows)), default=ZERO)


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


def _ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def hadamard_denominator_bound(lp) -> int:
    """Integer upper bound on the denominators of every basic solution of ``lp``.

    Evaluates ``ceil(n^(m/2) * L^n * prod_j ||A_j||_inf)`` exactly, where ``L`` is
    the lcm of all denominators of ``A, b, l, c`` and ``||A_j||_inf`` is the
    row-sum norm of row ``j`` taken as a 1 x n matrix.
    """
    A = lp.A
    m, n = A.shape
    if m < 1 or n < m:
        raise ValueError("need m >= 1 rows and n >= m columns")
    L = lcm_of_denominators(
        [v for _, _, v in A.items()] + list(lp.b) + list(lp.l) + list(lp.c)
    )
    prod = ONE
    for i in range(m):
        row = A.row(i)
        if not row:
            raise ValueError(f"row {i} of A is zero; A does not have full row rank")
        prod *= sum(abs(v) for v in row.values())
    rest = Fraction(L) ** n * prod
    # n^(m/2) is irrational for odd m with non-square n
    if m % 2 == 0:
        return math.ceil(Fraction(n) ** (m // 2) * rest)
    scaled = Fraction(n) ** (m // 2) * rest  # times sqrt(n)
    # ceil(scaled * sqrt(n)) = ceil(sqrt(scaled^2 * n))
    return _ceil_sqrt(math.ceil(scaled * scaled * n))
