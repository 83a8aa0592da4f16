"""Exact dense linear algebra over arbitrary-precision rationals.

Scalars are ``fractions.Fraction`` throughout, which is already canonical
(reduced, positive denominator), so every computation in this package is
exact and there is no tolerance anywhere.  Matrices are dense and row-major.
Empty matrices (zero rows or zero columns) are legal first-class values;
they represent maps to or from the zero space and show up routinely as
fibres over zero-dimensional charts.

Pivot choice in elimination is deterministic: first nonzero entry in column
scan order.  Everything derived from it (kernels, quotient presentations,
colimit bases) is therefore reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "Rational",
    "RatMat",
    "QuotientPresentation",
    "rational",
    "kernel_basis",
    "cokernel_presentation",
    "solve_exact",
]

Rational = Fraction


def rational(value) -> Fraction:
    """Coerce an exact scalar.  Floats are rejected: no rounding, ever."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as an exact rational scalar")


class RatMat:
    """Dense matrix of Fractions with exact arithmetic and value semantics."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, entries: Sequence) -> None:
        if rows < 0 or cols < 0:
            raise ValueError(f"negative matrix shape ({rows}, {cols})")
        data = [rational(e) for e in entries]
        if len(data) != rows * cols:
            raise ValueError(
                f"a {rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}"
            )
        self.rows = rows
        self.cols = cols
        self.data = data

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMat":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMat":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMat":
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
            if cols is not None and cols != width:
                raise ValueError(f"declared {cols} columns but rows have {width}")
            if any(len(r) != width for r in rows):
                raise ValueError("rows of unequal length")
            return cls(len(rows), width, [e for r in rows for e in r])
        return cls(0, 0 if cols is None else cols, [])

    @classmethod
    def column(cls, entries: Sequence) -> "RatMat":
        entries = list(entries)
        return cls(len(entries), 1, entries)

    @classmethod
    def row(cls, entries: Sequence) -> "RatMat":
        entries = list(entries)
        return cls(1, len(entries), entries)

    @staticmethod
    def hstack(blocks: Sequence["RatMat"], rows: int | None = None) -> "RatMat":
        blocks = list(blocks)
        if not blocks:
            if rows is None:
                raise ValueError("hstack of no blocks needs an explicit row count")
            return RatMat(rows, 0, [])
        height = blocks[0].rows
        if rows is not None and rows != height:
            raise ValueError(f"declared {rows} rows but blocks have {height}")
        if any(b.rows != height for b in blocks):
            raise ValueError("hstack blocks disagree on row count")
        width = sum(b.cols for b in blocks)
        data = []
        for i in range(height):
            for b in blocks:
                data.extend(b.data[i * b.cols : (i + 1) * b.cols])
        return RatMat(height, width, data)

    @staticmethod
    def vstack(blocks: Sequence["RatMat"], cols: int | None = None) -> "RatMat":
        blocks = list(blocks)
        if not blocks:
            if cols is None:
                raise ValueError("vstack of no blocks needs an explicit column count")
            return RatMat(0, cols, [])
        width = blocks[0].cols
        if cols is not None and cols != width:
            raise ValueError(f"declared {cols} columns but blocks have {width}")
        if any(b.cols != width for b in blocks):
            raise ValueError("vstack blocks disagree on column count")
        height = sum(b.rows for b in blocks)
        data = []
        for b in blocks:
            data.extend(b.data)
        return RatMat(height, width, data)

    # -- access -----------------------------------------------------------

    def __getitem__(self, key) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) out of range for {self.rows}x{self.cols}")
        return self.data[i * self.cols + j]

    def row_list(self, i: int) -> list[Fraction]:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def col_list(self, j: int) -> list[Fraction]:
        return [self.data[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row_list(i) for i in range(self.rows)]

    def column_block(self, start: int, count: int) -> "RatMat":
        """Contiguous slice of columns, as a new matrix."""
        data = []
        for i in range(self.rows):
            data.extend(self.data[i * self.cols + start : i * self.cols + start + count])
        return RatMat(self.rows, count, data)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMat":
        row_idx = list(row_idx)
        col_idx = list(col_idx)
        data = [self.data[i * self.cols + j] for i in row_idx for j in col_idx]
        return RatMat(len(row_idx), len(col_idx), data)

    # -- arithmetic -------------------------------------------------------

    def __matmul__(self, other: "RatMat") -> "RatMat":
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = [Fraction(0)] * (self.rows * other.cols)
        for i in range(self.rows):
            base = i * self.cols
            for k in range(self.cols):
                a = self.data[base + k]
                if a == 0:
                    continue
                obase = k * other.cols
                rbase = i * other.cols
                for j in range(other.cols):
                    out[rbase + j] += a * other.data[obase + j]
        return RatMat(self.rows, other.cols, out)

    def __add__(self, other: "RatMat") -> "RatMat":
        self._require_same_shape(other)
        return RatMat(self.rows, self.cols, [a + b for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "RatMat") -> "RatMat":
        self._require_same_shape(other)
        return RatMat(self.rows, self.cols, [a - b for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "RatMat":
        return RatMat(self.rows, self.cols, [-a for a in self.data])

    def scale(self, c) -> "RatMat":
        c = rational(c)
        return RatMat(self.rows, self.cols, [c * a for a in self.data])

    def transpose(self) -> "RatMat":
        data = [self.data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)]
        return RatMat(self.cols, self.rows, data)

    def _require_same_shape(self, other: "RatMat") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    # -- predicates and elimination ---------------------------------------

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMat):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.data)))

    def __repr__(self) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"RatMat({self.rows}x{self.cols})"
        body = "; ".join(
            " ".join(str(e) for e in self.row_list(i)) for i in range(self.rows)
        )
        return f"RatMat({self.rows}x{self.cols}: {body})"

    def rref(self) -> tuple["RatMat", tuple[int, ...]]:
        """Reduced row echelon form and the pivot column indices.

        Pivots are chosen as the first nonzero entry scanning each column
        top to bottom, which makes the result fully deterministic.
        """
        rows = [self.row_list(i) for i in range(self.rows)]
        pivots: list[int] = []
        pr = 0
        for pc in range(self.cols):
            pivot_row = None
            for r in range(pr, self.rows):
                if rows[r][pc] != 0:
                    pivot_row = r
                    break
            if pivot_row is None:
                continue
            rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
            pv = rows[pr][pc]
            if pv != 1:
                rows[pr] = [e / pv for e in rows[pr]]
            for r in range(len(rows)):
                if r != pr and rows[r][pc] != 0:
                    f = rows[r][pc]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.rows:
                break
        return RatMat.from_rows(rows, cols=self.cols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def is_injective(self) -> bool:
        return self.rank() == self.cols

    def is_surjective(self) -> bool:
        return self.rank() == self.rows

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError(f"determinant of non-square {self.rows}x{self.cols}")
        n = self.rows
        rows = [self.row_list(i) for i in range(n)]
        sign = 1
        result = Fraction(1)
        for c in range(n):
            pivot_row = None
            for r in range(c, n):
                if rows[r][c] != 0:
                    pivot_row = r
                    break
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != c:
                rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
                sign = -sign
            pv = rows[c][c]
            result *= pv
            for r in range(c + 1, n):
                if rows[r][c] != 0:
                    f = rows[r][c] / pv
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
        return sign * result


def kernel_basis(m: RatMat) -> RatMat:
    """Basis of the null space of ``m``, one basis vector per column.

    The basis is the standard one read off the reduced row echelon form
    (free variable set to 1, pivots solved), with free columns in
    increasing order, so the result has exactly cols - rank(m) columns
    and is deterministic.
    """
    red, pivots = m.rref()
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis_cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        basis_cols.append(v)
    data = [basis_cols[j][i] for i in range(m.cols) for j in range(len(basis_cols))]
    return RatMat(m.cols, len(basis_cols), data)


@dataclass(frozen=True)
class QuotientPresentation:
    """Coordinates for a quotient of R^ambient_dim by a relation subspace.

    projection @ section is the identity on the quotient and
    projection @ relation_basis is zero, both exactly.
    """

    ambient_dim: int
    relation_basis: RatMat  # ambient_dim x rank, columns span the relations
    quotient_dim: int
    projection: RatMat  # quotient_dim x ambient_dim
    section: RatMat  # ambient_dim x quotient_dim

    @classmethod
    def from_relation_span(cls, ambient_dim: int, relations: RatMat) -> "QuotientPresentation":
        """Quotient of R^ambient_dim by the column span of ``relations``.

        The quotient basis is the complement of the relation span in
        standard coordinates, taken in pivot order: pivot coordinates of
        the reduced relation span are killed, the remaining coordinates
        become the quotient slots.
        """
        if relations.rows != ambient_dim:
            raise ValueError(
                f"relations live in R^{relations.rows}, expected R^{ambient_dim}"
            )
        red, pivots = relations.transpose().rref()
        rank = len(pivots)
        quotient_dim = ambient_dim - rank
        pivot_set = set(pivots)
        free = [c for c in range(ambient_dim) if c not in pivot_set]

        # reduced relation basis: column i is row i of the echelon form
        rel_data = [red[i, c] for c in range(ambient_dim) for i in range(rank)]
        relation_basis = RatMat(ambient_dim, rank, rel_data)

        proj = [[Fraction(0)] * ambient_dim for _ in range(quotient_dim)]
        for a, fcol in enumerate(free):
            proj[a][fcol] = Fraction(1)
            for i, p in enumerate(pivots):
                proj[a][p] = -red[i, fcol]
        projection = RatMat.from_rows(proj, cols=ambient_dim)

        sect = [[Fraction(0)] * quotient_dim for _ in range(ambient_dim)]
        for a, fcol in enumerate(free):
            sect[fcol][a] = Fraction(1)
        section = RatMat.from_rows(sect, cols=quotient_dim)

        return cls(ambient_dim, relation_basis, quotient_dim, projection, section)


def cokernel_presentation(m: RatMat) -> QuotientPresentation:
    """Quotient of the target space of ``m`` by its column span."""
    return QuotientPresentation.from_relation_span(m.rows, m)


def solve_exact(a: RatMat, b: RatMat) -> RatMat | None:
    """One exact solution of a @ x = b, or None when the system is inconsistent.

    Free variables are set to zero, so the particular solution is
    deterministic.  ``b`` may have several columns.
    """
    if a.rows != b.rows:
        raise ValueError(f"system has {a.rows} rows but right-hand side has {b.rows}")
    red, pivots = RatMat.hstack([a, b]).rref()
    if any(p >= a.cols for p in pivots):
        return None
    x = [[Fraction(0)] * b.cols for _ in range(a.cols)]
    for i, p in enumerate(pivots):
        for j in range(b.cols):
            x[p][j] = red[i, a.cols + j]
    return RatMat.from_rows(x, cols=b.cols)
