"""Dense exact linear algebra over Q and F_p, backed by python-flint."""

from __future__ import annotations

from fractions import Fraction

import flint


def _to_flint(rows, ncols, field):
    nrows = len(rows)
    flat = [c for r in rows for c in r]
    if field.p is None:
        return flint.fmpq_mat(nrows, ncols, [flint.fmpq(c.numerator, c.denominator) for c in flat])
    return flint.nmod_mat(nrows, ncols, [int(c) for c in flat], field.p)


def _from_flint(mat, field):
    out = []
    for i in range(mat.nrows()):
        row = []
        for j in range(mat.ncols()):
            v = mat[i, j]
            if field.p is None:
                row.append(Fraction(int(v.p), int(v.q)))
            else:
                row.append(int(v))
        out.append(row)
    return out


class Matrix:
    """Immutable dense matrix over a Field, stored as a list of rows."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows, ncols=None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field(0)
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, size):
        return cls(field, [[field(int(i == j)) for j in range(size)] for i in range(size)], size)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def _flint(self):
        return _to_flint(self.rows, self.ncols, self.field)

    def rank(self):
        if self.nrows == 0 or self.ncols == 0:
            return 0
        return self._flint().rank()

    def rref(self):
        """Reduced row echelon form and the pivot columns."""
        if self.nrows == 0 or self.ncols == 0:
            return Matrix(self.field, [], self.ncols), []
        m, rank = self._flint().rref()
        rows = _from_flint(m, self.field)[:rank]
        pivots = []
        for r in rows:
            pivots.append(next(j for j, v in enumerate(r) if v))
        return Matrix(self.field, rows, self.ncols), pivots

    def nullspace(self):
        """Basis of {v : self * v = 0} as a list of column vectors."""
        if self.ncols == 0:
            return []
        if self.nrows == 0:
            return [[self.field(int(i == j)) for i in range(self.ncols)] for j in range(self.ncols)]
        x, nullity = self._flint().nullspace()
        cols = _from_flint(x, self.field)
        return [[cols[i][j] for i in range(self.ncols)] for j in range(nullity)]

    def __mul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"dimension mismatch {self.shape} x {other.shape}")
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return Matrix.zeros(self.field, self.nrows, other.ncols)
        prod = self._flint() * other._flint()
        return Matrix(self.field, _from_flint(prod, self.field), other.ncols)

    def __add__(self, other):
        p = self.field.p
        rows = []
        for r, s in zip(self.rows, other.rows):
            row = [a + b for a, b in zip(r, s)]
            if p is not None:
                row = [v % p for v in row]
            rows.append(row)
        return Matrix(self.field, rows, self.ncols)

    def scale(self, c):
        p = self.field.p
        rows = [[v * c if p is None else v * c % p for v in r] for r in self.rows]
        return Matrix(self.field, rows, self.ncols)

    def transpose(self):
        if not self.nrows:
            return Matrix(self.field, [[] for _ in range(self.ncols)], 0)
        return Matrix(self.field, [list(col) for col in zip(*self.rows)], self.nrows)

    def is_zero(self):
        return all(not v for r in self.rows for v in r)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"


def rank_of_columns(columns, length, field):
    """Rank of the span of the given vectors of common ``length``."""
    if not columns or length == 0:
        return 0
    return Matrix(field, columns, length).rank()


def span_basis(vectors, length, field):
    """Row-reduced basis of the span of ``vectors``."""
    if not vectors:
        return []
    m, _ = Matrix(field, vectors, length).rref()
    return m.rows
