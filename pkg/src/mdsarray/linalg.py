"""Dense matrices over GF(q): exact multiply, rank, inverse, solve, stacking.

Row-major uint16 storage; matrices are treated as immutable values after
construction.  All elimination goes through the shared kernels so the
compiled and pure backends are interchangeable.
"""

import numpy as np

from . import backend
from .gf import Field


class DimensionError(ValueError):
    pass


class FieldMismatchError(ValueError):
    pass


class SingularMatrixError(ValueError):
    def __init__(self, msg, pivot_row=None):
        super().__init__(msg)
        self.pivot_row = pivot_row


class MatrixGF:
    __slots__ = ("field", "a")

    def __init__(self, field: Field, data):
        arr = np.ascontiguousarray(data, dtype=np.uint16)
        if arr.ndim != 2:
            raise DimensionError(f"matrix data must be 2-D, got shape {arr.shape}")
        self.field = field
        self.a = arr

    # -- constructors --

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, np.zeros((rows, cols), dtype=np.uint16))

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.uint16))

    @classmethod
    def from_rows(cls, field, rows):
        arr = np.array(rows, dtype=np.uint16)
        if arr.size and arr.max() >= field.q:
            raise FieldMismatchError("entry out of field range")
        return cls(field, arr)

    # -- shape --

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def T(self):
        return MatrixGF(self.field, self.a.T)

    def copy(self):
        return MatrixGF(self.field, self.a.copy())

    def is_zero(self):
        return not self.a.any()

    def __eq__(self, other):
        return (
            isinstance(other, MatrixGF)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __repr__(self):
        return f"MatrixGF({self.rows}x{self.cols} over GF({self.field.q}))"

    # -- arithmetic --

    def _check_field(self, other):
        if self.field != other.field:
            raise FieldMismatchError(
                f"GF({self.field.q}) vs GF({other.field.q})"
            )

    def __add__(self, other):
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} + {other.shape}")
        f = self.field
        if f.p == 2:
            return MatrixGF(f, self.a ^ other.a)
        return MatrixGF(f, (self.a.astype(np.int64) + other.a) % f.p)

    def __sub__(self, other):
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} - {other.shape}")
        f = self.field
        if f.p == 2:
            return MatrixGF(f, self.a ^ other.a)
        return MatrixGF(f, (self.a.astype(np.int64) - other.a) % f.p)

    def __matmul__(self, other):
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.shape} by {other.shape}"
            )
        f = self.field
        return MatrixGF(f, backend.matmul(self.a, other.a, f.exp, f.log, f.p))

    def matvec(self, vec):
        """Multiply by a vector (L,) or a batch of columns (L, width)."""
        v = np.ascontiguousarray(vec, dtype=np.uint16)
        squeeze = v.ndim == 1
        if squeeze:
            v = v[:, None]
        if v.shape[0] != self.cols:
            raise DimensionError(f"matvec {self.shape} by {v.shape}")
        f = self.field
        out = backend.matmul(self.a, v, f.exp, f.log, f.p)
        return out[:, 0] if squeeze else out

    def scale(self, c: int):
        f = self.field
        if c == 0:
            return MatrixGF.zeros(f, self.rows, self.cols)
        if f.p == 2:
            return MatrixGF(f, f.exp[f.log[self.a] + int(f.log[c])])
        return MatrixGF(f, (self.a.astype(np.int64) * c) % f.p)

    # -- elimination-backed operations --

    def rank(self) -> int:
        f = self.field
        work = self.a.copy()
        return int(
            backend.row_reduce(work, self.cols, f.exp, f.log, f.q - 1, f.p, False)
        )

    def inverse(self):
        if self.rows != self.cols:
            raise DimensionError("inverse requires a square matrix")
        f = self.field
        n = self.rows
        work = np.hstack([self.a, np.eye(n, dtype=np.uint16)])
        work = np.ascontiguousarray(work)
        rank = backend.row_reduce(work, n, f.exp, f.log, f.q - 1, f.p, True)
        if rank < n:
            raise SingularMatrixError(
                f"singular matrix (pivot stalled at row {rank} of {n})",
                pivot_row=rank,
            )
        return MatrixGF(f, work[:, n:])

    def solve(self, rhs):
        """Solve self @ x = rhs for square nonsingular self."""
        self._check_field(rhs)
        if self.rows != self.cols:
            raise DimensionError("solve requires a square matrix")
        if rhs.rows != self.rows:
            raise DimensionError(f"solve {self.shape} with rhs {rhs.shape}")
        f = self.field
        n = self.rows
        work = np.ascontiguousarray(np.hstack([self.a, rhs.a]))
        rank = backend.row_reduce(work, n, f.exp, f.log, f.q - 1, f.p, True)
        if rank < n:
            raise SingularMatrixError(
                f"singular matrix (pivot stalled at row {rank} of {n})",
                pivot_row=rank,
            )
        return MatrixGF(f, work[:, n:])


def hstack(blocks):
    _check_same_field(blocks)
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise DimensionError("hstack: row counts differ")
    return MatrixGF(blocks[0].field, np.hstack([b.a for b in blocks]))


def vstack(blocks):
    _check_same_field(blocks)
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise DimensionError("vstack: column counts differ")
    return MatrixGF(blocks[0].field, np.vstack([b.a for b in blocks]))


def blkdiag(blocks):
    _check_same_field(blocks)
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.uint16)
    r = c = 0
    for b in blocks:
        out[r : r + b.rows, c : c + b.cols] = b.a
        r += b.rows
        c += b.cols
    return MatrixGF(blocks[0].field, out)


def blkdiag_repeat(block, times):
    return blkdiag([block] * times)


def solve_right(r, b):
    """Solve x @ r = b where r has full row rank; raises if inconsistent.

    Works by reducing [r^T | b^T]; rows of b must lie in the row space of r.
    """
    if r.field != b.field:
        raise FieldMismatchError("solve_right: field mismatch")
    if r.cols != b.cols:
        raise DimensionError(f"solve_right {r.shape} vs {b.shape}")
    f = r.field
    nr = r.rows
    work = np.ascontiguousarray(np.hstack([r.a.T, b.a.T]))
    rank = backend.row_reduce(work, nr, f.exp, f.log, f.q - 1, f.p, True)
    if rank < nr:
        raise SingularMatrixError(
            f"solve_right: matrix does not have full row rank {nr}",
            pivot_row=rank,
        )
    if work[nr:, nr:].any():
        raise SingularMatrixError(
            "solve_right: right-hand side outside the row space"
        )
    return MatrixGF(f, work[:nr, nr:].T)


def _check_same_field(blocks):
    if not blocks:
        raise DimensionError("empty block list")
    f = blocks[0].field
    for b in blocks:
        if b.field != f:
            raise FieldMismatchError("blocks over different fields")
