"""Dense exact matrices: rank, kernels, determinants.

Over Q rank uses fraction-free (Bareiss) elimination on an integer matrix
obtained by clearing row denominators. Over finite fields we use plain
Gaussian elimination; prime fields with p < 2**31 get a vectorised numpy path.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .fields import Field, PrimeField, RationalField

_NUMPY_PRIME_LIMIT = 2 ** 31


class ExactMatrix:
    """Row-major matrix of field elements; treat as immutable."""

    __slots__ = ("rows", "nrows", "ncols", "field")

    def __init__(self, rows: Sequence[Sequence], field: Field, ncols: int | None = None):
        self.rows = [tuple(field.coerce(x) for x in r) for r in rows]
        self.field = field
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n, field):
        return cls([[field.one() if i == j else field.zero() for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, nrows, ncols, field):
        return cls([[field.zero()] * ncols for _ in range(nrows)], field, ncols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows and self.ncols == other.ncols

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols} over {self.field!r})"

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(c) for c in zip(*self.rows)] if self.nrows else [], self.field, self.nrows)

    def delete_row(self, i: int) -> "ExactMatrix":
        return ExactMatrix(self.rows[:i] + self.rows[i + 1:], self.field, self.ncols)

    def matvec(self, v: Sequence) -> list:
        F = self.field
        return [F.dot(r, v) for r in self.rows]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        F = self.field
        cols = list(zip(*other.rows))
        return ExactMatrix([[F.dot(r, c) for c in cols] for r in self.rows], F, other.ncols)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i))

    def to_json(self):
        return [[self.field.to_json(x) for x in r] for r in self.rows]


# -- elimination kernels -------------------------------------------------------

def _use_numpy(field) -> bool:
    return isinstance(field, PrimeField) and field.p < _NUMPY_PRIME_LIMIT


def rref_numpy(A: np.ndarray, p: int, pivot_cols: int | None = None):
    """Reduced row echelon form of an int64 array mod p; returns (R, pivots)."""
    R = np.array(A, dtype=np.int64) % p
    m, n = R.shape
    limit = n if pivot_cols is None else pivot_cols
    pivots = []
    row = 0
    for col in range(limit):
        if row >= m:
            break
        nz = np.flatnonzero(R[row:, col])
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        inv = pow(int(R[row, col]), -1, p)
        R[row] = (R[row] * inv) % p
        factors = R[:, col].copy()
        factors[row] = 0
        nzr = np.flatnonzero(factors)
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(factors[nzr], R[row])) % p
        pivots.append(col)
        row += 1
    return R, pivots


def rref(M: ExactMatrix):
    """Reduced row echelon form as (rows, pivot columns), over any field."""
    F = M.field
    if _use_numpy(F) and M.nrows and M.ncols:
        R, piv = rref_numpy(np.array(M.rows, dtype=np.int64), F.p)
        return [list(map(int, r)) for r in R], piv
    rows = [list(r) for r in M.rows]
    m, n = M.nrows, M.ncols
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        piv = next((i for i in range(r, m) if not F.is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(x, inv) for x in rows[r]]
        for i in range(m):
            if i != r and not F.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def _integer_rows(M: ExactMatrix) -> list[list[int]]:
    out = []
    for r in M.rows:
        den = lcm(*[Fraction(x).denominator for x in r]) if r else 1
        out.append([int(Fraction(x) * den) for x in r])
    return out


def bareiss_rank(A: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    prev = 1
    r = 0
    for c in range(n):
        if r >= m:
            break
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                A[i][j] = (A[i][j] * A[r][c] - A[i][c] * A[r][j]) // prev
            A[i][c] = 0
        prev = A[r][c]
        r += 1
    return r


def gauss_rank(M: ExactMatrix) -> int:
    """Rank by plain forward elimination with field operations (no numpy)."""
    F = M.field
    rows = [list(r) for r in M.rows]
    m, n = M.nrows, M.ncols
    r = 0
    if isinstance(F, PrimeField):
        p = F.p
        for c in range(n):
            if r >= m:
                break
            piv = next((i for i in range(r, m) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][c], -1, p)
            pr = rows[r]
            for i in range(r + 1, m):
                f = rows[i][c]
                if f:
                    f = f * inv % p
                    ri = rows[i]
                    for j in range(c, n):
                        ri[j] = (ri[j] - f * pr[j]) % p
            r += 1
        return r
    for c in range(n):
        if r >= m:
            break
        piv = next((i for i in range(r, m) if not F.is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        for i in range(r + 1, m):
            if not F.is_zero(rows[i][c]):
                f = F.mul(rows[i][c], inv)
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def rank(M: ExactMatrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    F = M.field
    if isinstance(F, RationalField):
        return bareiss_rank(_integer_rows(M))
    if _use_numpy(F):
        return len(rref_numpy(np.array(M.rows, dtype=np.int64), F.p)[1])
    return gauss_rank(M)


def nullspace_basis(M: ExactMatrix) -> list[list]:
    """Basis of {v : M v = 0}; one vector per free column, free entry set to 1."""
    F = M.field
    n = M.ncols
    if M.nrows == 0:
        return [[F.one() if i == j else F.zero() for i in range(n)] for j in range(n)]
    rows, pivots = rref(M)
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        v = [F.zero()] * n
        v[free] = F.one()
        for r, pc in enumerate(pivots):
            v[pc] = F.neg(rows[r][free])
        basis.append(v)
    return basis


def left_kernel_basis(M: ExactMatrix) -> list[list]:
    """Basis of {w : w^T M = 0}."""
    return nullspace_basis(M.transpose()) if M.ncols else [
        [M.field.one() if i == j else M.field.zero() for i in range(M.nrows)] for j in range(M.nrows)]


def left_kernel_numpy(A: np.ndarray, p: int) -> np.ndarray:
    """Left kernel basis (as rows) of an int64 array mod p, one elimination of [A | I].

    Rows are processed in order and each pivot is cleared only below itself, so
    the loop runs once per row; rows whose A-part ends up zero carry the kernel.
    """
    m, n = A.shape
    aug = np.concatenate([A % p, np.eye(m, dtype=np.int64)], axis=1)
    zero_rows = []
    for i in range(m):
        row = aug[i, :n] != 0
        c = int(row.argmax())
        if not row[c]:
            zero_rows.append(i)
            continue
        aug[i] = (aug[i] * pow(int(aug[i, c]), -1, p)) % p
        if i + 1 < m:
            below = aug[i + 1:]
            below -= below[:, c, None] * aug[i]
            below %= p
    return aug[zero_rows, n:]


def determinant(M: ExactMatrix):
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    F = M.field
    rows = [list(r) for r in M.rows]
    n = M.nrows
    det = F.one()
    for c in range(n):
        piv = next((i for i in range(c, n) if not F.is_zero(rows[i][c])), None)
        if piv is None:
            return F.zero()
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = F.neg(det)
        det = F.mul(det, rows[c][c])
        inv = F.inv(rows[c][c])
        for i in range(c + 1, n):
            if not F.is_zero(rows[i][c]):
                f = F.mul(rows[i][c], inv)
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return det


def solve_in_span(basis: Sequence[Sequence], v: Sequence, field: Field):
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span."""
    k = len(basis)
    n = len(v)
    cols = ExactMatrix([[basis[i][j] for i in range(k)] + [v[j]] for j in range(n)], field)
    rows, pivots = rref(cols)
    if k in pivots:
        return None
    c = [field.zero()] * k
    for r, pc in enumerate(pivots):
        c[pc] = rows[r][k]
    return c


def span_dimension(vectors: Sequence[Sequence], field: Field) -> int:
    if not vectors:
        return 0
    return rank(ExactMatrix(vectors, field))


def intersect_subspaces(A: Sequence[Sequence], B: Sequence[Sequence], field: Field) -> list[list]:
    """Basis of span(A) ∩ span(B) (A, B given by spanning row vectors)."""
    if not A or not B:
        return []
    n = len(A[0])
    # solve sum a_i A_i - sum b_j B_j = 0
    M = ExactMatrix([[A[i][c] for i in range(len(A))] + [field.neg(B[j][c]) for j in range(len(B))]
                     for c in range(n)], field)
    out = []
    for sol in nullspace_basis(M):
        vec = [field.zero()] * n
        for i in range(len(A)):
            if not field.is_zero(sol[i]):
                vec = [field.add(x, field.mul(sol[i], y)) for x, y in zip(vec, A[i])]
        out.append(vec)
    if not out:
        return []
    rows, piv = rref(ExactMatrix(out, field))
    return [r for r in rows[: len(piv)]]
