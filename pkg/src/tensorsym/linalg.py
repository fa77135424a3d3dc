"""Dense exact matrices and subspaces: RREF, rank, nullspace, membership.

A ``Matrix`` holds an int64 numpy array for GF(p) or an object array of
``Fraction`` for the rationals.  All eliminations go through the backend
kernels; the rational path clears denominators row by row and runs the
fraction-free integer kernel, falling back to a pure-Fraction elimination
whenever the int64 overflow guard trips.  RREF over a field is unique, so
every path yields the same canonical answer.

Subspaces are stored as RREF bases, which makes equality of subspaces a plain
matrix comparison and membership a pivot lookup.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from . import backend
from .errors import UsageError
from .scalar import FieldSpec

# past this magnitude, cleared-integer rows skip the int64 kernel entirely
_INT64_SAFE = 2 ** 59


def _dtype_for(field):
    return np.int64 if field.is_prime_field else object


def _as_array(field, rows, cols, data):
    if field.is_prime_field:
        arr = np.empty((rows, cols), np.int64)
    else:
        arr = np.empty((rows, cols), object)
    for i, row in enumerate(data):
        row = list(row)
        if len(row) != cols:
            raise UsageError(f"row {i} has length {len(row)}, expected {cols}")
        for j, x in enumerate(row):
            arr[i, j] = field.coerce(x)
    return arr


class Matrix:
    """Immutable-by-convention dense matrix over one FieldSpec."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data: np.ndarray):
        self.field = field
        self.data = data

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, _as_array(field, len(rows), cols, rows))

    @classmethod
    def zeros(cls, field, rows, cols):
        if field.is_prime_field:
            return cls(field, np.zeros((rows, cols), np.int64))
        arr = np.empty((rows, cols), object)
        arr[:] = Fraction(0)
        return cls(field, arr)

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        one = field.one
        for i in range(n):
            m.data[i, i] = one
        return m

    # -- shape and access ---------------------------------------------------

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, key):
        return self.data[key]

    def row(self, i):
        return self.data[i]

    def copy(self):
        return Matrix(self.field, self.data.copy())

    def to_lists(self):
        return [list(r) for r in self.data]

    def __repr__(self):
        return f"Matrix({self.field}, {self.rows}x{self.cols})"

    # -- arithmetic ----------------------------------------------------------

    def _check_field(self, other):
        if self.field != other.field:
            raise UsageError(f"field mismatch: {self.field} vs {other.field}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __add__(self, other):
        self._check_field(other)
        if self.field.is_prime_field:
            return Matrix(self.field, (self.data + other.data) % self.field.characteristic)
        return Matrix(self.field, self.data + other.data)

    def __sub__(self, other):
        self._check_field(other)
        if self.field.is_prime_field:
            return Matrix(self.field, (self.data - other.data) % self.field.characteristic)
        return Matrix(self.field, self.data - other.data)

    def __neg__(self):
        if self.field.is_prime_field:
            return Matrix(self.field, (-self.data) % self.field.characteristic)
        return Matrix(self.field, -self.data)

    def scale(self, c):
        c = self.field.coerce(c)
        if self.field.is_prime_field:
            return Matrix(self.field, self.data * c % self.field.characteristic)
        return Matrix(self.field, self.data * c)

    def __matmul__(self, other):
        self._check_field(other)
        if self.cols != other.rows:
            raise UsageError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.field, mat_product(self.field, self.data, other.data))

    def transpose(self):
        return Matrix(self.field, self.data.T.copy())

    def is_zero(self):
        if self.field.is_prime_field:
            return not self.data.any()
        return all(x == 0 for x in self.data.flat)


def mat_product(field, a, b):
    """Exact a @ b; int64 whenever the accumulated products cannot overflow."""
    if field.is_prime_field:
        p = field.characteristic
        inner = a.shape[1]
        if inner == 0:
            return np.zeros((a.shape[0], b.shape[1]), np.int64)
        if inner * (p - 1) * (p - 1) < 2 ** 62:
            return a @ b % p
        obj = np.dot(a.astype(object), b.astype(object))
        return (obj % p).astype(np.int64)
    if a.shape[1] == 0:
        out = np.empty((a.shape[0], b.shape[1]), object)
        out[:] = Fraction(0)
        return out
    return np.dot(a, b)


def vec_product(field, mat, v):
    """Matrix times vector with the same exactness rules."""
    return mat_product(field, mat, v.reshape(-1, 1)).reshape(-1)


def vector(field, values):
    """Canonical 1-d array over the field."""
    vals = [field.coerce(x) for x in values]
    if field.is_prime_field:
        return np.array(vals, np.int64)
    arr = np.empty(len(vals), object)
    for i, x in enumerate(vals):
        arr[i] = x
    return arr


def zero_vector(field, n):
    if field.is_prime_field:
        return np.zeros(n, np.int64)
    arr = np.empty(n, object)
    arr[:] = Fraction(0)
    return arr


# ---------------------------------------------------------------------------
# RREF
# ---------------------------------------------------------------------------


def _rref_fraction(rows):
    """Textbook Gauss-Jordan over Fraction rows; the always-correct slow path."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    piv = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            f = rows[i][c]
            if i != r and f != 0:
                prow = rows[r]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        piv.append(c)
        r += 1
        if r == nrows:
            break
    return rows, r, piv


def _rref_rational(data):
    rows, cols = data.shape
    if rows == 0 or cols == 0:
        return data.copy(), 0, []
    # clear denominators row by row; row scaling does not change the RREF
    int_rows = []
    big = False
    for i in range(rows):
        den = 1
        for x in data[i]:
            den = den * x.denominator // gcd(den, x.denominator)
        row = [int(x * den) for x in data[i]]
        g = 0
        for v in row:
            g = gcd(g, v)
            if g == 1:
                break
        if g > 1:
            row = [v // g for v in row]
        if not big and any(abs(v) >= _INT64_SAFE for v in row):
            big = True
        int_rows.append(row)
    if not big:
        M = np.array(int_rows, np.int64).reshape(rows, cols)
        ok, rank, piv = backend.rref_int(M)
        if ok:
            out = np.empty((rows, cols), object)
            out[:] = Fraction(0)
            for i in range(rank):
                pv = int(M[i, int(piv[i])])
                for j in range(cols):
                    v = int(M[i, j])
                    if v:
                        out[i, j] = Fraction(v, pv)
            return out, int(rank), [int(c) for c in piv]
    frows = [[Fraction(v) for v in row] for row in int_rows]
    frows, rank, piv = _rref_fraction(frows)
    out = np.empty((rows, cols), object)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = frows[i][j]
    return out, rank, piv


def rref(m: Matrix):
    """Reduced row-echelon form: returns (R, rank, pivot_columns)."""
    if m.field.is_prime_field:
        M = np.ascontiguousarray(m.data.copy())
        R, rank, piv = backend.rref_mod(M, m.field.characteristic)
        return Matrix(m.field, R), int(rank), tuple(int(c) for c in piv)
    R, rank, piv = _rref_rational(m.data)
    return Matrix(m.field, R), rank, tuple(piv)


def rank(m: Matrix) -> int:
    return rref(m)[1]


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------


class Subspace:
    """A linear subspace given by its canonical (RREF) row basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field, ambient_dim, basis: Matrix, pivots):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def from_rows(cls, field, ambient_dim, rows):
        m = Matrix.from_rows(field, rows, cols=ambient_dim)
        return cls.from_matrix(m)

    @classmethod
    def from_matrix(cls, m: Matrix):
        """Canonicalize the row space of m."""
        R, r, piv = rref(m)
        return cls(m.field, m.cols, Matrix(m.field, R.data[:r].copy()), piv)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, Matrix.zeros(field, 0, ambient_dim), ())

    @property
    def dim(self):
        return self.basis.rows

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim}, {self.field})"


def nullspace(m: Matrix) -> Subspace:
    """Canonical basis of {x : Mx = 0}."""
    R, r, piv = rref(m)
    free = [c for c in range(m.cols) if c not in set(piv)]
    if not free:
        return Subspace.zero(m.field, m.cols)
    basis = Matrix.zeros(m.field, len(free), m.cols)
    one = m.field.one
    for k, f in enumerate(free):
        basis.data[k, f] = one
        for i, pc in enumerate(piv):
            basis.data[k, pc] = m.field.neg(R.data[i, f])
    return Subspace.from_matrix(basis)


def column_space(m: Matrix) -> Subspace:
    return Subspace.from_matrix(m.transpose())


def subspace_compare(v: Subspace, w: Subspace):
    """Compare two subspaces by ranks of stacked bases.

    Returns (verdict, dim V, dim W) with verdict one of
    'equal', 'V<W', 'W<V', 'incomparable'.
    """
    if v.ambient_dim != w.ambient_dim or v.field != w.field:
        raise UsageError("subspaces live in different ambient spaces")
    dv, dw = v.dim, w.dim
    stacked = Matrix(v.field, np.vstack([v.basis.data, w.basis.data]))
    rs = rank(stacked) if stacked.rows else 0
    if rs == dv == dw:
        verdict = "equal"
    elif rs == dw:
        verdict = "V<W"
    elif rs == dv:
        verdict = "W<V"
    else:
        verdict = "incomparable"
    return verdict, dv, dw


def member(v_arr, space: Subspace):
    """Is the vector in the subspace?  Returns (bool, coords-in-canonical-basis)."""
    if len(v_arr) != space.ambient_dim:
        raise UsageError(
            f"vector length {len(v_arr)} != ambient {space.ambient_dim}"
        )
    field = space.field
    if space.dim == 0:
        if field.is_prime_field:
            ok = not np.asarray(v_arr).any()
        else:
            ok = all(x == 0 for x in v_arr)
        return (ok, zero_vector(field, 0)) if ok else (False, None)
    coords = vector(field, [v_arr[c] for c in space.pivots])
    recon = mat_product(field, coords.reshape(1, -1), space.basis.data).reshape(-1)
    if field.is_prime_field:
        ok = bool(np.array_equal(recon, np.asarray(v_arr)))
    else:
        ok = all(a == b for a, b in zip(recon, v_arr))
    return (ok, coords) if ok else (False, None)


def inverse(m: Matrix):
    """Exact inverse, or None if singular."""
    if m.rows != m.cols:
        raise UsageError("inverse of a non-square matrix")
    n = m.rows
    if n == 0:
        return m.copy()
    aug = Matrix(m.field, np.hstack([m.data, Matrix.identity(m.field, n).data]))
    R, r, piv = rref(aug)
    if r < n or any(p >= n for p in piv[:n]):
        return None
    return Matrix(m.field, R.data[:, n:].copy())
