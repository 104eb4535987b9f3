"""Exact dense linear algebra over Q and F_p.

rank() is the hot path: the degree-window computations feed it matrices
with hundreds of rows.  Over F_p it runs vectorized modular elimination
on int64 arrays (p < 2^31 keeps every product inside 64 bits).  Over Q
it clears denominators row by row and runs fraction-free Bareiss
elimination; a bound-checked int64 fast path handles the common
small-entry case and falls back to big integers when the certified
bound would overflow.

Pivoting is always "first nonzero in column order, rows scanned
top-down", so reduced forms are reproducible bit for bit.
"""

from __future__ import annotations

from math import gcd, lcm

import numpy as np

from .scalar import Field, FieldElement, PrimeField

# int64 elimination is certified safe while |entries| stay below this.
_INT64_GUARD = 1 << 30


class DenseMatrix:
    """A rows x cols matrix of FieldElements, row major."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: list[FieldElement]):
        if len(data) != rows * cols:
            raise ValueError(f"need {rows * cols} entries, got {len(data)}")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = list(data)

    @classmethod
    def from_rows(cls, field: Field, rows: list[list]) -> "DenseMatrix":
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        flat = []
        for r in rows:
            if len(r) != nc:
                raise ValueError("ragged rows")
            for x in r:
                flat.append(x if isinstance(x, FieldElement) else field.element(x))
        return cls(field, nr, nc, flat)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "DenseMatrix":
        return cls(field, rows, cols, [field.zero] * (rows * cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> "DenseMatrix":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i * n + i] = field.one
        return m

    def entry(self, i: int, j: int) -> FieldElement:
        return self.data[i * self.cols + j]

    def row(self, i: int) -> list[FieldElement]:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def transpose(self) -> "DenseMatrix":
        data = [self.data[i * self.cols + j]
                for j in range(self.cols) for i in range(self.rows)]
        return DenseMatrix(self.field, self.cols, self.rows, data)

    def __mul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if other.field != self.field or self.cols != other.rows:
            raise ValueError("matrix product shape/field mismatch")
        zero = self.field.zero
        out = [zero] * (self.rows * other.cols)
        for i in range(self.rows):
            base = i * self.cols
            for k in range(self.cols):
                a = self.data[base + k]
                if not a:
                    continue
                obase = k * other.cols
                for j in range(other.cols):
                    b = other.data[obase + j]
                    if b:
                        out[i * other.cols + j] = out[i * other.cols + j] + a * b
        return DenseMatrix(self.field, self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not any(self.data)

    def __eq__(self, other):
        return (
            isinstance(other, DenseMatrix)
            and other.field == self.field
            and other.rows == self.rows
            and other.cols == self.cols
            and other.data == self.data
        )

    def __repr__(self):
        return f"DenseMatrix({self.rows}x{self.cols} over {self.field})"


def rank(m: DenseMatrix) -> int:
    """Exact rank over the matrix's field."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if isinstance(m.field, PrimeField):
        arr = np.array([fe.value for fe in m.data], dtype=np.int64)
        return _rank_modp(arr.reshape(m.rows, m.cols), m.field.p)
    return _rank_rational(m)


def _rank_modp(a: np.ndarray, p: int) -> int:
    a = a % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = a[r, c:] * inv % p
        below = a[r + 1:, c]
        if below.size:
            a[r + 1:, c:] = (a[r + 1:, c:] - below[:, None] * a[r, c:][None, :]) % p
        r += 1
    return r


def _integer_rows(m: DenseMatrix) -> list[list[int]]:
    """Clear denominators row by row; rank is scaling invariant."""
    out = []
    for i in range(m.rows):
        row = [fe.value for fe in m.row(i)]
        if any(row):
            den = lcm(*[f.denominator for f in row])
            ints = [int(f * den) for f in row]
            g = 0
            for x in ints:
                g = gcd(g, x)
            out.append([x // g for x in ints] if g > 1 else ints)
    return out


def _rank_rational(m: DenseMatrix) -> int:
    rows = _integer_rows(m)
    if not rows:
        return 0
    maxabs = max(abs(x) for r in rows for x in r)
    if maxabs < _INT64_GUARD:
        r = _rank_bareiss_int64(np.array(rows, dtype=np.int64))
        if r is not None:
            return r
    return _rank_bareiss_object(np.array(rows, dtype=object))


def _rank_bareiss_int64(a: np.ndarray) -> int | None:
    """Fraction-free elimination in int64; None when the growth bound trips.

    After each update every entry is a minor of the original matrix, so
    exactness only needs the intermediate products to stay inside 64
    bits; the guard check before each step certifies that.
    """
    rows, cols = a.shape
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = int(a[r, c])
        sub = a[r + 1:, c:]
        if sub.size:
            hi = max(abs(piv), int(np.abs(sub).max()), int(np.abs(a[r, c:]).max()))
            if hi >= _INT64_GUARD:
                return None
            col = a[r + 1:, c][:, None]
            a[r + 1:, c:] = (piv * sub - col * a[r, c:][None, :]) // prev
        prev = piv
        r += 1
    return r


def _rank_bareiss_object(a: np.ndarray) -> int:
    rows, cols = a.shape
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = None
        for i in range(r, rows):
            if a[i, c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        piv = a[r, c]
        if r + 1 < rows:
            sub = a[r + 1:, c:]
            col = a[r + 1:, c][:, None]
            a[r + 1:, c:] = (piv * sub - col * a[r, c:][None, :]) // prev
        prev = piv
        r += 1
    return r


def rref(m: DenseMatrix) -> tuple[DenseMatrix, list[int]]:
    """Reduced row echelon form and the pivot column list.

    Generic exact Gauss-Jordan; the RREF of a matrix is unique, so this
    is also the canonical form used by kernel_basis and inverse.
    """
    field = m.field
    zero, one = field.zero, field.one
    rows = [m.row(i) for i in range(m.rows)]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == len(rows):
            break
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        if rows[r][c] != one:
            rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    flat = [x for row in rows for x in row]
    return DenseMatrix(field, m.rows, m.cols, flat), pivots


def kernel_basis(m: DenseMatrix) -> list[list[FieldElement]]:
    """A basis of the right kernel, one column vector per free column."""
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [_unit_vector(m.field, m.cols, j) for j in range(m.cols)]
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [m.field.zero] * m.cols
        v[j] = m.field.one
        for k, pc in enumerate(pivots):
            v[pc] = -red.entry(k, j)
        basis.append(v)
    return basis


def _unit_vector(field: Field, size: int, j: int) -> list[FieldElement]:
    v = [field.zero] * size
    v[j] = field.one
    return v


def inverse(m: DenseMatrix) -> DenseMatrix:
    """Inverse of a square matrix; raises on singular input."""
    if m.rows != m.cols:
        raise ValueError("only square matrices invert")
    n = m.rows
    aug = DenseMatrix(m.field, n, 2 * n,
                      [m.entry(i, j) if j < n else
                       (m.field.one if j - n == i else m.field.zero)
                       for i in range(n) for j in range(2 * n)])
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    data = [red.entry(i, n + j) for i in range(n) for j in range(n)]
    return DenseMatrix(m.field, n, n, data)
