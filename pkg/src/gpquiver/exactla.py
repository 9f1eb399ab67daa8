"""Exact scalar arithmetic and dense linear algebra over F_p and Q.

Matrices over F_p are int64 numpy arrays holding representatives in
``[0, p)``; matrices over Q are object arrays of :class:`fractions.Fraction`.
Both are wrapped in :class:`ExactMatrix`, so equality of two matrices is
equality of their canonical entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

# int64 products of residues stay exact while p * p * n fits in 63 bits.
_INT64_PRIME_LIMIT = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: a prime field ``F_p`` (``p`` set) or the rationals (``p`` None)."""

    p: Optional[int] = 101

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not a prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"Fp:<p>"`` or ``"Q"``."""
        text = text.strip()
        if text == "Q":
            return cls.rationals()
        if text.startswith("Fp:"):
            try:
                return cls(int(text[3:]))
            except ValueError as exc:
                raise ValueError(f"bad field {text!r}: {exc}") from None
        raise ValueError(f"bad field {text!r}; expected 'Fp:<p>' or 'Q'")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def dtype(self):
        if self.p is None or self.p >= _INT64_PRIME_LIMIT:
            return object
        return np.int64

    def __str__(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    # scalars

    def scalar(self, value) -> object:
        """Canonical representative of an int, Fraction or ``"a/b"`` string."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            num = value.numerator % self.p
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"{value} has no image in {self}")
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def scalar_str(self, value) -> str:
        if self.p is None:
            return str(Fraction(value))
        return str(int(value))

    def inv(self, value):
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(value)
        return pow(int(value), -1, self.p)

    # arrays

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p is None:
            return a
        return a % self.p

    def array(self, data) -> np.ndarray:
        if self.p is None:
            arr = np.array(data, dtype=object)
            flat = [Fraction(x) if not isinstance(x, Fraction) else x for x in arr.flat]
            out = np.empty(arr.shape, dtype=object)
            out.flat[:] = flat if flat else []
            return out
        if isinstance(data, np.ndarray) and data.dtype != object:
            return data.astype(self.dtype) % self.p
        arr = np.array(data, dtype=object)
        out = np.empty(arr.shape, dtype=self.dtype)
        out.flat[:] = [self.scalar(x) for x in arr.flat] if arr.size else []
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.scalar(1)
        return out


DEFAULT_FIELD = FieldSpec(101)


class ExactMatrix:
    """Dense matrix with canonical exact entries. Treat as immutable."""

    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, a):
        self.field = field
        if not isinstance(a, np.ndarray) or a.ndim != 2:
            a = np.asarray(a, dtype=object)
            if a.ndim != 2:
                raise ValueError("ExactMatrix needs a 2-d array")
            a = field.array(a)
        self.a = a

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        arr = field.zeros((len(rows), width))
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                arr[i, j] = field.scalar(x)
        return cls(field, arr)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "ExactMatrix":
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        return cls(field, field.eye(n))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.a.T.copy())

    def _check(self, other: "ExactMatrix"):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.cols == 0:
            return ExactMatrix.zeros(self.field, self.rows, other.cols)
        return ExactMatrix(self.field, self.field.reduce(self.a @ other.a))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix(self.field, self.field.reduce(self.a - other.a))

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.field.reduce(-self.a))

    def scale(self, c) -> "ExactMatrix":
        c = self.field.scalar(c)
        return ExactMatrix(self.field, self.field.reduce(self.a * c))

    def __getitem__(self, key) -> "ExactMatrix":
        if (
            isinstance(key, tuple)
            and len(key) == 2
            and all(isinstance(k, (list, np.ndarray)) for k in key)
        ):
            key = np.ix_(np.asarray(key[0], dtype=int), np.asarray(key[1], dtype=int))
        sub = self.a[key]
        if sub.ndim != 2:
            raise IndexError("ExactMatrix slicing must keep two axes")
        return ExactMatrix(self.field, sub.copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self.a == other.a))
        )

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.a.flat)))

    def is_zero(self) -> bool:
        return self.a.size == 0 or not np.any(self.a != 0)

    def to_lists(self) -> list:
        return [[self.field.scalar_str(x) for x in row] for row in self.a]

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field}, {self.to_lists()})"


def hstack(field: FieldSpec, mats: Sequence[ExactMatrix], rows: Optional[int] = None) -> ExactMatrix:
    if not mats:
        return ExactMatrix.zeros(field, rows or 0, 0)
    return ExactMatrix(field, np.concatenate([m.a for m in mats], axis=1))


def vstack(field: FieldSpec, mats: Sequence[ExactMatrix], cols: Optional[int] = None) -> ExactMatrix:
    if not mats:
        return ExactMatrix.zeros(field, 0, cols or 0)
    return ExactMatrix(field, np.concatenate([m.a for m in mats], axis=0))


def block_diag(field: FieldSpec, mats: Sequence[ExactMatrix]) -> ExactMatrix:
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = field.zeros((r, c))
    i = j = 0
    for m in mats:
        out[i:i + m.rows, j:j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return ExactMatrix(field, out)


def kron(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
    x._check(y)
    return ExactMatrix(x.field, x.field.reduce(np.kron(x.a, y.a)))


def rref(m: ExactMatrix):
    """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
    F = m.field
    a = m.a.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = F.inv(a[r, c])
        a[r] = F.reduce(a[r] * inv)
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = F.reduce(a[rows] - np.outer(col[rows], a[r]))
        pivots.append(c)
        r += 1
    return ExactMatrix(F, a), pivots


def rank(m: ExactMatrix) -> int:
    if m.a.size == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of ``{v : m v = 0}``."""
    F = m.field
    ncols = m.cols
    if m.rows == 0:
        return ExactMatrix.identity(F, ncols)
    R, pivots = rref(m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = F.zeros((ncols, len(free)))
    for k, f in enumerate(free):
        out[f, k] = F.scalar(1)
        for i, p in enumerate(pivots):
            out[p, k] = F.reduce(-R.a[i, f])
    return ExactMatrix(F, out)


def solve(m: ExactMatrix, rhs: ExactMatrix) -> Optional[ExactMatrix]:
    """One ``X`` with ``m @ X == rhs``, or None when the system is inconsistent."""
    if m.rows != rhs.rows:
        raise ValueError(f"row mismatch: {m.shape} vs rhs {rhs.shape}")
    F = m.field
    n = m.cols
    if m.rows == 0:
        return ExactMatrix.zeros(F, n, rhs.cols)
    R, pivots = rref(hstack(F, [m, rhs]))
    if pivots and pivots[-1] >= n:
        return None
    out = F.zeros((n, rhs.cols))
    for i, p in enumerate(pivots):
        out[p] = R.a[i, n:]
    return ExactMatrix(F, out)


def image_basis(m: ExactMatrix) -> ExactMatrix:
    """Independent columns of ``m`` spanning its column space."""
    if m.cols == 0 or m.rows == 0:
        return ExactMatrix.zeros(m.field, m.rows, 0)
    _, pivots = rref(m)
    return m[:, pivots]


def cokernel_projection(m: ExactMatrix):
    """``(proj, dim)`` with ``proj @ m == 0`` and ``proj`` of full row rank ``rows - rank(m)``."""
    if m.cols == 0:
        return ExactMatrix.identity(m.field, m.rows), m.rows
    proj = kernel_basis(m.T).T
    return proj, proj.rows


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve(m, ExactMatrix.identity(m.field, m.rows))
    if x is None or rank(m) != m.rows:
        raise ZeroDivisionError("matrix is singular")
    return x


def left_inverse(m: ExactMatrix) -> ExactMatrix:
    """``L`` with ``L @ m == I`` for ``m`` of full column rank."""
    F = m.field
    if m.cols == 0:
        return ExactMatrix.zeros(F, 0, m.rows)
    _, rows = rref(m.T)
    if len(rows) != m.cols:
        raise ValueError("matrix does not have full column rank")
    sel = F.zeros((m.cols, m.rows))
    for i, r in enumerate(rows):
        sel[i, r] = F.scalar(1)
    sel = ExactMatrix(F, sel)
    return inverse(sel @ m) @ sel


def complement_coordinates(m: ExactMatrix) -> list:
    """Standard coordinates whose unit vectors complete the columns of ``m`` to a basis."""
    if m.cols == 0:
        return list(range(m.rows))
    _, pivots = rref(hstack(m.field, [m, ExactMatrix.identity(m.field, m.rows)]))
    return [p - m.cols for p in pivots if p >= m.cols]


def combine(field: FieldSpec, coeffs: Iterable, mats: Sequence[ExactMatrix]) -> ExactMatrix:
    """``sum(c * M)`` over matching shapes."""
    acc = None
    for c, M in zip(coeffs, mats):
        term = M.scale(c)
        acc = term if acc is None else acc + term
    if acc is None:
        raise ValueError("empty combination")
    return acc
