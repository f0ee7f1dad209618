"""Exact dense linear algebra over a prime field F_p or the rationals.

Matrices are plain numpy arrays: ``int64`` with entries in ``[0, p)`` for a
prime field, ``object`` arrays of :class:`fractions.Fraction` over Q.  All
routines are deterministic (first nonzero entry is the pivot).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_PRIME = 32003

# keeps p**2 well inside int64 so single products never overflow
_MAX_PRIME = 2**31


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """The base field: ``characteristic`` 0 means Q, otherwise an odd prime."""

    characteristic: int = DEFAULT_PRIME

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (p == 2 or not is_prime(p) or p >= _MAX_PRIME):
            raise ValueError(f"characteristic must be 0 or an odd prime < 2^31, got {p}")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def dtype(self):
        return object if self.is_rational else np.int64

    def __str__(self):
        return "QQ" if self.is_rational else f"GF({self.p})"

    # scalars -----------------------------------------------------------

    def scalar(self, x):
        if self.is_rational:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.is_rational:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    # arrays ------------------------------------------------------------

    def zeros(self, shape) -> np.ndarray:
        if self.is_rational:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def asarray(self, data) -> np.ndarray:
        """Coerce nested lists / arrays of integers (or Fractions) into the field."""
        if self.is_rational:
            arr = np.array(data, dtype=object)
            flat = [Fraction(x) for x in arr.ravel()]
            out = np.empty(arr.shape, dtype=object)
            out.ravel()[:] = flat if flat else []
            return out
        arr = np.array(data, dtype=object)
        if arr.size == 0:
            return np.zeros(arr.shape, dtype=np.int64)
        return np.array([self.scalar(x) for x in arr.ravel()], dtype=np.int64).reshape(arr.shape)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.is_rational:
            return a
        return np.mod(a, self.p)

    def identity(self, k: int) -> np.ndarray:
        out = self.zeros((k, k))
        for i in range(k):
            out[i, i] = self.scalar(1)
        return out

    def random(self, rng: np.random.Generator, size) -> np.ndarray:
        """Uniform field elements; over Q, integers drawn from [-100, 100]."""
        if self.is_rational:
            raw = rng.integers(-100, 101, size=size)
            return self.asarray(raw)
        return rng.integers(0, self.p, size=size, dtype=np.int64)

    def random_nonzero(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.is_rational:
            raw = rng.integers(1, 101, size=size) * rng.choice([-1, 1], size=size)
            return self.asarray(raw)
        return rng.integers(1, self.p, size=size, dtype=np.int64)


def product(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    """Exact matrix product ``a @ b``."""
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    if field.is_rational:
        if a.shape[1] == 0:
            return field.zeros((a.shape[0], b.shape[1]))
        return a.dot(b)
    p = field.p
    # split the inner dimension so partial sums stay below 2^63
    chunk = max(1, (2**63 - 1) // ((p - 1) ** 2 + 1))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(0, a.shape[1], chunk):
        out = (out + (a[:, k:k + chunk] @ b[k:k + chunk, :]) % p) % p
    return out


def transpose(m: np.ndarray) -> np.ndarray:
    return m.T.copy()


def _row_reduce_dense(m: np.ndarray, field: Field, reduced: bool = True):
    """Gaussian elimination with first-nonzero pivoting.

    Returns ``(echelon, pivot_columns)``.  With ``reduced=True`` the result is
    the reduced row echelon form; otherwise only rows below each pivot are
    cleared, which is enough for the rank.
    """
    a = np.array(m, dtype=field.dtype, copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    rational = field.is_rational
    p = field.p
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = field.inv(a[r, c])
        if rational:
            a[r, c:] = a[r, c:] * inv
        else:
            a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c]
        if reduced:
            hit = np.flatnonzero(col)
            hit = hit[hit != r]
        else:
            hit = r + 1 + np.flatnonzero(col[r + 1:])
        if hit.size:
            update = np.outer(a[hit, c], a[r, c:])
            if rational:
                a[hit, c:] = a[hit, c:] - update
            else:
                a[hit, c:] = (a[hit, c:] - update) % p
        pivots.append(c)
        r += 1
    return a, pivots


_BLOCK = 128


def _float_exact(field: Field, inner: int) -> bool:
    """Whether float64 products with ``inner`` terms of size < p stay exact."""
    return not field.is_rational and inner * (field.p - 1) ** 2 < 2**53


def _fmod(a: np.ndarray, p: float) -> np.ndarray:
    # exact for the integer-valued floats below 2^53 that occur here
    return a - np.floor(a / p) * p


def _reduce_block(blk: np.ndarray, p: float):
    """RREF of a small float64 block over F_p; returns (rows, pivots).

    Pivots are searched in a window of candidate columns (those still nonzero
    below the current row) while the row operations are recorded in a
    transform, which is then applied to all other columns with one product.
    """
    a = blk
    rows, cols = a.shape
    piv: list[int] = []
    r = 0
    c0 = 0
    while r < rows and c0 < cols:
        cand = c0 + np.flatnonzero(np.any(a[r:, c0:] != 0, axis=0))
        if cand.size == 0:
            break
        win = cand[:max(2 * (rows - r), 64)]
        w = len(win)
        aug = np.hstack([a[:, win], np.eye(rows)])
        for c in range(w):
            if r == rows:
                break
            nz = np.flatnonzero(aug[r:, c])
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                aug[[r, k]] = aug[[k, r]]
            inv = float(pow(int(aug[r, c]), -1, int(p)))
            aug[r, c:] = _fmod(aug[r, c:] * inv, p)
            hit = np.flatnonzero(aug[:, c])
            hit = hit[hit != r]
            if hit.size:
                aug[hit, c:] = _fmod(aug[hit, c:] - np.outer(aug[hit, c], aug[r, c:]), p)
            piv.append(int(win[c]))
            r += 1
        a = _fmod(aug[:, w:] @ a, p)
        a[:, win] = aug[:, :w]
        c0 = int(win[-1]) + 1
    return a[:r], piv


def _blocked_echelon(m: np.ndarray, field: Field, reduced: bool):
    """Row echelon form by blocks of rows, in float64 arithmetic.

    Each block is reduced on its own, then its pivot columns are cleared from
    all later rows with one matrix product.  With ``reduced`` the earlier
    blocks are finally cleared against later pivots, giving the RREF.
    """
    p = float(field.p)
    rest = np.array(m, dtype=np.float64)
    blocks = []
    while rest.shape[0]:
        blk, rest = rest[:_BLOCK].copy(), rest[_BLOCK:]
        red, piv = _reduce_block(blk, p)
        if not piv:
            continue
        blocks.append((red, piv))
        if rest.shape[0]:
            rest = _fmod(rest - rest[:, piv] @ red, p)
            rest = rest[np.any(rest != 0, axis=1)]
    if not blocks:
        return np.zeros((0, m.shape[1]), dtype=np.int64), []
    if reduced:
        later, lpiv = blocks[-1]
        for red, piv in reversed(blocks[:-1]):
            red = _fmod(red - red[:, lpiv] @ later, p)
            later = np.vstack([red, later])
            lpiv = piv + lpiv
        order = np.argsort(lpiv, kind="stable")
        return later[order].astype(np.int64), [lpiv[i] for i in order]
    rows = np.vstack([b for b, _ in blocks])
    piv = [c for _, pv in blocks for c in pv]
    order = np.argsort(piv, kind="stable")
    return rows[order].astype(np.int64), [piv[i] for i in order]


def row_reduce(m: np.ndarray, field: Field, reduced: bool = True):
    """Gaussian elimination; returns ``(echelon, pivot_columns)``.

    The echelon rows are the nonzero ones only when the blocked prime-field
    path is used, so callers should rely on ``len(pivots)`` rows.
    """
    if m.shape[0] > _BLOCK and _float_exact(field, _BLOCK + m.shape[1]):
        return _blocked_echelon(m, field, reduced)
    return _row_reduce_dense(m, field, reduced)


def rank(m: np.ndarray, field: Field) -> int:
    if m.size == 0:
        return 0
    # eliminate along the shorter side
    if m.shape[0] > m.shape[1]:
        m = m.T
    _, piv = row_reduce(m, field, reduced=False)
    return len(piv)


def kernel_basis(m: np.ndarray, field: Field) -> np.ndarray:
    """Columns spanning the right kernel, one per free column of the RREF."""
    rows, cols = m.shape
    if rows == 0:
        return field.identity(cols)
    red, piv = row_reduce(m, field, reduced=True)
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    out = field.zeros((cols, len(free)))
    if free:
        out[free, np.arange(len(free))] = field.scalar(1)
        if piv:
            out[piv, :] = -red[:len(piv)][:, free]
    return field.reduce(out)


def is_zero(m: np.ndarray) -> bool:
    return not np.any(m != 0)
