"""Exact linear algebra over the rationals.

Everything here works on numpy arrays with ``dtype=object`` holding
:class:`fractions.Fraction` entries.  Elimination is done on plain Python
lists of rows, which is noticeably faster than element access on object
arrays.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Q",
    "as_fraction",
    "qarray",
    "zeros",
    "eye",
    "is_zero",
    "format_rational",
    "parse_rational",
    "rref",
    "rank",
    "nullspace",
    "solve_affine",
    "in_span",
    "inverse",
    "matrix_power",
]

Q = Fraction


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: they would silently carry rounding
    error into an exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(value) -> str:
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def qarray(data) -> np.ndarray:
    """Object array of Fractions from any nested sequence or array."""
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for idx, v in enumerate(flat):
        flat[idx] = as_fraction(v)
    return flat.reshape(arr.shape)


def zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def is_zero(arr) -> bool:
    return all(v == 0 for v in np.asarray(arr, dtype=object).reshape(-1))


def _rows(m) -> list[list[Fraction]]:
    m = np.asarray(m, dtype=object)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    return [[as_fraction(v) for v in row] for row in m]


def _eliminate(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place Gauss-Jordan elimination to reduced row echelon form.

    Pivots are chosen as the first nonzero entry scanning rows top-down,
    columns left to right, so the result is canonical.  Returns pivot
    columns.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        inv = 1 / piv[c]
        if inv != 1:
            piv = rows[r] = [v * inv for v in piv]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    row = rows[i]
                    rows[i] = [a - f * b if b != 0 else a for a, b in zip(row, piv)]
        pivots.append(c)
        r += 1
    return pivots


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = _rows(m)
    ncols = np.asarray(m, dtype=object).shape[1]
    pivots = _eliminate(rows, ncols)
    out = zeros((len(pivots), ncols))
    for i in range(len(pivots)):
        out[i, :] = rows[i]
    return out, pivots


def rank(m) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return len(_eliminate(_rows(m), m.shape[1]))


def _kernel_from_rref(rows, pivots, ncols) -> list[np.ndarray]:
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = zeros(ncols)
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        basis.append(v)
    return basis


def nullspace(m) -> list[np.ndarray]:
    """Canonical kernel basis: one vector per free column, in column order.

    Each vector has a 1 in its free column and zeros in every other free
    column, so coordinates of a kernel element are read off at the free
    positions.
    """
    m = np.asarray(m, dtype=object)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return [_unit(ncols, i) for i in range(ncols)]
    rows = _rows(m)
    pivots = _eliminate(rows, ncols)
    return _kernel_from_rref(rows, pivots, ncols)


def _unit(n, i):
    v = zeros(n)
    v[i] = Fraction(1)
    return v


def solve_affine(m, b) -> Optional[tuple[np.ndarray, list[np.ndarray]]]:
    """Solve ``m @ x = b`` exactly.

    Returns ``(particular, kernel_basis)`` or ``None`` when the system is
    inconsistent.  The particular solution has zeros in all free columns.
    """
    m = np.asarray(m, dtype=object)
    b = [as_fraction(v) for v in np.asarray(b, dtype=object).reshape(-1)]
    nrows, ncols = m.shape
    if len(b) != nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {nrows}")
    rows = [r + [bv] for r, bv in zip(_rows(m), b)] if nrows else []
    pivots = _eliminate(rows, ncols)
    for i in range(len(pivots), nrows):
        if rows[i][ncols] != 0:
            return None
    x = zeros(ncols)
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][ncols]
    kernel = _kernel_from_rref(rows, pivots, ncols)
    return x, kernel


def in_span(vectors: Sequence, v) -> bool:
    """Whether ``v`` lies in the span of ``vectors`` (rank comparison)."""
    if len(vectors) == 0:
        return is_zero(v)
    base = np.array([np.asarray(u, dtype=object).reshape(-1) for u in vectors], dtype=object)
    aug = np.vstack([base, np.asarray(v, dtype=object).reshape(1, -1)])
    return rank(aug) == rank(base)


def inverse(m) -> Optional[np.ndarray]:
    """Exact inverse, or ``None`` for singular or non-square input."""
    m = np.asarray(m, dtype=object)
    n, k = m.shape
    if n != k:
        return None
    rows = [r + list(e) for r, e in zip(_rows(m), eye(n))]
    pivots = _eliminate(rows, n)
    if pivots != list(range(n)):
        return None
    return qarray([r[n:] for r in rows]) if n else zeros((0, 0))


def matrix_power(m, k: int) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    if k < 0:
        inv = inverse(m)
        if inv is None:
            raise ValueError("negative power of a singular matrix")
        m, k = inv, -k
    out = eye(m.shape[0])
    for _ in range(k):
        out = out @ m
    return out


def stack_columns(vectors: Iterable, length: int) -> np.ndarray:
    vectors = list(vectors)
    out = zeros((length, len(vectors)))
    for j, v in enumerate(vectors):
        out[:, j] = np.asarray(v, dtype=object).reshape(-1)
    return out
