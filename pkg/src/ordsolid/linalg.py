"""Exact and floating linear algebra on small dense matrices.

Exact routines accept rows of ``int`` or ``Fraction`` and never round.
Float routines work on unit-normalised rows so that a single absolute
tolerance is meaningful for every configuration.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9


def is_float_vector(v: Sequence) -> bool:
    return any(isinstance(x, (float, np.floating)) for x in v)


def is_float_rows(rows: Sequence[Sequence]) -> bool:
    return any(is_float_vector(r) for r in rows)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_row(v: Sequence) -> list[int]:
    """Scale a rational vector to integers without changing its span."""
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    return [int(x * den) for x in v]


def primitive(v: Sequence) -> tuple[int, ...]:
    """Integer representative with gcd 1 and first nonzero entry positive."""
    ints = integer_row(v)
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ZeroDivisionError("zero vector has no primitive representative")
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def unit(v: Sequence[float], tol: float = DEFAULT_TOL) -> tuple[float, ...]:
    """Unit vector with the first entry above ``tol`` made positive."""
    arr = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ZeroDivisionError("zero vector")
    arr = arr / norm
    for x in arr:
        if abs(x) > tol:
            if x < 0:
                arr = -arr
            break
    return tuple(float(x) for x in arr)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


# -- exact -----------------------------------------------------------------

def bareiss_rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-free elimination (every division is exact)."""
    m = [integer_row(r) for r in rows]
    if not m:
        return 0
    nr, nc = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(nc):
        piv = next((i for i in range(rank, nr) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        pv = pr[col]
        for i in range(rank + 1, nr):
            row = m[i]
            f = row[col]
            for j in range(col + 1, nc):
                row[j] = (row[j] * pv - f * pr[j]) // prev
            row[col] = 0
        prev = pv
        rank += 1
        if rank == nr:
            break
    return rank


def bareiss_det(rows: Sequence[Sequence]) -> Fraction | int:
    n = len(rows)
    scale = Fraction(1)
    m = []
    for r in rows:
        if len(r) != n:
            raise ValueError("determinant of a non-square matrix")
        den = 1
        for x in r:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        scale /= den
        m.append([int(x * den) for x in r])
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k]
        pv = pk[k]
        for i in range(k + 1, n):
            row = m[i]
            f = row[k]
            for j in range(k + 1, n):
                row[j] = (row[j] * pv - f * pk[j]) // prev
            row[k] = 0
        prev = pv
    value = sign * m[n - 1][n - 1] * scale
    return int(value) if value.denominator == 1 else value


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    nr, nc = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(nc):
        piv = next((i for i in range(r, nr) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nr:
            break
    return m[:r], pivots


def exact_nullspace(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Basis of the right kernel and the free columns it is indexed by.

    Basis vector ``k`` has a 1 in free column ``free[k]`` and 0 in the
    other free columns, so coordinates of a kernel vector w.r.t. this basis
    are read off its free entries.
    """
    if not rows:
        basis = [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
        return basis, list(range(ncols))
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis, free


# -- float -----------------------------------------------------------------

def _unit_rows(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    norms = np.linalg.norm(arr, axis=1)
    norms[norms == 0] = 1.0
    return arr / norms[:, None]


def float_rank(rows, tol: float = DEFAULT_TOL) -> int:
    if len(rows) == 0:
        return 0
    s = np.linalg.svd(_unit_rows(rows), compute_uv=False)
    return int(np.sum(s > tol))


def float_det(rows) -> float:
    return float(np.linalg.det(_unit_rows(rows)))


def float_nullspace(rows, ncols: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal kernel basis, one vector per row."""
    if len(rows) == 0:
        return np.eye(ncols)
    a = _unit_rows(rows)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    r = int(np.sum(s > tol))
    return vt[r:]


# -- dispatch --------------------------------------------------------------

def rank(rows: Sequence[Sequence], tol: float = DEFAULT_TOL) -> int:
    if is_float_rows(rows):
        return float_rank(rows, tol)
    return bareiss_rank(rows)


def det(rows: Sequence[Sequence], tol: float = DEFAULT_TOL):
    if is_float_rows(rows):
        return float_det(rows)
    return bareiss_det(rows)


def is_zero(x, tol: float = DEFAULT_TOL) -> bool:
    if isinstance(x, (float, np.floating)):
        return abs(x) <= tol
    return x == 0


def sign(x, tol: float = DEFAULT_TOL) -> int:
    if isinstance(x, (float, np.floating)):
        if abs(x) <= tol:
            return 0
        return 1 if x > 0 else -1
    return (x > 0) - (x < 0)
