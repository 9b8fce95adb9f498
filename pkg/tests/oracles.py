"""Independent reference computations used to cross-check the package.

Nothing here imports the package's linear algebra: determinants are plain
Fraction elimination and hyperplanes come from cofactor expansion.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import isqrt

import numpy as np


def det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    out = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            out = -out
        out *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return out


def cofactor_hyperplane(rows) -> list[Fraction]:
    """Coefficients of det([X; rows]) expanded along the symbolic first row."""
    n = len(rows[0])
    return [(-1) ** j * det([[r[k] for k in range(n) if k != j] for r in rows]) for j in range(n)]


def _polymul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def _polysub(f, g):
    n = max(len(f), len(g))
    f = list(f) + [Fraction(0)] * (n - len(f))
    g = list(g) + [Fraction(0)] * (n - len(g))
    return [a - b for a, b in zip(f, g)]


def _trim(f):
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def _divide_root(f, r):
    """Synthetic division of f (low-to-high coefficients) by (x - r)."""
    f = _trim(f)
    high = f[::-1]
    out = [high[0]]
    for c in high[1:]:
        out.append(c + out[-1] * r)
    rem = out.pop()
    return out[::-1], rem


def _rational_sqrt(q) -> Fraction:
    q = Fraction(q)
    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if q < 0 or num * num != q.numerator or den * den != q.denominator:
        raise AssertionError(f"{q} is not a rational square")
    return Fraction(num, den)


def quintic_fifth(a, b, points):
    """Fifth intersection of the solid through four lifted points with the curve.

    Substituting the lift into the hyperplane gives
    y (h2 + h4 x) = -(h0 + h1 x + h3 x^2); squaring and using the curve
    equation leaves a quintic in x whose roots are the x-coordinates of the
    affine intersections.  Returns the set of candidate fifth points, each
    (x, y) or None for the point at infinity; it has two elements only when
    the solid is tangent at an input lying over the same x as another.
    """
    rows = [(1, x, y, x * x, x * y) for x, y in points]
    h = cofactor_hyperplane(rows)
    A = [h[0], h[1], h[3]]
    B = [h[2], h[4]]
    cubic = [Fraction(b), Fraction(a), Fraction(0), Fraction(1)]
    f = _trim(_polysub(_polymul(A, A), _polymul(_polymul(B, B), cubic)))
    for x, _ in points:
        f, rem = _divide_root(f, Fraction(x))
        if rem != 0:
            raise AssertionError("input point is not a root of the eliminant")
    f = _trim(f)
    if len(f) == 1:
        return {None}
    if len(f) != 2:
        raise AssertionError("eliminant has the wrong degree")
    x = -f[0] / f[1]
    den = h[2] + h[4] * x
    if den == 0:
        # the solid contains the whole vertical line, so both (x, +-y) are
        # on it; when one of them is already an input the other is the fifth,
        # and when both are (a tangent solid) the hyperplane cannot say which
        y = _rational_sqrt(x ** 3 + a * x + b)
        both = {(x, y), (x, -y)}
        rest = both - set(map(tuple, points))
        return rest or both
    y = -(h[0] + h[1] * x + h[3] * x * x) / den
    return {(x, y)}


def ordinary_group_bruteforce(n: int) -> int:
    """Count 4-subsets T of Z/n with -sum(T) in T by direct enumeration."""
    total = 0
    idx_c, idx_d = np.triu_indices(n, k=1)
    for a, b in combinations(range(n), 2):
        mask = idx_c > b
        c, d = idx_c[mask], idx_d[mask]
        s = (-(a + b + c + d)) % n
        total += int(np.count_nonzero((s == a) | (s == b) | (s == c) | (s == d)))
    return total


def ordinary_solids_bruteforce(points) -> int:
    """Ordinary solids of an exact configuration by cofactors and dot products."""
    pts = [tuple(p) for p in points]
    seen = set()
    ordinary = 0
    for four in combinations(range(len(pts)), 4):
        if four in seen:
            continue
        h = cofactor_hyperplane([pts[i] for i in four])
        if not any(h):
            raise AssertionError("four points are coplanar")
        inc = tuple(i for i, p in enumerate(pts) if sum(x * y for x, y in zip(h, p)) == 0)
        seen.update(combinations(inc, 4))
        ordinary += len(inc) == 4
    return ordinary


def generic_arrangement(lines: int) -> dict:
    """Counts for lines in general position in the projective plane."""
    V = lines * (lines - 1) // 2
    E = lines * (lines - 1)
    return {"V": V, "E": E, "F": 1 - V + E}
