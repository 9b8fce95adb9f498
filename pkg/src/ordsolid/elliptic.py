"""Short Weierstrass curves over Q, the quintic lift into P^4, and cyclic
configurations built from finite subgroups.

Exact arithmetic uses ``Fraction`` throughout.  Numerically generated
division points use ``mpmath`` at high precision and are rounded to binary64
only when lifted.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

import mpmath

from .errors import DegenerateConfig, DegenerateSpan, NotOnCurve, NotTorsion, SingularCurve
from .geom import FLOAT, RATIONAL, GeneralPositionReport, PointConfig, cohyperplanar, \
    general_position_report, normalize, parse_scalar, rank
from .linalg import DEFAULT_TOL

MP_DPS = 60


@dataclass(frozen=True)
class Curve:
    """y^2 = x^3 + a x + b."""
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", parse_scalar(self.a))
        object.__setattr__(self, "b", parse_scalar(self.b))
        if self.discriminant == 0:
            raise SingularCurve(f"y^2 = x^3 + ({self.a})x + ({self.b}) is singular")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.a ** 3 + 27 * self.b ** 2)

    def rhs(self, x):
        return x ** 3 + self.a * x + self.b

    def __str__(self):
        return f"y^2 = x^3 + ({self.a})x + ({self.b})"


@dataclass(frozen=True)
class CurvePoint:
    x: object = None
    y: object = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


O = CurvePoint()


def _numeric(P: CurvePoint) -> bool:
    return not P.is_infinity and not isinstance(P.x, (int, Fraction))


def _close(u, v) -> bool:
    return abs(u - v) <= mpmath.mpf(10) ** (-(MP_DPS // 2)) * (1 + abs(u) + abs(v))


def _same(u, v, numeric: bool) -> bool:
    return _close(u, v) if numeric else u == v


def on_curve(c: Curve, P: CurvePoint, tol: float = DEFAULT_TOL) -> bool:
    if P.is_infinity:
        return True
    if _numeric(P):
        lhs, rhs = P.y ** 2, P.x ** 3 + c.a * P.x + c.b
        return abs(lhs - rhs) <= tol * (1 + abs(lhs) + abs(rhs))
    return P.y ** 2 == c.rhs(P.x)


def _check(c: Curve, *points: CurvePoint):
    for P in points:
        if not on_curve(c, P):
            raise NotOnCurve(f"{P} is not on {c}")


def negate(c: Curve, P: CurvePoint) -> CurvePoint:
    _check(c, P)
    if P.is_infinity:
        return P
    return CurvePoint(P.x, -P.y)


def _add(c: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    numeric = _numeric(P) or _numeric(Q)
    if _same(P.x, Q.x, numeric):
        if _same(P.y, -Q.y, numeric):
            return O
        # tangent; y != 0 here since P = Q and P != -P
        lam = (3 * P.x ** 2 + c.a) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam ** 2 - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return CurvePoint(x3, y3)


def add(c: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-tangent group law with identity O."""
    _check(c, P, Q)
    return _add(c, P, Q)


def scalar_mul(c: Curve, k: int, P: CurvePoint) -> CurvePoint:
    _check(c, P)
    if k < 0:
        return negate(c, scalar_mul(c, -k, P))
    result, base = O, P
    while k:
        if k & 1:
            result = _add(c, result, base)
        base = _add(c, base, base)
        k >>= 1
    return result


def group_sum(c: Curve, points) -> CurvePoint:
    total = O
    for P in points:
        total = add(c, total, P)
    return total


def order(c: Curve, P: CurvePoint, limit: int = 12) -> int | None:
    """Exact order of a rational point, or None if it exceeds ``limit``."""
    Q = P
    for k in range(1, limit + 1):
        if Q.is_infinity:
            return k
        Q = _add(c, Q, P)
    return None


def phi_vector(c: Curve, P: CurvePoint) -> tuple:
    _check(c, P)
    if P.is_infinity:
        return (0, 0, 0, 0, 1)
    x, y = P.x, P.y
    return (1, x, y, x * x, x * y)


def phi(c: Curve, P: CurvePoint, tol: float = DEFAULT_TOL):
    """Lift (x, y) to (1 : x : y : x^2 : xy) and O to (0 : 0 : 0 : 0 : 1)."""
    v = phi_vector(c, P)
    if _numeric(P):
        v = tuple(float(t) for t in v)
    return normalize(v, tol)


def fifth_point(c: Curve, P: CurvePoint, Q: CurvePoint, R: CurvePoint, S: CurvePoint) -> CurvePoint:
    """The residual intersection of the solid through four lifted points.

    Returns ``-(P + Q + R + S)`` and confirms the five lifts are
    cohyperplanar.
    """
    _check(c, P, Q, R, S)
    four = [phi(c, X) for X in (P, Q, R, S)]
    if len(set(four)) < 4 or rank(four) < 4:
        raise DegenerateSpan("the four lifted points do not span a solid")
    T = negate(c, group_sum(c, (P, Q, R, S)))
    if not cohyperplanar(four + [phi(c, T)]):
        raise AssertionError("fifth point is not on the solid through the other four")
    return T


@dataclass
class CyclicConfig:
    curve: Curve
    generator: CurvePoint
    n: int
    lifted: PointConfig
    mode: str
    report: GeneralPositionReport
    residual: float = 0.0


def multiples(c: Curve, G: CurvePoint, n: int) -> list[CurvePoint]:
    """[G, 2G, ..., (n-1)G, O] computed by repeated addition."""
    pts = [G]
    for _ in range(n - 2):
        pts.append(_add(c, pts[-1], G))
    pts.append(O)
    return pts


def generate_cyclic_config(c: Curve, G: CurvePoint | None, n: int, mode: str = RATIONAL,
                           tol: float = DEFAULT_TOL) -> CyclicConfig:
    """Lift the cyclic subgroup generated by ``G`` (order ``n``) into P^4.

    In float mode ``G`` may be omitted; a generator of the order-``n``
    subgroup of the identity component is then computed numerically.
    """
    residual = 0.0
    if mode == RATIONAL:
        _check(c, G)
        if _numeric(G):
            raise ValueError("exact mode needs a rational generator")
        k = order(c, G, limit=n)
        if k != n:
            raise NotTorsion(f"{G} does not have order {n} (order {'> %d' % n if k is None else k})")
        pts = multiples(c, G, n)
        lifted = PointConfig(tuple(phi(c, P) for P in pts), label=f"elliptic-n{n}", field=RATIONAL, tol=tol)
    else:
        with mpmath.workdps(MP_DPS):
            if G is None:
                G = division_point(c, n)
            else:
                G = CurvePoint(mpmath.mpf(G.x) if not isinstance(G.x, Fraction) else _mp(G.x),
                               mpmath.mpf(G.y) if not isinstance(G.y, Fraction) else _mp(G.y))
            if not on_curve(c, G, tol):
                raise NotOnCurve(f"{G} is not on {c}")
            pts = multiples(c, G, n)
            last = pts[-2]
            residual = float(max(abs(last.x - G.x), abs(last.y + G.y)) / (1 + abs(G.x) + abs(G.y)))
            if residual > tol:
                raise NotTorsion(f"numerical generator is not {n}-torsion (residual {residual:.3g})")
            vecs = [tuple(float(t) for t in phi_vector(c, P)) if not P.is_infinity else (0.0, 0.0, 0.0, 0.0, 1.0)
                    for P in pts]
        lifted = PointConfig(tuple(normalize(v, tol) for v in vecs), label=f"elliptic-float-n{n}",
                             field=FLOAT, tol=tol)
    report = general_position_report(lifted)
    if not report.spans:
        raise DegenerateConfig("degenerate: all points cohyperplanar")
    lifted.meta.update({"curve": [str(c.a), str(c.b)], "n": n, "mode": mode})
    return CyclicConfig(c, G, n, lifted, mode, report, residual)


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def division_point(c: Curve, n: int) -> CurvePoint:
    """Point of order ``n`` on the identity component of E(R).

    The identity component is {x >= e} for the largest real root e.  Its
    elliptic logarithm is z(x) = int_x^inf dt / (2 sqrt(f(t))); after the
    substitution t = e + s^2 the integrand is smooth.  The point with
    logarithm (real period)/n is found by bracketing then Newton steps.
    """
    with mpmath.workdps(MP_DPS):
        a, b = _mp(c.a), _mp(c.b)
        roots = mpmath.polyroots([1, 0, a, b], maxsteps=200, extraprec=200)
        e = max(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -30)

        def g(s):
            t = e + s * s
            return t * t + e * t + e * e + a

        def z(s0):
            return mpmath.quad(lambda s: 1 / mpmath.sqrt(g(s)), [s0, s0 + 1, mpmath.inf])

        half = z(mpmath.mpf(0))
        target = 2 * half / n
        hi = mpmath.mpf(1)
        while z(hi) > target:
            hi *= 2
        lo = mpmath.mpf(0)
        for _ in range(60):
            mid = (lo + hi) / 2
            if z(mid) > target:
                lo = mid
            else:
                hi = mid
        s0 = (lo + hi) / 2
        for _ in range(8):
            s0 -= (z(s0) - target) / (-1 / mpmath.sqrt(g(s0)))
        x = e + s0 * s0
        y = mpmath.sqrt(x ** 3 + a * x + b)
        return CurvePoint(x, y)


@dataclass
class CoordinateMap:
    """Affine change of variables from a long Weierstrass model to y^2 = x^3 + Ax + B."""
    a1: Fraction
    a3: Fraction
    shift: Fraction

    def forward(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        x, y = Fraction(P.x), Fraction(P.y)
        return CurvePoint(x + self.shift, y + (self.a1 * x + self.a3) / 2)

    def inverse(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        x = Fraction(P.x) - self.shift
        return CurvePoint(x, Fraction(P.y) - (self.a1 * x + self.a3) / 2)


def weierstrass_short_form(a1, a2, a3, a4, a6) -> tuple[Curve, CoordinateMap]:
    """Complete the square in y, then depress the cubic in x."""
    a1, a2, a3, a4, a6 = (parse_scalar(v) for v in (a1, a2, a3, a4, a6))
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    A, B = -c4 / 48, -c6 / 864
    if 4 * A ** 3 + 27 * B ** 2 == 0:
        raise SingularCurve("long Weierstrass model is singular")
    return Curve(A, B), CoordinateMap(a1, a3, b2 / 12)


def on_long_curve(coeffs, P: CurvePoint) -> bool:
    a1, a2, a3, a4, a6 = coeffs
    x, y = P.x, P.y
    return y * y + a1 * x * y + a3 * y == x ** 3 + a2 * x * x + a4 * x + a6


# Tate normal form E(b, c): y^2 + (1 - c)xy - by = x^3 - bx^2, with (0, 0)
# of order N for the parametrisations below.
_TATE: dict[int, Callable[[Fraction], tuple[Fraction, Fraction]]] = {
    4: lambda t: (t, Fraction(0)),
    5: lambda t: (t, t),
    6: lambda t: (t + t * t, t),
    7: lambda t: (t ** 3 - t ** 2, t ** 2 - t),
    8: lambda t: ((2 * t - 1) * (t - 1), (2 * t - 1) * (t - 1) / t),
    9: lambda t: (t ** 2 * (t - 1) * (t ** 2 - t + 1), t ** 2 * (t - 1)),
    10: lambda t: (t ** 3 * (t - 1) * (2 * t - 1) / (t ** 2 - 3 * t + 1) ** 2,
                   -t * (t - 1) * (2 * t - 1) / (t ** 2 - 3 * t + 1)),
    12: lambda t: (t * (2 * t - 1) * (2 * t ** 2 - 2 * t + 1) * (3 * t ** 2 - 3 * t + 1) / (t - 1) ** 4,
                   -t * (2 * t - 1) * (3 * t ** 2 - 3 * t + 1) / (t - 1) ** 3),
}


def tate_torsion_curve(n: int, t) -> tuple[Curve, CurvePoint]:
    """Short-form curve with a rational point of order ``n`` (n in 4..10, 12)."""
    if n not in _TATE:
        raise NotTorsion(f"no rational {n}-torsion family (Mazur)")
    t = parse_scalar(t)
    b, cc = _TATE[n](t)
    coeffs = (1 - cc, -b, -b, Fraction(0), Fraction(0))
    curve, cmap = weierstrass_short_form(*coeffs)
    G = cmap.forward(CurvePoint(Fraction(0), Fraction(0)))
    if order(curve, G, limit=n) != n:
        raise NotTorsion(f"t = {t} gives a degenerate member of the order-{n} family")
    return curve, G


# Small-height parameters checked to give nonsingular curves with points of
# exact order n.
TORSION_PARAMETERS = {4: 2, 5: 2, 6: 2, 7: 2, 8: 2, 9: 2, 10: 2, 12: 2}

BUNDLED = {6: (Curve(0, 1), CurvePoint(Fraction(2), Fraction(3)))}


def torsion_example(n: int, t=None) -> tuple[Curve, CurvePoint]:
    if t is None and n in BUNDLED:
        return BUNDLED[n]
    return tate_torsion_curve(n, TORSION_PARAMETERS.get(n, 2) if t is None else t)


def count_ordinary_group(n: int) -> int:
    """Number of 4-subsets T of Z/n with -sum(T) in T.

    These are the solutions of 2P + Q + R + S = 0 with distinct P, Q, R, S.
    Each such T has a unique doubled element P, so T is enumerated exactly
    once as a 3-subset {Q, R, S} together with a root of 2P = -(Q+R+S).
    """
    if n < 5:
        raise ValueError("the cyclic model needs n >= 5")
    count = 0
    half = n // 2
    for C in combinations(range(n), 3):
        v = (-sum(C)) % n
        if n % 2:
            roots = ((v * (half + 1)) % n,)
        elif v % 2:
            continue
        else:
            roots = (v // 2, v // 2 + half)
        for P in roots:
            if P not in C:
                count += 1
    return count


def ordinary_bound(n: int, two_torsion_free: bool) -> Fraction:
    """(1/6)n(n-1)(n-2) without 2-torsion, (1/2)n(n-1)(n-2) otherwise."""
    m = n * (n - 1) * (n - 2)
    return Fraction(m, 6) if two_torsion_free else Fraction(m, 2)
