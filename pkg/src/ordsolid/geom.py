"""Points, hyperplanes and incidence in real projective space.

Exact points are stored as primitive integer vectors (gcd 1, first nonzero
entry positive), so equality of projective points is tuple equality.
Float points are unit vectors with the same sign rule; they exist only for
configurations built from numerically computed curve points.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import linalg
from .errors import DegenerateSpan, GeneralPositionViolation, MixedDimensions, ZeroVector
from .linalg import DEFAULT_TOL

RATIONAL = "rational"
FLOAT = "float"


def parse_scalar(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_scalar(x) -> str:
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _canonical(v: Sequence, tol: float):
    if len(v) < 2:
        raise ValueError("a projective vector needs at least two coordinates")
    if linalg.is_float_vector(v):
        if all(abs(float(x)) <= tol for x in v):
            raise ZeroVector("all coordinates are zero")
        return linalg.unit([float(x) for x in v], tol)
    if all(x == 0 for x in v):
        raise ZeroVector("all coordinates are zero")
    return linalg.primitive([parse_scalar(x) if isinstance(x, str) else x for x in v])


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def exact(self) -> bool:
        return not linalg.is_float_vector(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


@dataclass(frozen=True)
class Hyperplane:
    coeffs: tuple

    @property
    def dim(self) -> int:
        return len(self.coeffs) - 1

    def value(self, p) -> object:
        return linalg.dot(self.coeffs, p)

    def contains(self, p, tol: float = DEFAULT_TOL) -> bool:
        return linalg.is_zero(self.value(p), tol)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)


def normalize(v: Sequence, tol: float = DEFAULT_TOL) -> ProjectivePoint:
    """Canonical representative of the projective point with representative ``v``."""
    return ProjectivePoint(_canonical(v, tol))


def as_hyperplane(v: Sequence, tol: float = DEFAULT_TOL) -> Hyperplane:
    return Hyperplane(_canonical(v, tol))


def _vectors(points) -> list[tuple]:
    out = [tuple(p) for p in points]
    if len({len(p) for p in out}) > 1:
        raise MixedDimensions(f"points of differing dimensions: {sorted({len(p) - 1 for p in out})}")
    return out


def rank(points: Sequence, tol: float = DEFAULT_TOL) -> int:
    vecs = _vectors(points)
    if not vecs:
        return 0
    return linalg.rank(vecs, tol)


def span_hyperplane(points: Sequence, tol: float = DEFAULT_TOL) -> Hyperplane:
    """The unique hyperplane through ``d`` independent points of P^d."""
    vecs = _vectors(points)
    if not vecs:
        raise DegenerateSpan("no points given")
    ncols = len(vecs[0])
    if linalg.is_float_rows(vecs):
        basis = linalg.float_nullspace(vecs, ncols, tol)
        if len(basis) != 1:
            raise DegenerateSpan(f"points span a subspace of rank {ncols - len(basis)}, need {ncols - 1}")
        return Hyperplane(linalg.unit(basis[0], tol))
    basis, _ = linalg.exact_nullspace(vecs, ncols)
    if len(basis) != 1:
        raise DegenerateSpan(f"points span a subspace of rank {ncols - len(basis)}, need {ncols - 1}")
    return Hyperplane(linalg.primitive(basis[0]))


def cohyperplanar(points: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """True iff the points lie in a common hyperplane (rank <= d)."""
    vecs = _vectors(points)
    if not vecs:
        return True
    d = len(vecs[0]) - 1
    if len(vecs) == d + 1:
        return linalg.is_zero(linalg.det(vecs), tol)
    return linalg.rank(vecs, tol) <= d


@dataclass(frozen=True)
class PointConfig:
    points: tuple
    label: str = ""
    field: str = RATIONAL
    tol: float = DEFAULT_TOL
    meta: dict = dc_field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        pts = tuple(p if isinstance(p, ProjectivePoint) else normalize(p, self.tol) for p in self.points)
        if len({p.dim for p in pts}) > 1:
            raise MixedDimensions("configuration mixes dimensions")
        object.__setattr__(self, "points", pts)
        if self.field == RATIONAL:
            if any(not p.exact for p in pts):
                raise ValueError("rational configuration contains float coordinates")
            if len(set(pts)) != len(pts):
                raise ValueError("configuration contains repeated points")
        else:
            for i, j in combinations(range(len(pts)), 2):
                if linalg.float_rank([pts[i].coords, pts[j].coords], self.tol) < 2:
                    raise ValueError(f"configuration contains repeated points {i}, {j}")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points[0].dim if self.points else 0

    @property
    def exact(self) -> bool:
        return self.field == RATIONAL

    def vectors(self) -> list[tuple]:
        return [p.coords for p in self.points]

    def with_points(self, points, label=None, meta=None) -> "PointConfig":
        return PointConfig(tuple(points), label if label is not None else self.label,
                           self.field, self.tol, dict(meta if meta is not None else self.meta))


@dataclass
class GeneralPositionReport:
    spans: bool
    worst_coplanar_tuple: tuple | None

    @property
    def ok(self) -> bool:
        return self.spans and self.worst_coplanar_tuple is None


def general_position_report(config: PointConfig) -> GeneralPositionReport:
    """Spanning test plus an exhaustive search for a degenerate d-subset.

    In P^d the hypothesis is that every d points span a hyperplane; in P^4
    a failing 4-subset is a coplanar quadruple.
    """
    vecs = config.vectors()
    d = config.dim
    spans = rank(vecs, config.tol) == d + 1
    bad = None
    for combo in combinations(range(config.n), d):
        if linalg.rank([vecs[i] for i in combo], config.tol) < d:
            bad = combo
            break
    return GeneralPositionReport(spans, bad)


def incident_indices(h: Hyperplane | Sequence, vecs: Sequence, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
    coeffs = tuple(h)
    return tuple(i for i, p in enumerate(vecs) if linalg.is_zero(linalg.dot(coeffs, p), tol))


def _table_chunk(vecs, firsts, d, tol):
    table = {}
    covered = set()
    n = len(vecs)
    for a in firsts:
        for rest in combinations(range(a + 1, n), d - 1):
            combo = (a,) + rest
            if combo in covered:
                continue
            try:
                h = span_hyperplane([vecs[i] for i in combo], tol)
            except DegenerateSpan:
                raise GeneralPositionViolation(f"points {combo} do not span a hyperplane", combo) from None
            inc = tuple(sorted(set(incident_indices(h, vecs, tol)) | set(combo)))
            if inc not in table:
                table[inc] = h
                if len(inc) > d:
                    # subsets skipped below must still span
                    for sub in combinations(inc, d):
                        if linalg.rank([vecs[i] for i in sub], tol) < d:
                            raise GeneralPositionViolation(f"points {sub} do not span a hyperplane", sub)
            covered.update(combinations(inc, d))
    return table


def hyperplane_table(config: PointConfig, workers: int = 1) -> dict[tuple[int, ...], Hyperplane]:
    """Every hyperplane spanned by d points, keyed by its sorted incidence set.

    The result is independent of ``workers``: chunks are merged in index
    order and a hyperplane is identified by the points it contains.
    """
    vecs = config.vectors()
    d = config.dim
    n = config.n
    if n < d:
        return {}
    firsts = list(range(n - d + 1))
    if workers <= 1 or len(firsts) < 2:
        chunks = [firsts]
    else:
        k = min(workers, len(firsts))
        chunks = [firsts[i::k] for i in range(k)]
    if len(chunks) == 1:
        parts = [_table_chunk(vecs, chunks[0], d, config.tol)]
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_table_chunk, [vecs] * len(chunks), chunks,
                                  [d] * len(chunks), [config.tol] * len(chunks)))
    merged: dict = {}
    for part in parts:
        for inc, h in part.items():
            merged.setdefault(inc, h)
    return dict(sorted(merged.items()))


def max_incidence(table: dict) -> int:
    return max((len(k) for k in table), default=0)


def points_from_ints(rows: Iterable[Sequence[int]]) -> list[ProjectivePoint]:
    return [normalize(r) for r in rows]
