"""Quadrics through point sets, grid properties and arc checks.

A quadric in P^d is a coefficient vector over the monomials X_i X_j with
i <= j, listed in lexicographic order ("lex-upper").  The space of quadrics
through a point set is the kernel of its Veronese evaluation matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .elliptic import Curve
from .errors import ContainmentViolation, DimensionMismatch, MixedDimensions, StructureViolation
from .geom import PointConfig, cohyperplanar, hyperplane_table, max_incidence, rank, span_hyperplane
from .linalg import DEFAULT_TOL

MONOMIAL_ORDER = "lex-upper"
FAMILIES = "pqrst"


def monomials(nvars: int, degree: int = 2) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(nvars), degree))


def veronese_row(p, degree: int = 2) -> tuple:
    """Monomial evaluations at the canonical representative of ``p``."""
    v = tuple(p)
    out = []
    for mono in monomials(len(v), degree):
        x = 1
        for i in mono:
            x = x * v[i]
        out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Quadric:
    dim: int
    coeffs: tuple

    def __post_init__(self):
        n = comb(self.dim + 2, 2)
        if len(self.coeffs) != n:
            raise ValueError(f"a quadric in P^{self.dim} has {n} coefficients, got {len(self.coeffs)}")
        if linalg.is_float_vector(self.coeffs):
            object.__setattr__(self, "coeffs", linalg.unit(self.coeffs))
        else:
            object.__setattr__(self, "coeffs", linalg.primitive(self.coeffs))

    @property
    def exact(self) -> bool:
        return not linalg.is_float_vector(self.coeffs)

    def __call__(self, p):
        return linalg.dot(self.coeffs, veronese_row(p))

    def vanishes_at(self, p, tol: float = DEFAULT_TOL) -> bool:
        value = self(p)
        if isinstance(value, (float, np.floating)):
            return abs(value) <= tol
        if linalg.is_float_vector(tuple(p)):
            return abs(float(value)) <= tol
        return value == 0

    def matrix(self) -> list[list]:
        """Symmetric matrix with M_ii = coeff(X_i^2) and M_ij = coeff(X_i X_j) / 2."""
        n = self.dim + 1
        half = 0.5 if not self.exact else Fraction(1, 2)
        m = [[0] * n for _ in range(n)]
        for (i, j), c in zip(monomials(n), self.coeffs):
            if i == j:
                m[i][i] = c
            else:
                m[i][j] = m[j][i] = c * half
        return m

    @classmethod
    def from_terms(cls, dim: int, terms: dict) -> "Quadric":
        index = {mono: k for k, mono in enumerate(monomials(dim + 1))}
        coeffs = [Fraction(0)] * len(index)
        for (i, j), c in terms.items():
            coeffs[index[(min(i, j), max(i, j))]] += Fraction(c)
        return cls(dim, tuple(coeffs))


@dataclass
class QuadricSpace:
    dim: int
    basis: list[Quadric] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def exact(self) -> bool:
        return all(q.exact for q in self.basis)

    def contains_point(self, p, tol: float = DEFAULT_TOL) -> bool:
        return all(q.vanishes_at(p, tol) for q in self.basis)

    def rows(self) -> list[tuple]:
        return [q.coeffs for q in self.basis]


def _same_dim(points) -> int:
    dims = {len(tuple(p)) - 1 for p in points}
    if len(dims) > 1:
        raise MixedDimensions(f"points of differing dimensions: {sorted(dims)}")
    return dims.pop()


def forms_through(points: Sequence, degree: int, dim: int | None = None,
                  tol: float = DEFAULT_TOL) -> list[tuple]:
    """Kernel of the degree-``degree`` Veronese matrix, as coefficient rows."""
    pts = list(points)
    if pts:
        dim = _same_dim(pts)
    if dim is None:
        raise ValueError("dimension is needed for an empty point set")
    ncols = comb(dim + degree, degree)
    rows = [veronese_row(p, degree) for p in pts]
    if linalg.is_float_rows(rows):
        return [tuple(float(x) for x in v) for v in linalg.float_nullspace(rows, ncols, tol)]
    basis, _ = linalg.exact_nullspace(rows, ncols)
    return [tuple(v) for v in basis]


def quadrics_through(points: Sequence, dim: int | None = None, tol: float = DEFAULT_TOL) -> QuadricSpace:
    pts = list(points)
    if pts:
        dim = _same_dim(pts)
    rows = forms_through(pts, 2, dim, tol)
    return QuadricSpace(dim, [Quadric(dim, r) for r in rows])


def span_rank(rows: Sequence[Sequence], tol: float = DEFAULT_TOL) -> int:
    return linalg.rank(list(rows), tol) if rows else 0


def same_span(a: QuadricSpace, b: QuadricSpace, tol: float = DEFAULT_TOL) -> bool:
    ra, rb = span_rank(a.rows(), tol), span_rank(b.rows(), tol)
    return ra == rb == span_rank(a.rows() + b.rows(), tol)


def in_span(space: QuadricSpace, q: Quadric, tol: float = DEFAULT_TOL) -> bool:
    rows = space.rows()
    return span_rank(rows + [q.coeffs], tol) == span_rank(rows, tol)


def product_quadric(h: Sequence, g: Sequence) -> Quadric:
    """The quadric (h . X)(g . X)."""
    n = len(h)
    coeffs = []
    for i, j in monomials(n):
        coeffs.append(h[i] * g[i] if i == j else h[i] * g[j] + h[j] * g[i])
    return Quadric(n - 1, tuple(coeffs))


# -- the curve quadrics ---------------------------------------------------------

def curve_quadrics(c: Curve) -> QuadricSpace:
    """Five independent quadrics cutting out the lifted curve in P^4.

    Each one is checked to pull back to zero modulo the curve equation and
    to vanish at the lift of O.
    """
    a, b = c.a, c.b
    terms = [
        {(0, 3): 1, (1, 1): -1},
        {(0, 4): 1, (1, 2): -1},
        {(1, 4): 1, (2, 3): -1},
        {(2, 2): 1, (1, 3): -1, (0, 1): -a, (0, 0): -b},
        {(2, 4): 1, (3, 3): -1, (0, 3): -a, (0, 1): -b},
    ]
    basis = []
    for t in terms:
        q = Quadric.from_terms(4, t)
        if not pullback_vanishes(q, c):
            raise AssertionError(f"quadric {t} does not vanish on the curve")
        if q((0, 0, 0, 0, 1)) != 0:
            raise AssertionError(f"quadric {t} misses the lift of O")
        basis.append(q)
    space = QuadricSpace(4, basis)
    if span_rank(space.rows()) != 5:
        raise AssertionError("curve quadrics are dependent")
    return space


# polynomials in x, y as {(i, j): coeff} meaning coeff * x^i y^j
_LIFT = ({(0, 0): 1}, {(1, 0): 1}, {(0, 1): 1}, {(2, 0): 1}, {(1, 1): 1})


def _poly_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in f.items():
        for (i2, j2), c2 in g.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


def reduce_mod_curve(f: dict, c: Curve) -> dict:
    """Rewrite y^2 as x^3 + a x + b until every term has y-degree <= 1."""
    f = dict(f)
    while True:
        high = [k for k in f if k[1] >= 2]
        if not high:
            return {k: v for k, v in f.items() if v != 0}
        for (i, j) in high:
            coeff = f.pop((i, j))
            for (di, cc) in ((3, 1), (1, c.a), (0, c.b)):
                if cc == 0:
                    continue
                key = (i + di, j - 2)
                f[key] = f.get(key, 0) + coeff * cc


def pullback(q: Quadric) -> dict:
    out: dict = {}
    for (i, j), coeff in zip(monomials(5), q.coeffs):
        if coeff == 0:
            continue
        for k, v in _poly_mul(_LIFT[i], _LIFT[j]).items():
            out[k] = out.get(k, 0) + coeff * v
    return {k: v for k, v in out.items() if v != 0}


def pullback_vanishes(q: Quadric, c: Curve) -> bool:
    return not reduce_mod_curve(pullback(q), c)


# -- rank and hyperplane pairs -----------------------------------------------

def quadric_rank(q: Quadric, tol: float = DEFAULT_TOL) -> int:
    return linalg.rank(q.matrix(), tol)


def is_real_hyperplane_pair(q: Quadric, tol: float = DEFAULT_TOL) -> bool:
    """Rank 1, or rank 2 with an indefinite nonzero block."""
    r = quadric_rank(q, tol)
    if r == 1:
        return True
    if r != 2:
        return False
    m = q.matrix()
    n = len(m)
    # for rank 2 the sum of principal 2x2 minors is the product of the two
    # nonzero eigenvalues
    e2 = sum(m[i][i] * m[j][j] - m[i][j] * m[j][i] for i, j in combinations(range(n), 2))
    return e2 < -tol if isinstance(e2, float) else e2 < 0


# -- grids -----------------------------------------------------------------------

@dataclass
class GridLabels:
    """Points indexed by (family, index), families 'p','q','r','s','t'.

    ``index_of`` optionally records the position of each label in the
    configuration it came from.
    """
    points: dict
    index_of: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    def ranges(self) -> dict[str, list[int]]:
        out = {f: [] for f in FAMILIES}
        for fam, idx in self.points:
            out[fam].append(idx)
        return {f: sorted(v) for f, v in out.items()}

    def __getitem__(self, label):
        return self.points[label]

    def labels(self) -> list:
        return sorted(self.points, key=lambda k: (FAMILIES.index(k[0]), k[1]))

    def subset(self, labels: Iterable) -> "GridLabels":
        labels = list(labels)
        return GridLabels({k: self.points[k] for k in labels},
                          {k: self.index_of[k] for k in labels if k in self.index_of}, self.tol)

    def relabel(self, mapping: dict) -> "GridLabels":
        """New grid whose label ``new`` holds the point at ``mapping[new]``."""
        return GridLabels({new: self.points[old] for new, old in mapping.items()},
                          {new: self.index_of[old] for new, old in mapping.items() if old in self.index_of},
                          self.tol)

    def check_structure(self):
        """Cohyperplanar iff the five indices sum to zero, over the label ranges."""
        pts = list(self.points.values())
        if any(not f for f in self.ranges().values()):
            raise StructureViolation("every family needs at least one label")
        for a, b in combinations(range(len(pts)), 2):
            if rank([pts[a], pts[b]], self.tol) < 2:
                raise StructureViolation("grid contains a repeated point")
        r = self.ranges()
        for idx in product(*(r[f] for f in FAMILIES)):
            five = [self.points[(f, i)] for f, i in zip(FAMILIES, idx)]
            if cohyperplanar(five, self.tol) != (sum(idx) == 0):
                raise StructureViolation(f"indices {idx}: cohyperplanar={not sum(idx) == 0}, "
                                         f"index sum {sum(idx)}")

    def combos(self) -> int:
        r = self.ranges()
        out = 1
        for f in FAMILIES:
            out *= len(r[f])
        return out


ELEVEN = {"p": (0, 1), "q": (0, 1), "r": (-1, 0), "s": (-1, 0), "t": (-1, 0, 1)}
TEN = {"p": (0, 1), "q": (0, 1), "r": (-1, 0), "s": (-1, 0), "t": (-1, 1)}


def pattern_labels(pattern: dict) -> list:
    return [(f, i) for f in FAMILIES for i in pattern[f]]


def _require_pattern(grid: GridLabels, pattern: dict, name: str):
    if set(grid.points) != set(pattern_labels(pattern)):
        raise StructureViolation(f"grid does not match the {name}-point pattern")


def ten_point_property(grid: GridLabels, require_structure: bool = True) -> bool:
    """Every quadric through nine of the ten points contains the tenth.

    With ``require_structure`` the labels must match the ten-point pattern
    and satisfy the grid invariant; without it any ten points are tested.
    """
    if require_structure:
        _require_pattern(grid, TEN, "10")
        grid.check_structure()
    pts = list(grid.points.values())
    if len(pts) != 10:
        raise StructureViolation("ten points are needed")
    for k in range(10):
        nine = pts[:k] + pts[k + 1:]
        space = quadrics_through(nine, tol=grid.tol)
        if space.dimension != 6:
            return False
        if not space.contains_point(pts[k], grid.tol):
            return False
    return True


# labels (p, q, r, s, t)-indices of the hyperplane pairs for the eleven points
ELEVEN_PAIRS = {
    1: ((0, 0, 0, 0, 0), (1, 1, -1, -1, 0)),
    2: ((1, 0, -1, 0, 0), (0, 1, 0, -1, 0)),
    3: ((1, 0, 0, -1, 0), (0, 1, -1, 0, 0)),
    4: ((0, 1, 0, 0, -1), (1, 0, -1, -1, 1)),
    5: ((1, 1, -1, 0, -1), (0, 0, 0, -1, 1)),
    6: ((1, 1, 0, -1, -1), (0, 0, -1, 0, 1)),
    7: ((1, 0, 0, 0, -1), (0, 1, -1, -1, 1)),
}


@dataclass
class ElevenConstruction:
    pair_quadrics: dict
    lambdas: dict
    w_quadrics: dict
    ten_space_dimension: int
    ok: bool
    failures: list


def _hyperplane_for(grid: GridLabels, idx: tuple):
    return tuple(span_hyperplane([grid[(f, i)] for f, i in zip(FAMILIES, idx)][:4], grid.tol))


def eleven_construction(grid: GridLabels) -> ElevenConstruction:
    """Build the two correction quadrics from hyperplane pairs and check them.

    Q_j is the product of two hyperplanes through grid points.  Q_4..Q_7
    and W_k = Q_1 + lambda_k Q_k (k = 2, 3, lambda_k fixed by W_k(t_1) = 0)
    must span the six-dimensional space through the ten points other than
    t_0, with W_k also vanishing at t_{-1}.
    """
    tol = grid.tol
    failures = []
    Q = {}
    for j, (h1, h2) in ELEVEN_PAIRS.items():
        hs = []
        for idx in (h1, h2):
            five = [grid[(f, i)] for f, i in zip(FAMILIES, idx)]
            h = _hyperplane_for(grid, idx)
            if not all(linalg.is_zero(linalg.dot(h, p), tol) for p in five):
                failures.append(f"hyperplane {idx} misses a grid point")
            hs.append(h)
        Q[j] = product_quadric(hs[0], hs[1])
    ten = [grid[lab] for lab in pattern_labels(TEN)]
    for j in range(4, 8):
        if not all(Q[j].vanishes_at(p, tol) for p in ten):
            failures.append(f"Q{j} misses one of the ten points")
    t1 = grid[("t", 1)]
    lambdas, W = {}, {}
    for k in (2, 3):
        qk = Q[k](t1)
        if linalg.is_zero(qk, tol):
            failures.append(f"Q{k} vanishes at t1")
            continue
        lam = -Q[1](t1) / (qk if isinstance(qk, float) else Fraction(qk))
        lambdas[k] = lam
        W[k] = Quadric(4, tuple(a + lam * b for a, b in zip(Q[1].coeffs, Q[k].coeffs)))
        if not all(W[k].vanishes_at(grid[lab], tol) for lab in pattern_labels(ELEVEN)):
            failures.append(f"W{k} misses one of the eleven points")
    rows = [W[k].coeffs for k in W] + [Q[j].coeffs for j in range(4, 8)]
    dim6 = span_rank(rows, tol)
    if dim6 != 6:
        failures.append(f"correction quadrics span {dim6} dimensions, expected 6")
    ten_space = quadrics_through(ten, tol=tol)
    if ten_space.dimension != 6:
        failures.append(f"quadrics through the ten points form a space of dimension {ten_space.dimension}")
    elif span_rank(rows + ten_space.rows(), tol) != 6:
        failures.append("correction quadrics do not lie in the ten-point space")
    return ElevenConstruction(Q, lambdas, W, dim6, not failures, failures)


def grid_quadrics(grid: GridLabels, construct: bool = True) -> QuadricSpace:
    """The five-dimensional space of quadrics through an eleven-point grid."""
    _require_pattern(grid, ELEVEN, "11")
    grid.check_structure()
    pts = [grid[lab] for lab in pattern_labels(ELEVEN)]
    space = quadrics_through(pts, tol=grid.tol)
    if space.dimension != 5:
        raise DimensionMismatch(f"quadrics through the 11 grid points have dimension {space.dimension}",
                                space.dimension)
    if construct:
        report = eleven_construction(grid)
        if not report.ok:
            raise AssertionError("; ".join(report.failures))
        for j in range(4, 8):
            # Q_j contains ten of the points but is nonzero at t_0
            if report.pair_quadrics[j].vanishes_at(grid[("t", 0)], grid.tol):
                raise AssertionError(f"Q{j} unexpectedly contains t0")
        combined = report.w_quadrics
        if span_rank(space.rows() + [w.coeffs for w in combined.values()]
                     + [report.pair_quadrics[j].coeffs for j in range(4, 8)], grid.tol) != 6:
            raise AssertionError("eleven-point space is not inside the ten-point space")
    return space


# -- extending along a segment -------------------------------------------------

def _relabeled(grid: GridLabels, pattern: dict, fmap: dict) -> GridLabels:
    mapping = {}
    for fam, idxs in pattern.items():
        actual_fam, f = fmap[fam]
        for i in idxs:
            mapping[(fam, i)] = (actual_fam, f(i))
    return grid.relabel(mapping)


def _ident(i):
    return i


def initial_eleven(grid: GridLabels) -> GridLabels:
    """The eleven-point pattern inside a segment grid."""
    fmap = {"p": ("t", _ident), "q": ("r", _ident), "r": ("s", _ident), "s": ("q", _ident), "t": ("p", _ident)}
    return _relabeled(grid, ELEVEN, fmap)


def extension_steps(m: int) -> list[tuple[str, tuple, dict]]:
    """Ten-point views that add one new grid label each, in order.

    Each entry is (description, new label, family map); the family map
    sends a ten-pattern family to (segment family, index map).
    """
    steps = [
        ("q1", ("q", 1), {"p": ("t", _ident), "q": ("r", _ident), "r": ("s", _ident),
                          "s": ("p", _ident), "t": ("q", _ident)}),
        ("r-1", ("r", -1), {"p": ("t", _ident), "q": ("q", _ident), "r": ("s", _ident),
                            "s": ("p", _ident), "t": ("r", _ident)}),
    ]
    for i in range(1, m):
        steps.append((f"t{i + 1}", ("t", i + 1), {
            "p": ("p", _ident), "q": ("q", lambda j: j - 1), "r": ("r", _ident),
            "s": ("s", lambda j, i=i: j - i + 1), "t": ("t", lambda j, i=i: j + i)}))
        steps.append((f"s{-i - 1}", ("s", -i - 1), {
            "p": ("p", lambda j: -j), "q": ("q", lambda j: 1 - j), "r": ("r", lambda j: -j),
            "s": ("t", lambda j, i=i: i - 1 - j), "t": ("s", lambda j, i=i: -i - j)}))
    return steps


@dataclass
class SegmentQuadrics:
    space: QuadricSpace
    steps: list
    all_contained: bool


def segment_quadrics(grid: GridLabels) -> SegmentQuadrics:
    """Quadrics from the initial eleven points, carried across the whole segment.

    ``grid`` holds p, q, r in {-1, 0, 1}, s in {-m..0} and t in {0..m}.
    Each step applies the ten-point property to a view whose nine known
    points are already on the space, then confirms the new point is too.
    """
    m = max(grid.ranges()["t"])
    space = grid_quadrics(initial_eleven(grid))
    tol = grid.tol
    steps = []
    for name, new, fmap in extension_steps(m):
        view = _relabeled(grid, TEN, fmap)
        known = [lab for lab in view.points if _actual(fmap, lab) != new]
        holds = ten_point_property(view)
        nine_on = all(space.contains_point(grid[_actual(fmap, lab)], tol) for lab in known)
        new_on = space.contains_point(grid[new], tol)
        steps.append({"adds": name, "ten_point": holds, "known_on_space": nine_on, "new_on_space": new_on})
    all_on = all(space.contains_point(p, tol) for p in grid.points.values())
    return SegmentQuadrics(space, steps, all_on)


def _actual(fmap: dict, lab: tuple) -> tuple:
    fam, f = fmap[lab[0]]
    return (fam, f(lab[1]))


# -- arcs ------------------------------------------------------------------------

@dataclass
class ArcReport:
    max_incidence: int
    spans: bool
    real_pair_in_basis: bool
    space_dimension: int
    case: str
    is_arc: bool
    within_extension_bound: bool


def arc_bound_check(config: PointConfig, space: QuadricSpace, workers: int = 1) -> ArcReport:
    d = config.dim
    for k, p in enumerate(config.points):
        if not space.contains_point(p, config.tol):
            raise ContainmentViolation(f"point {k} is not on every quadric of the space")
    table = hyperplane_table(config, workers)
    mi = max_incidence(table)
    spans = rank(config.vectors(), config.tol) == d + 1
    pair = any(is_real_hyperplane_pair(q, config.tol) for q in space.basis)
    if space.dimension == comb(d, 2):
        case = "arc"
    elif space.dimension == comb(d, 2) - 1:
        case = "extension"
    else:
        case = "other"
    return ArcReport(mi, spans, pair, space.dimension, case, mi <= d, mi <= d + 1)
