"""Verification suites run by ``ordsolid verify``.

Each suite returns a list of ``Check`` results; all run in exact mode on
bundled fixtures unless a configuration is supplied.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .dualgraph import build_graph, edge_segment, grid_extract, stats_and_bounds
from .elliptic import Curve, CurvePoint, add, generate_cyclic_config, group_sum, negate, phi, \
    scalar_mul, torsion_example
from .errors import GeometryError, IdentityViolation, StructureViolation
from .geom import PointConfig, rank, span_hyperplane
from .quadrics import TEN, arc_bound_check, curve_quadrics, eleven_construction, grid_quadrics, \
    initial_eleven, pattern_labels, same_span, ten_point_property
from .structure import random_config

SUITES = ("lemma1", "11pts", "10points", "euler", "bounds", "glynn")
FIXTURE_ORDERS = (6, 7, 8, 9, 10, 12)


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


def fixtures() -> dict[str, PointConfig]:
    out = {}
    for n in FIXTURE_ORDERS:
        c, G = torsion_example(n)
        out[f"elliptic-n{n}"] = generate_cyclic_config(c, G, n).lifted
    out["random-n8"] = random_config(8, seed=0)
    return out


# -- random rational points on random curves ---------------------------------------

def curve_through(P: tuple, Q: tuple) -> Curve:
    """The short Weierstrass curve through two affine points with distinct x."""
    (x1, y1), (x2, y2) = P, Q
    a = (y1 * y1 - y2 * y2 - x1 ** 3 + x2 ** 3) / (x1 - x2)
    b = y1 * y1 - x1 ** 3 - a * x1
    return Curve(a, b)


def random_curve_points(rng: random.Random, height: int = 6, span: int = 2):
    """A random curve and a pool of rational points on it.

    The pool holds the small combinations i P + j Q of two random points.
    """
    while True:
        x1, x2 = (Fraction(rng.randint(-height, height), rng.randint(1, 3)) for _ in range(2))
        if x1 == x2:
            continue
        y1, y2 = (Fraction(rng.randint(-height, height), rng.randint(1, 3)) for _ in range(2))
        try:
            c = curve_through((x1, y1), (x2, y2))
        except GeometryError:
            continue
        P, Q = CurvePoint(x1, y1), CurvePoint(x2, y2)
        pool = set()
        for i in range(-span, span + 1):
            for j in range(-span, span + 1):
                R = add(c, scalar_mul(c, i, P), scalar_mul(c, j, Q))
                if not R.is_infinity:
                    pool.add(R)
        if len(pool) >= 8:
            return c, sorted(pool, key=lambda R: (R.x, R.y))


def random_quadruples(seed: int, curves: int, per_curve: int):
    """Yield (curve, P, Q, R, S) with spanning lifts, deterministically."""
    rng = random.Random(seed)
    for _ in range(curves):
        c, pool = random_curve_points(rng)
        made = 0
        while made < per_curve:
            four = rng.sample(pool, 4)
            if rank([phi(c, X) for X in four]) < 4:
                continue
            made += 1
            yield (c, *four)


def fifth_point_suite(seed: int = 0, curves: int = 10, per_curve: int = 100) -> list[Check]:
    fails, reverse_fails, tested = 0, 0, 0
    for c, P, Q, R, S in random_quadruples(seed, curves, per_curve):
        tested += 1
        T = negate(c, group_sum(c, (P, Q, R, S)))
        lifts = [phi(c, X) for X in (P, Q, R, S)]
        h = span_hyperplane(lifts)
        if not h.contains(phi(c, T)):
            fails += 1
        # a fifth point whose sum with the four is not O must miss the solid
        U = add(c, T, P)
        if U not in (P, Q, R, S, T) and h.contains(phi(c, U)) and not group_sum(c, (P, Q, R, S, U)).is_infinity:
            reverse_fails += 1
    return [Check("lemma1", "fifth point lies on the solid", fails == 0, {"tested": tested, "failures": fails}),
            Check("lemma1", "non-zero sums are not cohyperplanar", reverse_fails == 0,
                  {"tested": tested, "failures": reverse_fails})]


# -- grids ------------------------------------------------------------------------

def exact_grids(limit: int = 25, orders=(12,), tate_params=(2, 3, 4, 5, 6)):
    """Verified grids from single good edges of exact torsion configurations."""
    from .elliptic import tate_torsion_curve
    seen, out = set(), []
    for n in orders:
        for t in tate_params:
            c, G = tate_torsion_curve(n, t)
            cfg = generate_cyclic_config(c, G, n).lifted
            g = build_graph(cfg)
            classes = g.classify()
            for k, e in enumerate(g.edges):
                if not classes[k].good:
                    continue
                try:
                    grid = grid_extract(g, edge_segment(g, [k]))
                except StructureViolation:
                    continue
                key = (n, t, frozenset(grid.index_of.items()))
                if key in seen:
                    continue
                seen.add(key)
                out.append((c, grid))
                if len(out) >= limit:
                    return out
    return out


def eleven_suite(grids=None) -> list[Check]:
    grids = exact_grids() if grids is None else grids
    dims, constructions, curve_match = [], 0, 0
    for c, grid in grids:
        eleven = initial_eleven(grid)
        space = grid_quadrics(eleven, construct=False)
        dims.append(space.dimension)
        constructions += eleven_construction(eleven).ok
        curve_match += same_span(space, curve_quadrics(c))
    k = len(grids)
    return [Check("11pts", "eleven grid points lie on exactly 5 quadrics", k > 0 and all(d == 5 for d in dims),
                  {"grids": k, "dimensions": sorted(set(dims))}),
            Check("11pts", "hyperplane-pair construction", constructions == k, {"grids": k, "ok": constructions}),
            Check("11pts", "grid quadrics equal the curve quadrics", curve_match == k, {"grids": k, "ok": curve_match})]


def ten_views(grid):
    eleven = initial_eleven(grid)
    return eleven.subset(pattern_labels(TEN))


def random_ten(seed: int, count: int) -> list:
    from .quadrics import GridLabels
    out = []
    for k in range(count):
        cfg = random_config(10, seed=seed + k)
        labels = pattern_labels(TEN)
        out.append(GridLabels(dict(zip(labels, cfg.points))))
    return out


def ten_suite(grids=None, seed: int = 0) -> list[Check]:
    grids = exact_grids() if grids is None else grids
    holds = sum(ten_point_property(ten_views(g)) for _, g in grids)
    randoms = random_ten(seed, 25)
    fails = sum(not ten_point_property(r, require_structure=False) for r in randoms)
    return [Check("10points", "grid ten-point sets have the tenth-point property", holds == len(grids) > 0,
                  {"grids": len(grids), "holds": holds}),
            Check("10points", "random ten-point sets do not", fails == len(randoms),
                  {"sets": len(randoms), "fail": fails})]


# -- graphs -------------------------------------------------------------------------

def euler_suite(configs: dict | None = None) -> list[Check]:
    configs = fixtures() if configs is None else configs
    out = []
    for name, cfg in configs.items():
        try:
            s = stats_and_bounds(build_graph(cfg))
            out.append(Check("euler", name, all(s.identities.values()), dict(s.identities)))
        except IdentityViolation as exc:
            out.append(Check("euler", name, False, {"error": str(exc)}))
    return out


def bounds_suite(configs: dict | None = None) -> list[Check]:
    configs = fixtures() if configs is None else configs
    out = []
    for name, cfg in configs.items():
        s = stats_and_bounds(build_graph(cfg))
        out.append(Check("bounds", name, s.bounds_hold,
                         {"bad": s.bad_edges, "bad_bound": s.bad_bound, "bad_slack": s.bad_slack,
                          "slightly_bad": s.slightly_bad_edges, "slightly_bad_bound": s.slightly_bad_bound,
                          "slightly_bad_slack": s.slightly_bad_slack}))
    return out


def arc_suite(orders=(6, 7, 8, 9, 10, 12)) -> list[Check]:
    out = []
    for n in orders:
        c, G = torsion_example(n)
        cfg = generate_cyclic_config(c, G, n).lifted
        rep = arc_bound_check(cfg, curve_quadrics(c))
        ok = rep.max_incidence == 5 and not rep.real_pair_in_basis and rep.case == "extension"
        out.append(Check("glynn", f"elliptic-n{n}", ok,
                         {"max_incidence": rep.max_incidence, "real_pair": rep.real_pair_in_basis,
                          "case": rep.case, "spans": rep.spans}))
    return out


def run_suite(name: str, seed: int = 0, configs: dict | None = None) -> list[Check]:
    if name == "all":
        grids = exact_grids()
        out = fifth_point_suite(seed)
        out += eleven_suite(grids) + ten_suite(grids, seed)
        out += euler_suite(configs) + bounds_suite(configs) + arc_suite()
        return out
    if name == "lemma1":
        return fifth_point_suite(seed)
    if name == "11pts":
        return eleven_suite()
    if name == "10points":
        return ten_suite(seed=seed)
    if name == "euler":
        return euler_suite(configs)
    if name == "bounds":
        return bounds_suite(configs)
    if name == "glynn":
        return arc_suite()
    raise ValueError(f"unknown suite {name!r}")
