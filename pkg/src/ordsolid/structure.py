"""Ordinary-hyperplane counts, projections, generators and structure detection."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from math import comb

from . import linalg
from .dualgraph import DualGraph, build_graph, edge_segment, grid_extract, rather_good_segments
from .errors import DegenerateConfig, DimensionMismatch, GeneralPositionViolation, InstanceTooLarge, \
    RetriesExhausted, StructureViolation
from .geom import PointConfig, general_position_report, hyperplane_table, normalize, rank
from .quadrics import grid_quadrics, initial_eleven, quadrics_through

HYPERPLANE = "HyperplaneConcentrated"
QUADRICS = "QuadricIntersection"
INCONCLUSIVE = "Inconclusive"

GENERIC_LIMIT = 10 ** 7


@dataclass
class OrdinaryCount:
    n: int
    d: int
    count: int
    total: int
    K: float


def _count(config: PointConfig, d: int, workers: int) -> OrdinaryCount:
    if config.dim != d:
        raise ValueError(f"configuration lives in P^{config.dim}, not P^{d}")
    if rank(config.vectors(), config.tol) < d + 1:
        raise DegenerateConfig(f"configuration does not span P^{d}")
    table = hyperplane_table(config, workers)
    ordinary = sum(1 for inc in table if len(inc) == d)
    return OrdinaryCount(config.n, d, ordinary, len(table), ordinary / config.n ** (d - 1))


def count_ordinary(config: PointConfig, d: int | None = None, workers: int = 1) -> OrdinaryCount:
    """Hyperplanes spanned by the configuration that contain exactly d of its points."""
    return _count(config, config.dim if d is None else d, workers)


def count_ordinary_generic_d(config: PointConfig, d: int | None = None, workers: int = 1) -> OrdinaryCount:
    d = config.dim if d is None else d
    if comb(config.n, d) > GENERIC_LIMIT:
        raise InstanceTooLarge(f"C({config.n},{d}) = {comb(config.n, d)} subsets exceeds {GENERIC_LIMIT}")
    return _count(config, d, workers)


def project_from(config: PointConfig, p: int) -> PointConfig:
    """Project from point ``p`` onto the first coordinate hyperplane missing it.

    The image of q is the point where the line pq meets X_i = 0, with that
    coordinate dropped.  ``meta['preimage']`` maps image indices back.
    """
    centre = config.points[p].coords
    i = next(k for k, x in enumerate(centre) if not linalg.is_zero(x, config.tol))
    images, back = [], []
    for k, q in enumerate(config.points):
        if k == p:
            continue
        v = q.coords
        if config.exact:
            f = Fraction(v[i]) / centre[i]
        else:
            f = v[i] / centre[i]
        w = [a - f * b for a, b in zip(v, centre)]
        images.append(normalize(w[:i] + w[i + 1:], config.tol))
        back.append(k)
    label = f"{config.label}/proj{p}" if config.label else f"proj{p}"
    return PointConfig(tuple(images), label, config.field, config.tol,
                       {"preimage": back, "centre": p, "dropped_coordinate": i})


def generate_nrc_config(n: int) -> PointConfig:
    """n-1 points of a twisted cubic inside X_4 = 0, plus (0:0:0:0:1)."""
    if n < 6:
        raise ValueError("the normal rational curve example needs n >= 6")
    pts = [(1, t, t * t, t ** 3, 0) for t in range(1, n)] + [(0, 0, 0, 0, 1)]
    return PointConfig(tuple(pts), label=f"nrc-n{n}", meta={"apex": n - 1})


def _random_point(rng: random.Random, dim: int, height: int) -> tuple:
    while True:
        v = tuple(Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(dim + 1))
        if any(v):
            return v


def random_config(n: int, dim: int = 4, seed: int = 0, height: int = 20, attempts: int = 50) -> PointConfig:
    rng = random.Random(seed)
    for _ in range(attempts):
        pts = {normalize(_random_point(rng, dim, height)) for _ in range(n)}
        if len(pts) < n:
            continue
        cfg = PointConfig(tuple(sorted(pts, key=lambda p: p.coords)), label=f"random-n{n}-d{dim}-s{seed}")
        if n < dim + 1 or general_position_report(cfg).ok:
            return cfg
    raise RetriesExhausted(f"no random configuration in general position after {attempts} attempts")


def perturb(config: PointConfig, k: int, seed: int = 0, height: int = 20, attempts: int = 50) -> PointConfig:
    """Replace k points by random rational points, reproducibly from ``seed``."""
    if not 0 <= k < config.n:
        raise ValueError("need 0 <= k < n")
    if k == 0:
        return config
    rng = random.Random(seed)
    idx = sorted(rng.sample(range(config.n), k))
    for _ in range(attempts):
        pts = list(config.points)
        for i in idx:
            v = _random_point(rng, config.dim, height)
            pts[i] = normalize([float(x) for x in v] if not config.exact else v, config.tol)
        try:
            cfg = config.with_points(pts, label=f"{config.label}+perturbed{k}s{seed}",
                                     meta={**config.meta, "perturbed": idx})
        except ValueError:
            continue
        if general_position_report(cfg).ok:
            return cfg
    raise RetriesExhausted(f"perturbed points failed general position {attempts} times")


# -- structure detection ----------------------------------------------------------

@dataclass
class StructureVerdict:
    case: str
    outliers: list
    certificate: object = None
    K: float = 0.0
    parameters: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)


def _concentrated(config: PointConfig, table: dict, budget: int):
    inc, h = max(table.items(), key=lambda kv: (len(kv[0]), [-i for i in kv[0]]))
    if len(inc) >= config.n - budget:
        return inc, h
    return None


def _segment_candidates(graph: DualGraph):
    """Segments to try, best first.

    Rather-good segments come first, on lines ordered by slightly-bad count
    then triple, longest segment first.  Small configurations often have no
    rather-good edge, so single good edges follow, then single edges whose
    end vertices both carry five points.
    """
    classes = graph.classify()
    ranked = sorted(graph.lines, key=lambda t: (sum(classes[e].slightly_bad for e in graph.lines[t].edges), t))
    for t in ranked:
        for seg in sorted(rather_good_segments(graph, t), key=lambda s: -s.length):
            yield "rather_good", seg
    for k, e in enumerate(graph.edges):
        if classes[k].good and e.start != e.end:
            yield "good", edge_segment(graph, [k])
    for k, e in enumerate(graph.edges):
        if not classes[k].good and e.start != e.end and \
                graph.multiplicity(e.start) == 5 and graph.multiplicity(e.end) == 5:
            yield "five_point", edge_segment(graph, [k])


def detect_structure(config: PointConfig, c: float = 10.0, workers: int = 1,
                     max_attempts: int = 200) -> StructureVerdict:
    """Classify a configuration with few ordinary solids.

    Case (i): some hyperplane holds all but at most ceil(6K) points.
    Case (ii): a grid found in the dual graph yields five quadrics that
    contain all but at most ceil(cK) points.  Otherwise inconclusive.
    """
    if config.dim != 4:
        raise ValueError("structure detection works in P^4")
    table = hyperplane_table(config, workers)
    ordinary = sum(1 for inc in table if len(inc) == 4)
    K = ordinary / config.n ** 3
    params = {"c": c, "tolerance": config.tol}
    hyper_budget = math.ceil(6 * K)
    found = _concentrated(config, table, hyper_budget)
    diag = {"ordinary": ordinary, "hyperplane_budget": hyper_budget}
    if found is not None:
        inc, h = found
        outliers = [i for i in range(config.n) if i not in inc]
        return StructureVerdict(HYPERPLANE, outliers, h, K, params, diag)
    budget = math.ceil(c * K)
    diag["quadric_budget"] = budget
    try:
        graph = build_graph(config, workers)
    except GeneralPositionViolation as exc:
        diag["error"] = str(exc)
        return StructureVerdict(INCONCLUSIVE, [], None, K, params, diag)
    errors: dict = {}
    best = None
    for attempt, (tier, seg) in enumerate(islice(_segment_candidates(graph), max_attempts)):
        try:
            grid = grid_extract(graph, seg)
            space = grid_quadrics(initial_eleven(grid), construct=False)
        except (StructureViolation, DimensionMismatch) as exc:
            name = type(exc).__name__
            errors[name] = errors.get(name, 0) + 1
            continue
        outliers = [i for i, p in enumerate(config.points) if not space.contains_point(p, config.tol)]
        if best is None or len(outliers) < len(best[0]):
            best = (outliers, space, tier, seg, attempt)
        if len(outliers) <= budget:
            break
    diag["rejected"] = errors
    if best is not None:
        outliers, space, tier, seg, attempt = best
        diag.update({"tier": tier, "line": list(seg.triple), "segment_length": seg.length,
                     "attempts": attempt + 1, "best_outliers": len(outliers)})
        if len(outliers) <= budget:
            return StructureVerdict(QUADRICS, outliers, space, K, params, diag)
    support = five_point_support(graph)
    if support:
        space = quadrics_through([config.points[i] for i in support], tol=config.tol)
        diag["support"] = {"points": len(support), "dimension": space.dimension}
        if space.dimension == 5:
            outliers = [i for i, p in enumerate(config.points) if not space.contains_point(p, config.tol)]
            if len(outliers) <= budget:
                diag["tier"] = "five_point_support"
                return StructureVerdict(QUADRICS, outliers, space, K, params, diag)
    return StructureVerdict(INCONCLUSIVE, [], None, K, params, diag)


def five_point_support(graph: DualGraph) -> list[int]:
    """Points lying on at least one spanned hyperplane with exactly five points.

    Used when no grid can be extracted: a point off the structured part
    generically lies on no such hyperplane.
    """
    out = set()
    for v in graph.vertices:
        if v.multiplicity == 5:
            out.update(v.incident_points)
    return sorted(out)
