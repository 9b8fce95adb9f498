"""The dual arrangement graph of a point configuration in P^4.

Each configuration point x becomes the dual hyperplane x*.  A vertex is a
spanned hyperplane (four or more points); the points p, q, r give the dual
line p* ^ q* ^ r*, cut into cyclic edges by the vertices on it; faces live
in the dual planes p* ^ q*.

Faces are found without building a planar subdivision.  A face of a line
arrangement in the projective plane is determined by the signs of the line
equations on its interior (up to a global sign), and every corner of a face
sits at a vertex between two consecutive lines through it.  Enumerating the
sectors at every vertex therefore yields every face together with its
number of corners, which for these arrangements equals its number of edges.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations, permutations

import numpy as np

from . import linalg
from .errors import GeneralPositionViolation, IdentityViolation, StructureViolation
from .geom import PointConfig, hyperplane_table, rank
from .quadrics import GridLabels


@dataclass
class GraphVertex:
    hyperplane: tuple
    incident_points: tuple

    @property
    def multiplicity(self) -> int:
        return len(self.incident_points)


@dataclass
class Edge:
    triple: tuple
    start: int
    end: int
    interior: tuple
    position: int


@dataclass
class DualLine:
    triple: tuple
    vertices: list
    params: list
    edges: list = field(default_factory=list)


@dataclass
class EdgeClass:
    good: bool
    rather_good: bool

    @property
    def bad(self) -> bool:
        return not self.good

    @property
    def slightly_bad(self) -> bool:
        return not self.rather_good


@dataclass
class PlaneArrangement:
    pair: tuple
    vertex_count: int
    edge_count: int
    faces: dict

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @property
    def histogram(self) -> Counter:
        return Counter(self.faces.values())

    @property
    def euler(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count


@dataclass
class Segment:
    triple: tuple
    edges: list
    vertices: list
    cyclic: bool = False

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass
class GraphStats:
    n: int
    v_histogram: dict
    edge_count: int
    f_histogram: dict
    face_count: int
    K: float
    bad_edges: int
    slightly_bad_edges: int
    identities: dict
    bad_bound: int
    slightly_bad_bound: int

    @property
    def bad_slack(self) -> int:
        return self.bad_bound - self.bad_edges

    @property
    def slightly_bad_slack(self) -> int:
        return self.slightly_bad_bound - self.slightly_bad_edges

    @property
    def bounds_hold(self) -> bool:
        return self.bad_edges <= self.bad_bound and self.slightly_bad_edges <= self.slightly_bad_bound


class DualGraph:
    def __init__(self, config: PointConfig, vertices: list, lines: dict, edges: list):
        self.config = config
        self.vertices = vertices
        self.lines = lines
        self.edges = edges
        self.exact = config.exact
        self.tol = config.tol
        self.n = config.n
        self._planes: dict = {}
        self._classes: list | None = None
        self._vertex_signs = None
        self._edge_signs = None
        self.by_incidence = {v.incident_points: k for k, v in enumerate(vertices)}
        self.by_quadruple = {}
        for k, v in enumerate(vertices):
            for four in combinations(v.incident_points, 4):
                self.by_quadruple[four] = k
        self.vertex_edges = defaultdict(list)
        for k, e in enumerate(edges):
            self.vertex_edges[e.start].append(k)
            if e.end != e.start:
                self.vertex_edges[e.end].append(k)

    # -- lookups ------------------------------------------------------------
    def multiplicity(self, v: int) -> int:
        return self.vertices[v].multiplicity

    def fifth(self, a, b, c, d) -> int | None:
        """The fifth point of a multiplicity-5 hyperplane through four points."""
        key = tuple(sorted((a, b, c, d)))
        if len(set(key)) < 4:
            return None
        v = self.by_quadruple.get(key)
        if v is None or self.multiplicity(v) != 5:
            return None
        (e,) = set(self.vertices[v].incident_points) - set(key)
        return e

    # -- signs --------------------------------------------------------------
    def _sign_rows(self, vectors) -> list[list[int]]:
        pts = self.config.vectors()
        if self.exact:
            return [[linalg.sign(linalg.dot(v, x)) for x in pts] for v in vectors]
        if not vectors:
            return []
        vals = np.asarray(vectors, dtype=float) @ np.asarray(pts, dtype=float).T
        return np.sign(np.where(np.abs(vals) <= self.tol, 0.0, vals)).astype(int).tolist()

    def vertex_signs(self):
        if self._vertex_signs is None:
            self._vertex_signs = self._sign_rows([v.hyperplane for v in self.vertices])
            for row, v in zip(self._vertex_signs, self.vertices):
                for i in v.incident_points:
                    row[i] = 0
        return self._vertex_signs

    def edge_signs(self):
        if self._edge_signs is None:
            self._edge_signs = self._sign_rows([e.interior for e in self.edges])
            for row, e in zip(self._edge_signs, self.edges):
                for i in e.triple:
                    row[i] = 0
                if any(row[i] == 0 for i in range(self.n) if i not in e.triple):
                    raise IdentityViolation(f"edge interior of {e.triple} lies on another dual hyperplane")
        return self._edge_signs

    # -- planes ---------------------------------------------------------------
    def plane(self, p: int, q: int) -> PlaneArrangement:
        key = (min(p, q), max(p, q))
        if key not in self._planes:
            self._planes[key] = _plane_arrangement(self, *key)
        return self._planes[key]

    def all_planes(self) -> list[PlaneArrangement]:
        return [self.plane(p, q) for p, q in combinations(range(self.n), 2)]

    def adjacent_faces(self, edge_id: int, pair: tuple) -> tuple:
        """Sizes of the two faces beside an edge inside the plane of ``pair``."""
        e = self.edges[edge_id]
        a, b = sorted(pair)
        (c,) = set(e.triple) - {a, b}
        arr = self.plane(a, b)
        row = self.edge_signs()[edge_id]
        others = [x for x in range(self.n) if x != a and x != b]
        sizes = []
        for s in (1, -1):
            sig = [s if x == c else row[x] for x in others]
            sizes.append(arr.faces[_canonical_signs(sig)])
        return tuple(sizes)

    # -- classification ---------------------------------------------------------
    def classify(self) -> list[EdgeClass]:
        if self._classes is not None:
            return self._classes
        good = []
        for k, e in enumerate(self.edges):
            ok = self.multiplicity(e.start) == 5 and self.multiplicity(e.end) == 5
            if ok:
                p, q, r = e.triple
                for pair in ((p, q), (p, r), (q, r)):
                    if self.adjacent_faces(k, pair) != (3, 3):
                        ok = False
                        break
            good.append(ok)
        classes = []
        for k, e in enumerate(self.edges):
            rg = good[k] and all(good[j] for v in {e.start, e.end} for j in self.vertex_edges[v])
            classes.append(EdgeClass(good[k], rg))
        self._classes = classes
        return classes


def _canonical_signs(sig) -> tuple:
    if sig[0] < 0:
        return tuple(-s for s in sig)
    return tuple(sig)


def _half(x, y) -> int:
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _ray_cmp(u, w) -> int:
    hu, hw = _half(*u), _half(*w)
    if hu != hw:
        return hu - hw
    cross = u[0] * w[1] - u[1] * w[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _sorted_rays(rays, exact: bool):
    if exact:
        return sorted(rays, key=cmp_to_key(lambda a, b: _ray_cmp(a[0], b[0])))
    return sorted(rays, key=lambda r: math.atan2(r[0][1], r[0][0]) % (2 * math.pi))


def _plane_basis(graph: DualGraph, p: int, q: int):
    pts = graph.config.vectors()
    if graph.exact:
        basis, free = linalg.exact_nullspace([pts[p], pts[q]], len(pts[p]))
        return basis, lambda v: [v[f] for f in free]
    basis = linalg.float_nullspace([pts[p], pts[q]], len(pts[p]), graph.tol)
    return basis, lambda v: list(np.asarray(basis) @ np.asarray(v, dtype=float))


def _plane_arrangement(graph: DualGraph, p: int, q: int) -> PlaneArrangement:
    pts = graph.config.vectors()
    n = graph.n
    others = [x for x in range(n) if x != p and x != q]
    basis, coords = _plane_basis(graph, p, q)
    vsigns = graph.vertex_signs()
    faces: Counter = Counter()
    vcount = 0
    for vid, vert in enumerate(graph.vertices):
        inc = vert.incident_points
        if p not in inc or q not in inc:
            continue
        vcount += 1
        c = coords(vert.hyperplane)
        drop = max(range(3), key=lambda i: abs(c[i]))
        u, w = [basis[i] for i in range(3) if i != drop]
        through = [x for x in inc if x != p and x != q]
        ab = {x: (linalg.dot(u, pts[x]), linalg.dot(w, pts[x])) for x in through}
        rays = []
        for x in through:
            a, b = ab[x]
            rays.append(((-b, a), x))
            rays.append(((b, -a), x))
        rays = _sorted_rays(rays, graph.exact)
        row = vsigns[vid]
        base = [row[x] for x in others]
        pos = {x: k for k, x in enumerate(others)}
        for k in range(len(rays)):
            r1, r2 = rays[k][0], rays[(k + 1) % len(rays)][0]
            d = (r1[0] + r2[0], r1[1] + r2[1])
            sig = list(base)
            for x in through:
                a, b = ab[x]
                s = linalg.sign(d[0] * a + d[1] * b, 0.0)
                if s == 0:
                    raise IdentityViolation(f"sector direction at vertex {inc} lies on a line")
                sig[pos[x]] = s
            faces[_canonical_signs(sig)] += 1
    ecount = sum(len(graph.lines[tuple(sorted((p, q, r)))].edges) for r in others)
    arr = PlaneArrangement((p, q), vcount, ecount, dict(faces))
    if arr.euler != 1:
        raise IdentityViolation(f"plane {(p, q)}: V - E + F = {arr.euler}")
    return arr


def plane_pair_arrangement(graph: DualGraph, p: int, q: int) -> dict:
    arr = graph.plane(p, q)
    return {"V": arr.vertex_count, "E": arr.edge_count, "F": arr.face_count,
            "face_sizes": dict(sorted(arr.histogram.items()))}


def _line_params(graph_exact: bool, pts, triple, tol):
    rows = [pts[i] for i in triple]
    if graph_exact:
        basis, free = linalg.exact_nullspace(rows, len(rows[0]))
        A, B = basis

        def param(h):
            alpha, beta = Fraction(h[free[0]]), Fraction(h[free[1]])
            return None if beta == 0 else alpha / beta

        def vector(t):
            if t is None:
                return tuple(linalg.primitive(A))
            return tuple(linalg.primitive([t * a + b for a, b in zip(A, B)]))
        return param, vector
    basis = linalg.float_nullspace(rows, len(rows[0]), tol)
    A, B = basis[0], basis[1]

    def param(h):
        return math.atan2(float(np.dot(B, h)), float(np.dot(A, h))) % math.pi

    def vector(theta):
        return tuple(float(x) for x in math.cos(theta) * A + math.sin(theta) * B)
    return param, vector


def _sort_key(exact: bool):
    if exact:
        return lambda t: (t is None, t if t is not None else 0)
    return lambda t: t


def _interior_params(params: list, exact: bool) -> list:
    """A parameter strictly inside each cyclic edge (k, k+1)."""
    m = len(params)
    out = []
    if exact:
        for k in range(m):
            a, b = params[k], params[(k + 1) % m]
            if m == 1:
                out.append(Fraction(0) if a is None else a + 1)
            elif k == m - 1:
                out.append(b - 1 if a is None else a + 1)
            elif b is None:
                out.append(a + 1)
            else:
                out.append((a + b) / 2)
        return out
    for k in range(m):
        a, b = params[k], params[(k + 1) % m]
        if m == 1:
            out.append((a + math.pi / 2) % math.pi)
        elif k == m - 1:
            out.append(((a + b + math.pi) / 2) % math.pi)
        else:
            out.append((a + b) / 2)
    return out


def build_graph(config: PointConfig, workers: int = 1) -> DualGraph:
    """Vertices, dual lines and cyclic edges of the configuration's dual graph."""
    if config.dim != 4:
        raise ValueError("the dual graph is defined for configurations in P^4")
    if config.n < 5:
        raise ValueError("at least five points are needed")
    if rank(config.vectors(), config.tol) < 5:
        raise GeneralPositionViolation("configuration does not span P^4")
    table = hyperplane_table(config, workers)
    vertices = [GraphVertex(tuple(h), inc) for inc, h in table.items()]
    on_line = defaultdict(list)
    for vid, v in enumerate(vertices):
        for triple in combinations(v.incident_points, 3):
            on_line[triple].append(vid)
    pts = config.vectors()
    lines, edges = {}, []
    key = _sort_key(config.exact)
    for triple in combinations(range(config.n), 3):
        vids = on_line.get(triple, [])
        if not vids:
            raise IdentityViolation(f"dual line {triple} carries no vertex")
        param, vector = _line_params(config.exact, pts, triple, config.tol)
        ranked = sorted(((param(vertices[v].hyperplane), v) for v in vids), key=lambda pv: key(pv[0]))
        params = [t for t, _ in ranked]
        order = [v for _, v in ranked]
        line = DualLine(triple, order, params)
        for k, t in enumerate(_interior_params(params, config.exact)):
            line.edges.append(len(edges))
            edges.append(Edge(triple, order[k], order[(k + 1) % len(order)], vector(t), k))
        lines[triple] = line
    return DualGraph(config, vertices, lines, edges)


def stats_and_bounds(graph: DualGraph) -> GraphStats:
    """Counts, the exact identities, and the bad-edge bounds."""
    n = graph.n
    vh = Counter(v.multiplicity for v in graph.vertices)
    E = len(graph.edges)
    planes = graph.all_planes()
    fh: Counter = Counter()
    for arr in planes:
        fh.update(arr.histogram)
    F = sum(fh.values())
    classes = graph.classify()
    bad = sum(c.bad for c in classes)
    sbad = sum(c.slightly_bad for c in classes)
    v4 = vh.get(4, 0)
    ids = {
        "plane_euler": all(arr.euler == 1 for arr in planes),
        "global_euler": sum(i * (i - 1) // 2 * c for i, c in vh.items()) - 3 * E + F == n * (n - 1) // 2,
        "edge_face": 6 * E == sum(j * c for j, c in fh.items()),
        "vertex_edge": 2 * E == sum(i * (i - 1) * (i - 2) // 3 * c for i, c in vh.items()),
        "v4": 12 * v4 == 3 * n * (n - 1) + 2 * sum((j - 3) * c for j, c in fh.items() if j >= 4)
        + sum(i * (i - 1) * (i - 5) * c for i, c in vh.items() if i >= 6),
    }
    failed = [k for k, ok in ids.items() if not ok]
    if failed:
        raise IdentityViolation(f"counting identities fail: {failed}")
    return GraphStats(n, dict(sorted(vh.items())), E, dict(sorted(fh.items())), F, v4 / n ** 3,
                      bad, sbad, ids, 48 * v4, 1872 * v4)


def classify_edges(graph: DualGraph) -> list[EdgeClass]:
    return graph.classify()


def rather_good_segments(graph: DualGraph, triple: tuple) -> list[Segment]:
    """Maximal runs of consecutive rather-good edges along a dual line."""
    line = graph.lines[tuple(sorted(triple))]
    classes = graph.classify()
    flags = [classes[e].rather_good for e in line.edges]
    m = len(flags)
    if all(flags):
        return [Segment(line.triple, list(line.edges), line.vertices + [line.vertices[0]], cyclic=True)]
    start = flags.index(False)
    out = []
    run: list[int] = []
    for step in range(1, m + 1):
        k = (start + step) % m
        if flags[k]:
            run.append(k)
        elif run:
            out.append(run)
            run = []
    if run:
        out.append(run)
    segs = []
    for run in out:
        verts = [line.vertices[run[0]]] + [line.vertices[(k + 1) % m] for k in run]
        segs.append(Segment(line.triple, [line.edges[k] for k in run], verts))
    return segs


def edge_segment(graph: DualGraph, edge_ids: list) -> Segment:
    """A segment from consecutive edges of one line, rather good or not."""
    e0 = graph.edges[edge_ids[0]]
    verts = [e0.start] + [graph.edges[e].end for e in edge_ids]
    return Segment(e0.triple, list(edge_ids), verts)


# -- grids --------------------------------------------------------------------------

def _labels_for(graph: DualGraph, triple: tuple, pairs: list, needed: set) -> dict | None:
    """Grid labels from the ordered extra points (s_{-k}, t_k) of each vertex."""
    p0, q0, r0 = triple
    lab = {("p", 0): p0, ("q", 0): q0, ("r", 0): r0}
    for k, (s, t) in enumerate(pairs):
        lab[("s", -k)] = s
        lab[("t", k)] = t
    s0, t0, sm1, t1 = lab[("s", 0)], lab[("t", 0)], lab[("s", -1)], lab[("t", 1)]
    # the two points of each family at index +-1 complete a hyperplane with
    # the other two index-0 points and a vertex pair of index sum -+1
    lookups = {
        ("r", -1): (p0, q0, s0, t1), ("r", 1): (p0, q0, sm1, t0),
        ("q", -1): (p0, r0, s0, t1), ("q", 1): (p0, r0, sm1, t0),
        ("p", -1): (q0, r0, s0, t1), ("p", 1): (q0, r0, sm1, t0),
    }
    for label, four in lookups.items():
        if label not in needed:
            continue
        x = graph.fifth(*four)
        if x is None:
            return None
        lab[label] = x
    return {k: v for k, v in lab.items() if k in needed}


ELEVEN_SEGMENT = [("p", -1), ("p", 0), ("p", 1), ("q", -1), ("q", 0), ("r", 0), ("r", 1),
                  ("s", -1), ("s", 0), ("t", 0), ("t", 1)]


def _needed(m: int) -> set:
    if m == 1:
        return set(ELEVEN_SEGMENT)
    out = {(f, i) for f in "pqr" for i in (-1, 0, 1)}
    out |= {("s", -k) for k in range(m + 1)} | {("t", k) for k in range(m + 1)}
    return out


def _assignments(graph: DualGraph, triple: tuple, segment: Segment):
    """Candidate (s, t) orderings along the segment's vertices.

    Consecutive vertices {s_{-k}, t_k} and {s_{-k-1}, t_{k+1}} share the
    hyperplane through p_0, q_0, r_{-1}, s_{-k}, t_{k+1}, which pins down the
    order after the first two vertices.
    """
    p0, q0 = triple[0], triple[1]
    extras = [tuple(sorted(set(graph.vertices[v].incident_points) - set(triple))) for v in segment.vertices]
    if any(len(x) != 2 for x in extras):
        return
    for first in (extras[0], extras[0][::-1]):
        for second in (extras[1], extras[1][::-1]):
            pairs = [first, second]
            r_minus = graph.fifth(p0, q0, first[0], second[1])
            for k in range(2, len(extras)):
                nxt = None
                for cand in (extras[k], extras[k][::-1]):
                    if r_minus is not None and graph.fifth(p0, q0, pairs[-1][0], cand[1]) == r_minus:
                        nxt = cand
                        break
                if nxt is None:
                    break
                pairs.append(nxt)
            if len(pairs) == len(extras):
                yield pairs


def grid_extract(graph: DualGraph, segment: Segment) -> GridLabels:
    """Label the grid of points around a segment and verify it.

    One edge gives the eleven points p_{-1..1}, q_{-1,0}, r_{0,1}, s_{-1,0},
    t_{0,1}; a segment of m >= 2 edges gives p, q, r in {-1, 0, 1},
    s in {-m..0} and t in {0..m}.
    """
    if segment.length < 1:
        raise StructureViolation("segment has no edges")
    if segment.cyclic:
        segment = Segment(segment.triple, segment.edges[:-1] or segment.edges,
                          segment.vertices[:-1] if segment.length > 1 else segment.vertices)
    pts = graph.config.points
    needed = _needed(segment.length)
    last_error = "no consistent labeling of the segment vertices"
    for triple in permutations(segment.triple):
        for pairs in _assignments(graph, triple, segment):
            lab = _labels_for(graph, triple, pairs, needed)
            if lab is None:
                last_error = "a neighbouring hyperplane does not carry exactly five points"
                continue
            grid = GridLabels({k: pts[i] for k, i in lab.items()}, dict(lab), graph.tol)
            try:
                grid.check_structure()
            except StructureViolation as exc:
                last_error = str(exc)
                continue
            return grid
    raise StructureViolation(f"segment on {segment.triple}: {last_error}")
