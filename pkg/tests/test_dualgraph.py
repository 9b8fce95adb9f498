from math import comb

import pytest

from ordsolid.dualgraph import build_graph, classify_edges, edge_segment, grid_extract, plane_pair_arrangement, \
    rather_good_segments, stats_and_bounds
from ordsolid.errors import GeneralPositionViolation, StructureViolation
from ordsolid.geom import PointConfig
from ordsolid.structure import random_config

from oracles import generic_arrangement


@pytest.fixture(scope="module")
def random8():
    return build_graph(random_config(8, seed=0))


def test_random_graph_counts(random8):
    g = random8
    assert len(g.vertices) == comb(8, 4) == 70
    assert all(v.multiplicity == 4 for v in g.vertices)
    assert all(len(line.vertices) == 5 for line in g.lines.values())
    assert len(g.edges) == 5 * comb(8, 3)


def test_generic_plane_arrangement(random8):
    for p, q in ((0, 1), (2, 7)):
        arr = plane_pair_arrangement(random8, p, q)
        want = generic_arrangement(6)
        assert (arr["V"], arr["E"], arr["F"]) == (want["V"], want["E"], want["F"])
        assert arr["V"] - arr["E"] + arr["F"] == 1


def test_random_graph_all_bad(random8):
    s = stats_and_bounds(random8)
    assert s.bad_edges == len(random8.edges)
    assert s.v_histogram == {4: 70}
    assert all(s.identities.values())


def test_non_spanning_rejected():
    pts = [(1, t, t * t, t ** 3, 0) for t in range(6)]
    with pytest.raises(GeneralPositionViolation):
        build_graph(PointConfig(tuple(pts)))


def test_vertex_line_incidence(exact_graphs):
    g = exact_graphs[7]
    for vid, v in enumerate(g.vertices):
        lines = [t for t, line in g.lines.items() if vid in line.vertices]
        assert len(lines) == comb(v.multiplicity, 3)
        assert all(set(t) <= set(v.incident_points) for t in lines)


def test_edges_are_cyclic(exact_graphs):
    g = exact_graphs[8]
    for line in g.lines.values():
        m = len(line.vertices)
        assert len(line.edges) == m
        for k, e in enumerate(line.edges):
            edge = g.edges[e]
            assert edge.start == line.vertices[k] and edge.end == line.vertices[(k + 1) % m]


@pytest.mark.parametrize("n", [6, 7, 8, 9, 10, 12])
def test_identities_on_elliptic(exact_graphs, n):
    s = stats_and_bounds(exact_graphs[n])
    assert all(s.identities.values())
    assert s.bounds_hold


def test_classification_implication(exact_graphs):
    for g in exact_graphs.values():
        for c in classify_edges(g):
            assert not c.rather_good or c.good
            assert c.bad == (not c.good)


def test_rather_good_segments_and_grid(float20):
    cfg, g = float20
    lengths = []
    for t in g.lines:
        for seg in rather_good_segments(g, t):
            lengths.append(seg.length)
            if seg.length >= 2 and not seg.cyclic:
                grid = grid_extract(g, seg)
                m = seg.length
                assert len(grid.points) == 9 + 2 * (m + 1)
                assert set(grid.index_of.values()) <= set(range(cfg.n))
    assert max(lengths) >= 2


def test_single_good_edge_gives_eleven(exact_graphs):
    g = exact_graphs[12]
    classes = g.classify()
    found = 0
    for k, c in enumerate(classes):
        if not c.good:
            continue
        try:
            grid = grid_extract(g, edge_segment(g, [k]))
        except StructureViolation:
            continue
        assert len(grid.points) == 11
        found += 1
        if found == 3:
            break
    assert found == 3


def test_bad_edge_grid_rejected(random8):
    with pytest.raises(StructureViolation):
        grid_extract(random8, edge_segment(random8, [0]))
