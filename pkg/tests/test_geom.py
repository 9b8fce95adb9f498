from fractions import Fraction

import pytest

from ordsolid import linalg
from ordsolid.elliptic import Curve, CurvePoint, generate_cyclic_config
from ordsolid.errors import DegenerateSpan, GeneralPositionViolation, MixedDimensions, ZeroVector
from ordsolid.geom import PointConfig, cohyperplanar, general_position_report, hyperplane_table, \
    incident_indices, normalize, rank, span_hyperplane

from oracles import cofactor_hyperplane, det

E = [tuple(int(i == j) for j in range(5)) for i in range(5)]


def test_normalize_scaling_and_sign():
    assert normalize((2, 4, 6, 8, 10)).coords == (1, 2, 3, 4, 5)
    assert normalize((0, 0, 0, 0, -3)).coords == (0, 0, 0, 0, 1)
    assert normalize((Fraction(1, 2), Fraction(1, 3))).coords == (3, 2)
    with pytest.raises(ZeroVector):
        normalize((0, 0, 0, 0, 0))


def test_normalize_idempotent():
    p = normalize((-6, 4, Fraction(2, 3)))
    assert normalize(p.coords) == p


def test_rank_examples():
    assert rank(E) == 5
    assert rank([E[0], E[0]]) == 1
    with pytest.raises(MixedDimensions):
        rank([(1, 0), (1, 0, 0)])


def test_span_hyperplane_basis():
    assert span_hyperplane(E[:4]).coeffs == (0, 0, 0, 0, 1)
    with pytest.raises(DegenerateSpan):
        span_hyperplane([E[0], E[1], E[0]])


def test_span_matches_cofactors():
    pts = [(1, 2, 3, 4, 6), (1, 0, 1, 0, 0), (1, -1, 0, 1, 0), (1, 0, -1, 0, 0)]
    h = span_hyperplane(pts)
    assert h.coeffs == linalg.primitive(cofactor_hyperplane(pts))
    assert all(h.value(p) == 0 for p in pts)


def test_cohyperplanar():
    assert not cohyperplanar(E)
    assert cohyperplanar([E[0], E[1], E[2], E[3], E[0]])


def test_bareiss_det_against_oracle():
    rows = [[3, 1, 4, 1], [5, 9, 2, 6], [5, 3, 5, 8], [9, 7, 9, 3]]
    assert linalg.bareiss_det(rows) == det(rows)
    frac = [[Fraction(1, 2), 2], [Fraction(3, 7), -1]]
    assert linalg.bareiss_det(frac) == det(frac)


def test_exact_nullspace_identity_on_free_columns():
    basis, free = linalg.exact_nullspace([[1, 2, 3], [0, 1, 1]], 3)
    assert free == [2]
    assert basis[0][2] == 1
    assert all(linalg.dot(r, basis[0]) == 0 for r in ([1, 2, 3], [0, 1, 1]))


def test_general_position_basis_and_flat():
    rep = general_position_report(PointConfig(tuple(E)))
    assert rep.spans and rep.worst_coplanar_tuple is None and rep.ok
    flat = PointConfig(tuple((1, k, k * k, k ** 3 + 1, 0) for k in range(6)))
    assert not general_position_report(flat).spans


def test_general_position_finds_coplanar_quadruple():
    pts = E + [(1, 1, 0, 0, 0)]
    rep = general_position_report(PointConfig(tuple(pts)))
    assert rep.worst_coplanar_tuple is not None
    assert rank([pts[i] for i in rep.worst_coplanar_tuple]) < 4


def test_elliptic_order6_general_position():
    cfg = generate_cyclic_config(Curve(0, 1), CurvePoint(Fraction(2), Fraction(3)), 6).lifted
    rep = general_position_report(cfg)
    assert rep.spans and rep.worst_coplanar_tuple is None


def test_hyperplane_table_dedup_and_violation():
    cfg = PointConfig(tuple(E + [(1, 1, 1, 1, 1)]))
    table = hyperplane_table(cfg)
    assert len(table) == 15 and all(len(k) == 4 for k in table)
    for inc, h in table.items():
        assert incident_indices(h, cfg.vectors()) == inc
    with pytest.raises(GeneralPositionViolation):
        hyperplane_table(PointConfig(tuple(E + [(1, 1, 0, 0, 0)])))


def test_hyperplane_table_thread_independent(exact_configs):
    cfg = exact_configs[8][1]
    assert hyperplane_table(cfg, 1) == hyperplane_table(cfg, 2)


def test_repeated_point_rejected():
    with pytest.raises(ValueError):
        PointConfig(((1, 2, 3), (2, 4, 6)))
