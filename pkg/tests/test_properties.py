"""Property checks over randomly drawn inputs."""
import random
from fractions import Fraction

from hypothesis import HealthCheck, given, settings, strategies as st

from ordsolid.elliptic import O, add, count_ordinary_group, fifth_point, group_sum, negate, phi, scalar_mul, \
    tate_torsion_curve
from ordsolid.geom import cohyperplanar, normalize, rank
from ordsolid.quadrics import ELEVEN, GridLabels, grid_quadrics, initial_eleven, quadrics_through, same_span
from ordsolid.structure import HYPERPLANE, QUADRICS, detect_structure, generate_nrc_config, perturb, random_config
from ordsolid.verify import random_curve_points

from oracles import ordinary_group_bruteforce

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
vectors = st.lists(fractions, min_size=5, max_size=5).filter(any)
nonzero = fractions.filter(lambda x: x != 0)
quick = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@quick
@given(vectors, nonzero)
def test_normalize_scale_invariant(v, s):
    p = normalize(v)
    assert normalize([s * x for x in v]) == p
    assert normalize(p.coords) == p


@quick
@given(st.lists(vectors, min_size=1, max_size=6), st.randoms(use_true_random=False), st.lists(nonzero, min_size=6, max_size=6))
def test_rank_permutation_and_scaling(rows, rnd, scales):
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    scaled = [[s * x for x in r] for r, s in zip(shuffled, scales)]
    assert rank(rows) == rank(shuffled) == rank(scaled)


@st.composite
def curve_and_points(draw, count=3):
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    c, pool = random_curve_points(rng)
    picks = [draw(st.sampled_from(pool)) for _ in range(count)]
    return c, picks


@quick
@given(curve_and_points())
def test_group_law_axioms(data):
    c, (P, Q, R) = data
    assert add(c, P, Q) == add(c, Q, P)
    assert add(c, add(c, P, Q), R) == add(c, P, add(c, Q, R))
    assert add(c, P, negate(c, P)) == O


@quick
@given(curve_and_points(count=4))
def test_fifth_point_is_cohyperplanar(data):
    c, four = data
    if len(set(four)) < 4 or rank([phi(c, X) for X in four]) < 4:
        return
    T = fifth_point(c, *four)
    assert group_sum(c, four + [T]) == O
    assert cohyperplanar([phi(c, X) for X in four + [T]])


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 40))
def test_group_count_matches_enumeration(n):
    assert count_ordinary_group(n) == ordinary_group_bruteforce(n)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 50).map(lambda k: 2 * k + 1))
def test_odd_group_bound(n):
    assert 6 * count_ordinary_group(n) <= n * (n - 1) * (n - 2)


@quick
@given(st.integers(0, 10 ** 6), st.integers(0, 15))
def test_generic_quadric_dimensions(seed, k):
    pts = random_config(max(k, 1), seed=seed).points[:k]
    space = quadrics_through(list(pts), dim=4)
    assert space.dimension == 15 - k
    assert all(q(p) == 0 for q in space.basis for p in pts)


@quick
@given(st.integers(0, 10 ** 6), st.integers(1, 9), st.integers(0, 5))
def test_quadric_dimension_monotone(seed, k, extra):
    c, G = tate_torsion_curve(10, 2)
    pts = [phi(c, scalar_mul(c, i, G)) for i in range(1, 11)]
    rng = random.Random(seed)
    rng.shuffle(pts)
    a = quadrics_through(pts[:k])
    b = quadrics_through(pts[:k + extra])
    assert b.dimension <= a.dimension


def test_grid_family_symmetry(grids):
    # swapping p with q and r with s keeps the eleven-point pattern
    swap = {"p": "q", "q": "p", "r": "s", "s": "r", "t": "t"}
    for _, grid in grids[:10]:
        eleven = initial_eleven(grid)
        mapping = {(swap[f], i): (f, i) for f, idxs in ELEVEN.items() for i in idxs}
        swapped = eleven.relabel(mapping)
        assert isinstance(swapped, GridLabels)
        assert same_span(grid_quadrics(swapped, construct=False), grid_quadrics(eleven, construct=False))


@settings(max_examples=5, deadline=None)
@given(st.integers(7, 11))
def test_concentrated_inputs_stay_concentrated(n):
    assert detect_structure(generate_nrc_config(n)).case == HYPERPLANE


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000), st.integers(1, 3))
def test_perturb_deterministic(seed, k):
    cfg = generate_nrc_config(8)
    assert perturb(cfg, k, seed) == perturb(cfg, k, seed)


@settings(max_examples=3, deadline=None)
@given(seed=st.integers(0, 100))
def test_quadric_verdicts_contain_non_outliers(seed, exact_configs):
    _, cfg = exact_configs[12]
    bad = perturb(cfg, 1, seed)
    v = detect_structure(bad)
    if v.case == QUADRICS:
        assert v.certificate.dimension == 5
        assert all(v.certificate.contains_point(p) for i, p in enumerate(bad.points) if i not in v.outliers)


def test_fraction_exactness():
    c, G = tate_torsion_curve(9, Fraction(5, 2))
    assert scalar_mul(c, 9, G) == O
