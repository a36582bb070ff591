import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from building_lab.apartment import ApartmentPoint
from building_lab.depth import (apartment_distance_bfs, central_normalize, commutator, conjugate_into_torus,
                                diag, fixed_vertices, hair_stability, identity, inv, mul,
                                random_upper_unipotent, sd_of, singular_depth, solve_commutator,
                                solve_commutator_lower, torus_distance, verify_fixpoint_bounds)
from building_lab.errors import DomainError, InsufficientPrecisionError, IrregularElementError
from building_lab.glmodel import filtration_spec, random_element, torus_spec, vertices_in_ball
from building_lab.padic import INF
from building_lab.oracles import tree_fixed_count

O2 = ApartmentPoint.origin(2)


def test_singular_depth_examples():
    r = singular_depth(diag([1, 3]), 0, 2)
    assert (r.sd, r.regular, r.r_split) == (1, True, 1)
    r = singular_depth(diag([1, 2]), 0, 3)
    assert (r.sd, r.r_split) == (0, 0)
    r = singular_depth(diag([1, 1]), 0, 2)
    assert r.sd == INF and not r.regular
    assert singular_depth(diag([1, 3]), 2, 2).r_split == 2
    r = singular_depth(diag([1, 3, 5]), 0, 2)
    assert (r.sd, r.d_gamma, r.scope) == (2, 0, "split")


@given(st.sampled_from([2, 3]), st.lists(st.integers(1, 200), min_size=2, max_size=3),
       st.integers(-3, 3), st.integers(1, 50))
def test_sd_is_central_invariant(p, xs, v, u):
    assume(u % p)
    z = Fraction(p) ** v * u
    a = singular_depth(diag(xs), 0, p)
    b = singular_depth(diag([x * z for x in xs]), 0, p)
    assert a.sd_alpha == b.sd_alpha


def test_fixed_vertices_examples():
    assert len(fixed_vertices(diag([1, 3]), 2, 2)) == 8
    assert len(fixed_vertices(diag([1, 9]), 2, 2)) == 10
    assert len(fixed_vertices(diag([2, 2]), 2, 2)) == 10
    assert central_normalize(diag([2, 6]), 2) == diag([1, 3])
    with pytest.raises(InsufficientPrecisionError):
        fixed_vertices(diag([1, 3]), 2, 2, m=3)


@pytest.mark.parametrize("g", [(1, 3), (3, 5), (1, 9), (1, 5)])
@pytest.mark.parametrize("R", [1, 2, 3])
def test_fixed_vertices_match_submodule_oracle(g, R):
    assert len(fixed_vertices(diag(g), R, 2)) == tree_fixed_count(g, 2, R)


@pytest.mark.parametrize("g", [(1, 3), (3, 5), (1, 9)])
def test_fixed_set_bounds_and_convexity(g):
    gamma = diag(g)
    sd = sd_of(gamma, 2)
    fs = fixed_vertices(gamma, 3, 2)
    fixed = set(fs.vertices)
    assert all(b and c for b, c in verify_fixpoint_bounds(gamma, 3, 2).values())
    for v in fs.vertices:
        d = torus_distance(v)
        assert d <= sd
        if d > 0:
            closer = [w for w in v.neighbours() if torus_distance(w) == d - 1]
            assert closer and all(w in fixed for w in closer)


def test_torus_distance_matches_graph_distance():
    for v in vertices_in_ball(3, 2, 2):
        assert torus_distance(v) == apartment_distance_bfs(v)
    dists = sorted({torus_distance(v) for v in vertices_in_ball(2, 2, 2)})
    assert dists == [0, 1, 2]


def test_hair_stability():
    assert hair_stability(diag([1, 3]), diag([1, 9]), 3, 2)
    assert hair_stability(diag([1, 3]), diag([1, 1]), 3, 2, strict=False)
    assert hair_stability(diag([1, 4, 7]), diag([1, 28, 1]), 2, 3)
    with pytest.raises(DomainError):
        hair_stability(diag([1, 3]), diag([1, 3]), 2, 2)


def test_commutator_rank_one_closed_form():
    a, b, x = Fraction(1), Fraction(3), Fraction(5)
    v = [[1, x * (1 - a / b)], [0, 1]]
    u = solve_commutator(v, diag([a, b]))
    assert u[0][1] == x
    assert solve_commutator(identity(2), diag([1, 3])) == identity(2)
    with pytest.raises(IrregularElementError):
        solve_commutator([[1, 1], [0, 1]], diag([1, 1]))


@given(st.integers(0, 10 ** 6), st.booleans())
def test_commutator_roundtrip_gl3(seed, lower):
    rng = random.Random(seed)
    gamma = diag([1, 3, 5])
    v = random_upper_unipotent(3, 2, 10, rng, lower)
    u = (solve_commutator_lower if lower else solve_commutator)(v, gamma)
    assert commutator(u, gamma) == v


def test_conjugation_trivial_cases():
    w = conjugate_into_torus(diag([1, 3]), diag([1, 3]), O2, 1, 2, 8)
    assert w.g == identity(2) and w.t == diag([1, 3])
    w = conjugate_into_torus(diag([1, 15]), diag([1, 3]), O2, 1, 2, 8)
    assert w.g == identity(2) and w.t == diag([1, 15])
    with pytest.raises(DomainError):
        conjugate_into_torus(diag([1, 3]), diag([1, 3]), O2, 0, 2, 8)


@given(st.integers(0, 10 ** 6))
def test_conjugation_roundtrip(seed):
    rng = random.Random(seed)
    gamma = diag([1, 3])
    u = random_element(filtration_spec(O2, 1, 2), rng, 8)
    y = mul(u, gamma, inv(u))
    w = conjugate_into_torus(y, gamma, O2, 1, 2, 8)
    assert filtration_spec(O2, w.floor, 2).contains_rational(mul(w.g, w.t, inv(w.g), inv(y)))
    assert torus_spec(2, 2, 2).contains_rational(mul(w.t, inv(gamma)))
