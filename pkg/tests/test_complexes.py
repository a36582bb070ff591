import pytest
from hypothesis import given, settings, strategies as st

from building_lab.apartment import ApartmentPoint, Facet, ball_complex
from building_lab.complexes import (apartment_complex, ball_vertices, building_ball, cancellation_check,
                                    chain_complex, check_face_closed, closed_facet, euler_idempotent,
                                    euler_report, facet_idempotent, level_check, permutation_sign,
                                    required_level, tau_sigma)
from building_lab.errors import DomainError
from building_lab.fields import TorusCharacter, depth_one_character
from building_lab.glmodel import filtration_spec
from building_lab.oracles import tree_ball_count
from building_lab.rep import chi_K, principal_series


def test_building_ball_sizes():
    assert [len(building_ball(R, 2, 2)) for R in range(3)] == [1, 7, 19]
    assert len(building_ball(2, 2, 3)) == 33
    for p, R in ((2, 2), (2, 3), (3, 2)):
        assert len(ball_vertices(building_ball(R, 2, p))) == tree_ball_count(p, R)


def test_face_closure_check():
    facets = [f for f in building_ball(1, 2, 2) if f.dimension == 1]
    with pytest.raises(DomainError):
        check_face_closed(facets)
    check_face_closed(closed_facet(Facet(((0, 0), (1, 0))), 2))


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([1, 2, 0]) == 1


def _model(B, e, p, chi=None):
    chi = chi or TorusCharacter.trivial(2, p)
    return principal_series(2, p, chi, max(required_level(B, e, p), chi.conductor_exponent, 1))


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("e", [0, 1])
def test_resolution_on_building_balls(p, e):
    for R in range(3):
        B = building_ball(R, 2, p)
        V = _model(B, e, p)
        c = chain_complex(B, e, V)
        assert c.dd_zero and c.exact and c.h0_matches and c.containment_ok
        assert euler_report(B, e, V).ok


def test_resolution_with_depth_one_character():
    chi = TorusCharacter.first_coordinate(2, 2, depth_one_character(2))
    B = building_ball(2, 2, 2)
    V = _model(B, 1, 2, chi)
    c = chain_complex(B, 1, V)
    assert c.exact and c.h0_matches
    assert c.homology[0] == euler_idempotent(B, 1, V).rank()


def test_apartment_ball_and_single_facets():
    for facets in (apartment_complex(ball_complex(2).facets, 2), closed_facet(Facet(((0, 0), (1, 0))), 2)):
        V = _model(facets, 0, 2)
        c = chain_complex(facets, 0, V)
        assert c.exact and c.h0_matches


def test_invariants_shrink_on_larger_facets():
    B = building_ball(2, 2, 2)
    V = _model(B, 0, 2)
    ranks = {f.vertices: facet_idempotent(f, 0, V).rank() for f in B}
    for f in B:
        if f.dimension == 1:
            for v in f.vertices:
                assert ranks[f.vertices] <= ranks[(v,)]


def test_euler_idempotent_and_trace_sum_at_identity():
    B = building_ball(2, 2, 2)
    V = _model(B, 0, 2)
    c = chain_complex(B, 0, V)
    assert tau_sigma([[1, 0], [0, 1]], B, 0, V) == (c.homology[0],)
    origin = [f for f in B if f.dimension == 0 and f.vertices[0].distance_from_origin() == 0]
    K = filtration_spec(ApartmentPoint.origin(2), 0, 2)
    assert tau_sigma([[1, 0], [0, 3]], origin, 0, V) == chi_K([[1, 0], [0, 3]], K, V)


def test_trace_sum_stabilizes():
    taus = []
    for R in range(4):
        B = building_ball(R, 2, 2)
        V = principal_series(2, 2, None, max(required_level(B, 0, 2), 3))
        taus.append(tau_sigma([[1, 0], [0, 3]], B, 0, V)[0])
    assert taus == [3, 4, 4, 4]


def test_trace_sum_needs_a_stable_complex():
    B = building_ball(1, 2, 2)
    V = _model(B, 0, 2)
    with pytest.raises(DomainError):
        tau_sigma([[2, 0], [0, 1]], B, 0, V)


@pytest.mark.parametrize("r,e", [(1, 0), (2, 0), (2, 1)])
def test_cancellation_and_level(r, e):
    B = building_ball(2, 2, 2)
    V = principal_series(2, 2, None, max(required_level(B, e, 2), r + 1))
    assert cancellation_check(r, e, B, V)
    assert level_check(V, e, r, B)


def test_level_check_refuses_small_complexes():
    B = building_ball(0, 2, 2)
    V = principal_series(2, 2, None, 3)
    with pytest.raises(DomainError):
        level_check(V, 0, 2, B)
    with pytest.raises(DomainError):
        cancellation_check(0, 1, B, V)


@settings(max_examples=10)
@given(st.integers(0, 2), st.sampled_from([0, 1]))
def test_euler_idempotent_is_idempotent(R, e):
    B = building_ball(R, 2, 2)
    V = _model(B, e, 2)
    u = euler_idempotent(B, e, V)
    assert u @ u == u
