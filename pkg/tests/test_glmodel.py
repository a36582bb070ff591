import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from building_lab.apartment import ApartmentPoint, standard_chamber
from building_lab.errors import DomainError, ResourceGuardError
from building_lab.glmodel import (K0_spec, PadicMatrix, VertexLattice, act_vertex, conjugation_bounded,
                                  contracted_parabolic, double_coset_count, filtration_spec, flag_space,
                                  gl_order, haar_weight, index_closed_form, iwahori_factor,
                                  parahoric_spec, principal_congruence, quotient_cosets, random_element,
                                  root_group_spec, torus_spec, vertices_in_ball)
from building_lab.roots import Root

O2 = ApartmentPoint.origin(2)
C2 = standard_chamber(2)


def test_filtration_exponents():
    assert filtration_spec(O2, 0, 2).exponent_matrix() == ((1, 1), (1, 1))
    assert filtration_spec(O2, 1, 2).exponent_matrix() == ((2, 2), (2, 2))
    assert filtration_spec(C2, 0, 2).exponent_matrix() == ((1, 0), (1, 1))
    assert parahoric_spec(C2, 2).exponent_matrix() == ((0, 0), (1, 0))
    assert principal_congruence(2, 2, 2).exponent_matrix() == ((2, 2), (2, 2))
    assert torus_spec(2, 2, 1).exponent_matrix()[0][0] == 1


def test_indices_and_haar():
    K0 = K0_spec(2, 2)
    U0, U1 = filtration_spec(O2, 0, 2), filtration_spec(O2, 1, 2)
    assert index_closed_form(K0, U0) == 6
    assert index_closed_form(U0, U1) == 16
    a = Root(0, 1)
    assert index_closed_form(root_group_spec(2, 2, a, 0), root_group_spec(2, 2, a, 2)) == 4
    assert haar_weight(U1) == Fraction(1, 96)


def test_quotient_cosets_count():
    count, reps = quotient_cosets(K0_spec(2, 2), filtration_spec(O2, 0, 2))
    assert count == len(reps) == 6


def test_double_cosets():
    assert [double_coset_count(2, 2, e)[0] for e in range(4)] == [3, 6, 12, 24]
    assert [double_coset_count(2, 3, e)[0] for e in range(2)] == [4, 12]
    assert double_coset_count(3, 2, 0)[0] == 21
    with pytest.raises(DomainError):
        double_coset_count(2, 2, -1)


def test_guard(monkeypatch):
    monkeypatch.setenv("BUILDING_LAB_GUARD", "10")
    with pytest.raises(ResourceGuardError):
        double_coset_count(2, 3, 3)


def test_group_orders():
    assert gl_order(2, 2, 1) == 6
    assert gl_order(2, 2, 2) == 96
    assert gl_order(3, 2, 1) == 168


def test_flag_space_reduce_is_canonical():
    fs = flag_space(2, 2, 2)
    assert len(fs) == 6
    for rep in fs.reps:
        assert fs.reduce(rep)[0] == rep


def test_vertex_lattices():
    o = VertexLattice.origin(2, 2)
    assert len(o.neighbours()) == 3
    v = VertexLattice.from_apartment((2, 0), 2)
    assert v.distance_from_origin() == 2
    assert v.apartment_point().coords == (2, 0)
    assert [len(vertices_in_ball(R, 2, 2)) for R in range(4)] == [1, 4, 10, 22]
    assert len(vertices_in_ball(2, 2, 3)) == 17
    assert [len(vertices_in_ball(R, 3, 2)) for R in range(3)] == [1, 15, 113]


def test_contracted_parabolic():
    P = contracted_parabolic([[2, 0], [0, 1]], 2)
    assert P.contains_root(Root(0, 1))
    assert not P.contains_root(Root(1, 0))
    assert conjugation_bounded([[2, 0], [0, 1]], [[1, 1], [0, 1]], 2)
    assert not conjugation_bounded([[2, 0], [0, 1]], [[1, 0], [1, 1]], 2)


@given(st.integers(0, 3), st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_random_elements_and_filtration(e, seed, p):
    rng = random.Random(seed)
    sp = filtration_spec(C2, e, p)
    deeper = filtration_spec(C2, e + 1, p)
    assert deeper.contained_in(sp)
    g, h = random_element(sp, rng, 8), random_element(sp, rng, 8)
    assert sp.contains_rational(g)
    prod = [[sum(g[i][k] * h[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert sp.contains_rational(prod)


@given(st.integers(0, 2), st.integers(0, 10 ** 6))
def test_iwahori_factorization_recovers_element(e, seed):
    sp = filtration_spec(C2, e, 2)
    g = random_element(sp, random.Random(seed), 8)
    lo, h, up = iwahori_factor(PadicMatrix.from_rationals(2, g, 12), sp)
    prod = (lo @ h @ up).lift()
    diff = [[prod[i][j] - g[i][j] for j in range(2)] for i in range(2)]
    from building_lab.padic import vp
    assert all(vp(x, 2) >= 8 for r in diff for x in r)


@given(st.integers(0, 10 ** 6))
def test_vertex_action_is_an_action(seed):
    rng = random.Random(seed)
    K0 = K0_spec(2, 2)
    g, h = random_element(K0, rng, 6), random_element(K0, rng, 6)
    gh = [[sum(g[i][k] * h[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    for v in vertices_in_ball(2, 2, 2):
        assert act_vertex(gh, v) == act_vertex(g, act_vertex(h, v))
        assert act_vertex(g, v).distance_from_origin() == v.distance_from_origin()
