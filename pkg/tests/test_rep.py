import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from building_lab.apartment import ApartmentPoint, standard_chamber
from building_lab.errors import DomainError, InsufficientPrecisionError
from building_lab.fields import TorusCharacter, depth_one_character
from building_lab.glmodel import (K0_spec, filtration_spec, parahoric_spec, principal_congruence,
                                  random_element)
from building_lab.oracles import orbit_count_on_p1, principal_congruence_gens, trivial_fixed_trace
from building_lab.rep import chi_K, invariants_dim, principal_series

O2 = ApartmentPoint.origin(2)
C2 = standard_chamber(2)


def test_model_dimensions():
    V = principal_series(2, 2, None, 2)
    assert V.dim == 6 and V.level == 0
    assert invariants_dim(O2, 0, V) == 3
    assert V.idempotent(filtration_spec(O2, 1, 2)).rank() == 6
    assert V.idempotent(K0_spec(2, 2)).rank() == 1
    assert V.idempotent(parahoric_spec(C2, 2)).rank() == 2


def test_depth_one_model():
    chi = TorusCharacter.first_coordinate(2, 3, depth_one_character(3))
    W = principal_series(2, 3, chi, 2)
    assert W.field.degree == 2 and W.level == 1
    assert W.idempotent(filtration_spec(O2, 0, 3)).rank() == 0
    assert W.idempotent(filtration_spec(O2, 1, 3)).rank() == 12
    with pytest.raises(DomainError):
        principal_series(2, 3, chi, 1)


def test_model_level_too_small():
    V = principal_series(2, 2, None, 2)
    with pytest.raises(InsufficientPrecisionError):
        V.idempotent(filtration_spec(O2, 2, 2))


def test_idempotents_absorb_smaller_groups():
    V = principal_series(2, 2, None, 3)
    e0, e1 = V.idempotent(filtration_spec(O2, 0, 2)), V.idempotent(filtration_spec(O2, 1, 2))
    eC = V.idempotent(filtration_spec(C2, 0, 2))
    for big, small in ((e0, e1), (eC, e1), (eC, e0)):
        assert big.is_idempotent() and small.is_idempotent()
        assert big @ small == big == small @ big


def test_central_elements_act_by_scalars():
    V = principal_series(2, 2, None, 2)
    assert V.act([[2, 0], [0, 2]]) == V.identity()
    chi = TorusCharacter(2, TorusCharacter.trivial(2, 2).omegas, (3, 3))
    W = principal_series(2, 2, chi, 2)
    assert W.act([[2, 0], [0, 2]]) == W.identity().scale(Fraction(9))


def test_non_compact_idempotent_is_a_conjugate():
    V = principal_series(2, 2, None, 6)
    for x, k in (((2, 0), 4), ((1, 0), 3)):
        t = [[Fraction(1, 2 ** x[0]), 0], [0, 1]]
        ti = [[Fraction(2 ** x[0]), 0], [0, 1]]
        ek = V.idempotent(principal_congruence(2, 2, k))
        a = V.idempotent(filtration_spec(ApartmentPoint(x), 0, 2)) @ ek
        b = V.act(t) @ V.idempotent(filtration_spec(O2, 0, 2)) @ V.act(ti) @ ek
        assert a == b


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_trivial_invariants_match_orbit_oracle(p, m):
    V = principal_series(2, p, None, m)
    for k in range(1, m + 1):
        assert V.idempotent(principal_congruence(2, p, k)).rank() == orbit_count_on_p1(
            principal_congruence_gens(p, k), p, k)


def test_character_values():
    V = principal_series(2, 2, None, 5)
    vals = [chi_K([[1, 0], [0, 3]], filtration_spec(O2, s, 2), V)[0] for s in range(4)]
    assert vals == [trivial_fixed_trace((1, 3), 2, s) for s in range(4)] == [3, 4, 4, 4]
    assert chi_K([[1, 0], [0, 1]], filtration_spec(O2, 1, 2), V) == (6,)
    assert chi_K([[2, 0], [0, 6]], filtration_spec(O2, 1, 2), V) == (4,)


def test_non_compact_trace_window():
    V = principal_series(2, 2, None, 3)
    with pytest.raises(InsufficientPrecisionError):
        V.check_trace_window([[8, 0], [0, 1]], filtration_spec(O2, 1, 2))


@given(st.integers(0, 10 ** 6))
def test_trace_cyclicity_and_class_function(seed):
    rng = random.Random(seed)
    V = principal_series(2, 2, None, 3)
    K = filtration_spec(O2, 1, 2)
    e = V.idempotent(K)
    g = random_element(K0_spec(2, 2), rng, 6)
    G = V.act(g)
    assert (e @ G).trace() == (G @ e).trace()
    k = random_element(K, rng, 6)
    gamma = [[1, 0], [0, 3]]
    from building_lab.depth import inv, mul
    assert chi_K(mul(k, gamma, inv(k)), K, V) == chi_K(gamma, K, V)


@given(st.integers(0, 10 ** 6))
def test_action_is_multiplicative(seed):
    rng = random.Random(seed)
    V = principal_series(2, 3, TorusCharacter.first_coordinate(2, 3, depth_one_character(3)), 2)
    K0 = K0_spec(2, 3)
    g, h = random_element(K0, rng, 4), random_element(K0, rng, 4)
    gh = [[sum(g[i][k] * h[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert V.act(gh) == V.act(g) @ V.act(h)
