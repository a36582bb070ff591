from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from building_lab.errors import DomainError
from building_lab.fields import (ResidueCharacter, TorusCharacter, cyclotomic_field, depth_one_character,
                                 euler_phi, primitive_root, quadratic_character)


def test_cyclotomic_fields():
    assert cyclotomic_field(1).degree == cyclotomic_field(2).degree == 1
    F = cyclotomic_field(3)
    assert F.degree == 2
    assert F.is_rational(F.from_int(2)) and not F.is_rational(F.root(1))
    assert euler_phi(12) == 4


def test_depth_one_characters():
    w = depth_one_character(2)
    assert (w.conductor_exponent, w.depth, w.order, w.N) == (2, 1, 2, 2)
    assert [w(u) for u in (1, 3, 5, 7)] == [0, 1, 0, 1]
    w = depth_one_character(3)
    assert (w.conductor_exponent, w.depth, w.order, w.N) == (2, 1, 3, 3)
    # trivial on 1 + 3Z_3, so the value depends on u mod 9 through the 1-units only
    assert w(4) != 0 and w(1) == 0


def test_quadratic_character_has_depth_zero():
    q = quadratic_character(3)
    assert (q.conductor_exponent, q.depth, q.order) == (1, 0, 2)
    assert [q(1), q(2)] == [0, 1]
    with pytest.raises(DomainError):
        quadratic_character(2)


def test_primitive_root():
    g = primitive_root(9, 3)
    assert len({pow(g, k, 9) for k in range(6)}) == 6


def test_torus_character_on_diagonal():
    chi = TorusCharacter.first_coordinate(2, 3, depth_one_character(3), z=(2, 1))
    assert chi.N == 3 and chi.depth == 1
    k, scale = chi.on_diagonal([Fraction(9 * 4), 1])
    assert scale == 4 and k == depth_one_character(3).exponent(4)
    with pytest.raises(DomainError):
        TorusCharacter(2, (ResidueCharacter.trivial(3),), (1,))


@given(st.sampled_from([2, 3]), st.integers(1, 10 ** 4), st.integers(1, 10 ** 4))
def test_characters_are_multiplicative(p, a, b):
    chars = [depth_one_character(p)] + ([quadratic_character(p)] if p > 2 else [])
    for w in chars:
        if a % p == 0 or b % p == 0:
            continue
        q = p ** w.d
        assert (w.exponent(a % q) + w.exponent(b % q)) % w.N == w.exponent(a * b % q)
