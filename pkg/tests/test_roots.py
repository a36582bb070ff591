from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from building_lab.errors import DomainError, InvalidRankError
from building_lab.roots import Root, build_root_system, height, pairing, root_sum


def test_gl3_root_system():
    R = build_root_system(3)
    assert len(R.roots) == 6
    assert [str(a) for a in R.simple_roots] == ["e1-e2", "e2-e3"]
    assert R.hgt == 2
    assert R.rank == 2
    assert R.Q_exponent() == 3


def test_invalid_rank():
    with pytest.raises(InvalidRankError):
        build_root_system(1)


def test_height_positive_only():
    assert height(Root(0, 2)) == 2
    with pytest.raises(DomainError):
        height(Root(2, 0))


def test_root_sum():
    assert root_sum(Root(0, 1), Root(1, 2)) == Root(0, 2)
    assert root_sum(Root(0, 1), Root(1, 0)) is None
    assert root_sum(Root(0, 1), Root(0, 2)) is None


@given(st.integers(2, 5), st.data())
def test_pairing_is_antisymmetric(n, data):
    x = data.draw(st.lists(st.fractions(), min_size=n, max_size=n))
    for a in build_root_system(n).roots:
        assert pairing(x, a) == -pairing(x, -a)
        assert pairing(x, a) == sum(Fraction(c) * v for c, v in zip(x, a.vector(n)))
