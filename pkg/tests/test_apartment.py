from fractions import Fraction

from hypothesis import given, strategies as st

from building_lab.apartment import (ApartmentPoint, ExtendedLevel, Facet, ZERO_PLUS, ball_complex,
                                    boundary_chain, chain_boundary, f_star, facet_of, standard_chamber)
from building_lab.roots import Root


def test_extended_levels():
    assert ExtendedLevel.of(0) < ZERO_PLUS < ExtendedLevel.of(1) < ExtendedLevel.inf()
    assert (ZERO_PLUS + 2).ceil() == 3
    assert ExtendedLevel.of(Fraction(1, 2)).ceil() == 1


def test_f_star_at_origin_and_chamber():
    o = ApartmentPoint.origin(2)
    assert f_star(o, Root(0, 1)) == ZERO_PLUS
    assert f_star(o, None) == ZERO_PLUS
    C = standard_chamber(2)
    assert f_star(C, Root(0, 1)) == ExtendedLevel.of(0)
    assert f_star(C, Root(1, 0)) == ExtendedLevel.of(1)


def test_ball_complex_sizes():
    assert [(len(ball_complex(m).vertices), len(ball_complex(m).by_dimension(1))) for m in range(3)] == \
        [(1, 0), (3, 2), (5, 4)]
    b = ball_complex(1, 3)
    assert (len(b.vertices), len(b.by_dimension(1)), len(b.by_dimension(2))) == (13, 24, 12)


def test_boundary_of_boundary_vanishes():
    for sigma in ball_complex(1, 3).by_dimension(2):
        chain = dict((f, s) for s, f in boundary_chain(sigma))
        assert all(v == 0 for v in chain_boundary(chain).values())


def test_facet_faces_are_closed():
    C = standard_chamber(3)
    faces = C.faces()
    assert len(faces) == 7
    assert all(f.contains(f.barycenter()) for f in faces)


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6), min_size=3, max_size=3))
def test_facet_of_contains_point(xs):
    x = ApartmentPoint(tuple(xs))
    f = facet_of(x)
    assert isinstance(f, Facet)
    assert f.contains(x)
