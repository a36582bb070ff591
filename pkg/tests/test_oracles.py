import pytest

from building_lab.glmodel import double_coset_count, vertices_in_ball
from building_lab.oracles import (borel_orbits, double_coset_oracle, p1_count, p1_fixed_points,
                                  tree_ball_count, tree_ball_formula, tree_fixed_count)


def test_projective_line_counts():
    assert [p1_count(2, m) for m in (1, 2, 3)] == [3, 6, 12]
    assert [p1_count(3, m) for m in (1, 2)] == [4, 12]


def test_fixed_points_on_projective_line():
    assert p1_fixed_points((1, 3), 2, 2) == 4
    assert p1_fixed_points((1, 3), 2, 1) == 3
    assert p1_fixed_points((1, 1), 2, 3) == 12


def test_borel_orbits_small():
    assert borel_orbits(2, 2, 1) == 3
    assert borel_orbits(3, 2, 1) == 21


@pytest.mark.parametrize("n,p,e", [(2, 2, 2), (2, 3, 1), (3, 2, 0)])
def test_oracle_matches_library(n, p, e):
    assert double_coset_oracle(n, p, e) == double_coset_count(n, p, e)[0]


def test_tree_balls():
    for p, R in ((2, 0), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)):
        assert tree_ball_count(p, R) == tree_ball_formula(p, R) == len(vertices_in_ball(R, 2, p))


def test_tree_fixed_sets():
    assert tree_fixed_count((1, 3), 2, 2) == 8
    assert tree_fixed_count((1, 9), 2, 2) == 10
