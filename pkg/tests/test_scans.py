from fractions import Fraction

import pytest

from building_lab.errors import IrregularElementError, ResourceGuardError
from building_lab.fields import TorusCharacter, depth_one_character
from building_lab.oracles import tree_ball_count
from building_lab.rep import principal_series
from building_lab.scans import character_scan, growth_table, stable_from, torus_slice


def test_growth_counts():
    rows = growth_table(2, 2, 2)
    assert [r.count for r in rows] == [3, 6, 12]
    assert [r.dim_VKe for r in rows] == [3, 6, 12]
    assert all(r.within_bound for r in rows)
    assert rows[1].mu == Fraction(1, 96)
    assert [r.count for r in growth_table(2, 3, 1, with_dims=False)] == [4, 12]


def test_growth_orbit_counts():
    rows = growth_table(2, 2, 3, with_dims=False)
    assert rows[2].orbit_count == 10
    assert [r.orbit_count for r in rows] == [tree_ball_count(2, r.e) for r in rows]
    chi = TorusCharacter.first_coordinate(2, 3, depth_one_character(3))
    rows = growth_table(2, 3, 2, chi)
    assert rows[0].orbit_count is None and rows[0].dim_VKe == 0
    assert [r.orbit_count for r in rows[1:]] == [1, 5]


def test_growth_guard():
    with pytest.raises(ResourceGuardError):
        growth_table(2, 2, 50, with_dims=False)


def test_torus_slice_size():
    import random
    hs = torus_slice(2, 2, 1, 4, 1000, random.Random(0))
    assert len(hs) == 16 and all(h[0] % 4 == 1 for h in hs)


def test_stable_from():
    assert stable_from({0: 3, 1: 4, 2: 4}) == 1
    assert stable_from({0: 4, 1: 4}) == 0


def test_compact_scan():
    V = principal_series(2, 2, None, 5)
    rep = character_scan([1, 3], 0, V, range(0, 4), samples=32, seed=1, conj_samples=3)
    assert rep.compact and rep.constant
    assert rep.r_split == 1 and rep.stable_from == 1
    assert rep.s_values[1] == rep.s_values[3] == (4,)


def test_central_scaling_of_scan():
    chi = TorusCharacter(2, TorusCharacter.trivial(2, 2).omegas, (3, 3))
    W = principal_series(2, 2, chi, 5)
    V = principal_series(2, 2, None, 5)
    a = character_scan([1, 3], 0, V, range(0, 4), samples=8, conj_samples=1)
    b = character_scan([2, 6], 0, W, range(0, 4), samples=8, conj_samples=1)
    assert {s: v[0] * 9 for s, v in a.s_values.items()} == {s: v[0] for s, v in b.s_values.items()}


def test_non_compact_scan_stabilizes():
    V = principal_series(2, 2, None, 6)
    rep = character_scan([2, 1], 0, V, range(0, 5))
    assert not rep.compact and rep.constant
    assert set(rep.s_values.values()) == {(Fraction(3, 2),)}


def test_irregular_scan():
    V = principal_series(2, 2, None, 3)
    with pytest.raises(IrregularElementError):
        character_scan([1, 1], 0, V)
