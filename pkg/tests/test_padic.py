from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from building_lab.errors import InsufficientPrecisionError
from building_lab.padic import (INF, PadicMatrix, PadicScalar, iwasawa_rational, mat_inverse_rational,
                                mat_mul_rational, vp)

primes = st.sampled_from([2, 3, 5])
nonzero = st.fractions(max_denominator=200).filter(lambda x: x != 0)


def test_valuations():
    assert vp(Fraction(12, 5), 2) == 2
    assert vp(Fraction(5, 12), 2) == -2
    assert vp(0, 3) == INF


def test_scalar_residue_and_lift():
    a = PadicScalar.from_rational(2, Fraction(12, 5), 10)
    assert a.val() == 2
    assert a.residue(3) == 4
    assert vp(a.lift() - Fraction(12, 5), 2) >= 12


def test_inexact_zero_is_undecidable():
    a = PadicScalar.from_rational(2, Fraction(1, 3), 8)
    z = a - a
    assert z.ge_threshold3(5) is True
    assert z.ge_threshold3(20) is None
    with pytest.raises(InsufficientPrecisionError):
        z.ge_threshold(20)


@given(primes, nonzero, nonzero, st.integers(4, 12))
def test_field_operations_match_rationals(p, x, y, prec):
    a = PadicScalar.from_rational(p, x, prec)
    b = PadicScalar.from_rational(p, y, prec)
    for got, exact in ((a + b, x + y), (a * b, x * y), (a / b, x / y), (a - b, x - y)):
        if exact == 0:
            continue
        assert vp(got.lift() - exact, p) >= got.absolute_precision


def test_matrix_inverse_and_determinant():
    g = [[Fraction(2), Fraction(1)], [Fraction(4), Fraction(3)]]
    M = PadicMatrix.from_rationals(2, g, 12)
    assert M.det_valuation() == 1
    prod = M @ M.inverse()
    I = PadicMatrix.identity(2, 2)
    diff = (prod - I).lift()
    assert all(vp(x, 2) >= 8 for r in diff for x in r)


@given(primes, st.lists(st.integers(-20, 20), min_size=4, max_size=4))
def test_iwasawa_factorization(p, xs):
    g = [[Fraction(xs[0]), Fraction(xs[1])], [Fraction(xs[2]), Fraction(xs[3])]]
    assume(xs[0] * xs[3] - xs[1] * xs[2] != 0)
    b, k = iwasawa_rational(g, p)
    assert b[1][0] == 0
    assert mat_mul_rational(b, k) == g
    assert all(vp(x, p) >= 0 for r in k for x in r)
    det = k[0][0] * k[1][1] - k[0][1] * k[1][0]
    assert vp(det, p) == 0
    assert mat_mul_rational(k, mat_inverse_rational(k)) == [[1, 0], [0, 1]]
