from fractions import Fraction

import pytest

from twopt.algebra import ONE, ZSeries
from twopt.projective import pn_column, pn_column_class, pn_target, pn_two_point
from twopt.wps import wps_basis_data, wps_two_point


def s(d):
    return ZSeries({e: Fraction(c) for e, c in d.items()})


def test_leading_column():
    assert pn_column(1, 0, 0) == [ZSeries.const(ONE), ZSeries()]


@pytest.mark.parametrize("j, expected", [
    (0, [s({-2: 1}), s({-3: -2})]),
    (1, [s({-1: 1}), s({-2: -1})]),
])
def test_p1_degree_one_columns(j, expected):
    assert pn_column(1, j, 1) == expected


def test_bad_column_index():
    with pytest.raises(ValueError):
        pn_column(2, 3, 1)


@pytest.mark.parametrize("n, d", [(1, 2), (2, 1), (2, 3), (3, 2)])
def test_derivative_relation(n, d):
    # column j+1 = (P + d z) * column j, the algebraic shadow of z d/dt
    from twopt.algebra import CohClass
    P = CohClass.generator(0, 0, n)
    shift = ZSeries({0: P, 1: CohClass.scalar(d, 0, n)})
    for j in range(n):
        assert pn_column_class(n, j + 1, d) == shift * pn_column_class(n, j, d)


def test_p2_line_through_two_points():
    assert pn_two_point(2, 1).get(2, 0, 2, 0, Fraction(1)) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_specializes_from_weighted(n):
    ours = pn_two_point(n, 2)
    weighted = wps_two_point(wps_basis_data((1,) * (n + 1)), 2)
    assert ours.values == weighted.values


def test_pairing_data():
    t = pn_target(3)
    assert t.hat == (3, 2, 1, 0)
    assert t.basis == ("1", "P", "P^2", "P^3")
