from fractions import Fraction

import pytest

from twopt.algebra import ONE, ZSeries
from twopt.engine import check_dimension, check_string_divisor, check_swap_symmetry, check_unitarity, two_point
from twopt.errors import ValidationError
from twopt.projective import pn_column
from twopt.wps import (_jdegree_factors, closed_form_as_table, wps_basis_data, wps_closed_form, wps_column,
                       wps_target, wps_two_point)

F = Fraction
half = F(1, 2)


def test_p1_data():
    s = wps_basis_data((1, 1))
    assert s.c == (0, 0) and s.sigma == (1, 1) and s.r == (0, 1) and s.m == (1, 1)
    assert s.hat == (1, 0)


def test_p12_data():
    s = wps_basis_data((1, 2))
    assert s.c == (0, 0, half)
    assert s.sigma == (1, 1, half)
    assert s.r == (0, 1, 0)
    assert s.m == (2, 2, 2)
    assert s.hat == (1, 0, 2)
    assert s.sector_dim == {0: 1, half: 0}


def test_p111_is_untwisted():
    s = wps_basis_data((1, 1, 1))
    assert s.sectors == (0,) and s.hat == (2, 1, 0) and set(s.pairing) == {1}


@pytest.mark.parametrize("w", [(1, 2), (1, 1, 2), (1, 2, 3), (2, 3)])
def test_gram_duality(w):
    s = wps_basis_data(w)
    for j in range(s.N):
        for k in range(s.N):
            val = sum(s.dual[j][i] * s.gram[i][k] for i in range(s.N))
            assert val == (1 if j == k else 0)
    assert all(s.hat[s.hat[j]] == j for j in range(s.N))
    assert all(s.sigma)


def test_non_coprime_weights_rejected():
    with pytest.raises(ValidationError):
        wps_basis_data((2, 4))


def test_unit_column_at_degree_zero():
    s = wps_basis_data((1, 2))
    e, comps = wps_column(s, 0, 0)
    assert e == 0 and comps[0] == ZSeries.const(ONE) and not comps[1] and not comps[2]


def test_p11_column_matches_projective():
    _, comps = wps_column(wps_basis_data((1, 1)), 0, 1)
    assert comps == pn_column(1, 0, 1)


def test_half_degree_factors_and_sector():
    s = wps_basis_data((1, 2))
    assert sorted(_jdegree_factors(s, half)) == [(1, half), (2, 1)]
    e, comps = wps_column(s, 2, half)
    assert e == 0
    assert not comps[0] and not comps[1] and comps[2]


def test_unknown_sector_rejected():
    with pytest.raises(ValidationError):
        wps_column(wps_basis_data((1, 2)), 0, F(1, 3))


def test_p11_table_equals_p1():
    from twopt.projective import pn_two_point
    assert wps_two_point(wps_basis_data((1, 1)), 1).values == pn_two_point(1, 1).values


@pytest.mark.parametrize("w, bound", [((1, 2), 2), ((1, 1, 2), 2), ((1, 2, 3), 1), ((2, 3), 1)])
def test_engine_checks(w, bound):
    spec = wps_basis_data(w)
    t = wps_target(spec)
    A, R, inv = two_point(t, bound)
    for rep in (check_unitarity(A, t), check_string_divisor(inv, A, t), check_swap_symmetry(inv),
                check_dimension(inv, t)):
        assert rep.ok, rep.line()


@pytest.mark.parametrize("w, bound", [((1, 1), 2), ((1, 2), 2), ((1, 1, 2), 2), ((1, 2, 3), 1)])
def test_route_equivalence(w, bound):
    spec = wps_basis_data(w)
    inv = wps_two_point(spec, bound)
    closed = closed_form_as_table(spec, inv.degrees)
    assert closed.values == inv.values


def test_closed_form_keys_are_display_keys():
    spec = wps_basis_data((1, 2))
    out = wps_closed_form(spec, F(1))
    for (rj, rk, cj, ck) in out:
        assert cj in spec.sectors and ck in spec.sectors
        assert 0 <= rj <= spec.sector_dim[cj] and 0 <= rk <= spec.sector_dim[ck]


def test_closed_form_needs_positive_degree():
    with pytest.raises(ValueError):
        wps_closed_form(wps_basis_data((1, 2)), 0)


def test_twisted_sector_entries_exist():
    inv = wps_two_point(wps_basis_data((1, 2)), 1)
    assert any(k[0] == 2 or k[2] == 2 for k in inv.values)
