from fractions import Fraction

import pytest

from twopt.oracle import DescendantOracle, check_against_oracle, reconstruct, two_point_oracle
from twopt.projective import pn_two_point


@pytest.mark.parametrize("r, key, value", [
    (1, (1, 0, 1, 0, 1), 1),
    (1, (0, 1, 0, 1, 1), 2),
    (1, (1, 1, 0, 0, 1), 1),
    (1, (1, 0, 0, 1, 1), -1),
    (2, (2, 0, 2, 0, 1), 1),
])
def test_two_point_examples(r, key, value):
    assert two_point_oracle(r, *key) == value


def test_one_point_p1():
    assert DescendantOracle(1).one_point(0, 1, 1) == -2
    assert DescendantOracle(1).one_point(1, 0, 1) == 1


def test_kontsevich_numbers():
    # classical counts of rational plane curves: 1, 1, 12, 620
    orc = DescendantOracle(2, d_max=3)
    assert [orc.kontsevich(d) for d in range(1, 5)] == [1, 1, 12, 620]


def test_bounds_enforced():
    with pytest.raises(ValueError):
        DescendantOracle(1, d_max=2).two_point(1, 0, 1, 0, 3)
    with pytest.raises(ValueError):
        reconstruct(1, 4, 3, 3)
    with pytest.raises(ValueError):
        DescendantOracle(3)


@pytest.mark.parametrize("r, d_max, n_max, k_max", [(1, 3, 4, 6), (2, 2, 4, 5)])
def test_schedules_agree(r, d_max, n_max, k_max):
    a = reconstruct(r, d_max, n_max, k_max, schedule=0)
    b = reconstruct(r, d_max, n_max, k_max, schedule=1)
    assert a == b and len(a) > 50


@pytest.mark.parametrize("r", [1, 2])
def test_string_dilaton_divisor_sweep(r):
    orc = DescendantOracle(r, d_max=2)
    table = reconstruct(r, 2, 3, 5)
    for (d, ins), v in table.items():
        ins = list(ins)
        # string
        lhs = orc.correlator(ins + [(0, 0)], d)
        rhs = sum((orc.correlator(ins[:j] + [(k - 1, a)] + ins[j + 1:], d)
                   for j, (k, a) in enumerate(ins) if k > 0), Fraction(0))
        assert lhs == rhs
        # dilaton
        assert orc.correlator(ins + [(1, 0)], d) == (len(ins) - 2) * v
        # divisor
        rhs = d * v + sum((orc.correlator(ins[:j] + [(k - 1, a + 1)] + ins[j + 1:], d)
                           for j, (k, a) in enumerate(ins) if k > 0 and a < r), Fraction(0))
        assert orc.correlator(ins + [(0, 1)], d) == rhs


@pytest.mark.parametrize("r, d_max", [(1, 3), (2, 2)])
def test_engine_equals_oracle(r, d_max):
    rep = check_against_oracle(pn_two_point(r, d_max), r, d_max)
    assert rep.ok, rep.line()
    assert rep.checked > 20 and rep.skipped == 0
