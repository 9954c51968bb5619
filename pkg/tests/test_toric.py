import json
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twopt.algebra import ONE, ZERO, ZSeries
from twopt.engine import check_dimension, check_string_divisor, check_swap_symmetry, check_unitarity
from twopt.errors import ConditionError, DegenerateLambdaError, LimitError, NotCertifiedError, ValidationError
from twopt.projective import pn_two_point
from twopt.toric import (builtin_X1, builtin_X2, builtin_fans, column_compositions, condition_scan,
                         equivariant_columns, fixed_points, i_term_order, integrate, jx_criterion,
                         limit_class_degrees, load_toric, localize, make_toric, nonequivariant_limit,
                         semifano_builtin, toric_two_point, x2_f_coefficients, x2_operator_prefactors)

F = Fraction


def pn_fan(n, lam=None):
    rays = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)] + [(-1,) * n]
    cones = [c for c in combinations(range(1, n + 2), n)]
    return make_toric(f"P{n}", rays, cones, [[1] * (n + 1)], [{"degrees": [1] * (n + 1), "coords": [1]}], lam)


def as_scalar(table):
    return {(a, k, b, l, F(beta[0])): v for (a, k, b, l, beta), v in table.items()}


# --------------------------------------------------------------------------
# fixed points


def test_p1_fixed_point():
    spec = pn_fan(1, [[2, 7], [1, -3]])
    fp = fixed_points(spec)[(0,)]
    assert fp.x == (7,) and fp.euler == 7 - 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pn_euler_classes(n):
    spec = pn_fan(n)
    lam = spec.lambdas[0]
    for S, fp in fixed_points(spec).items():
        (s,) = set(range(n + 1)) - set(S)
        want = ONE
        for i in S:
            want *= lam[s] - lam[i]
        assert fp.euler == want


def test_p1xp1_fixed_points():
    spec = load_toric("P1xP1")
    lam = spec.lambdas[0]
    fps = fixed_points(spec)
    assert len(fps) == 4
    for S, fp in fps.items():
        diffs = {(fp.x[0] - lam[0]) * (fp.x[1] - lam[1]), (fp.x[0] - lam[2]) * (fp.x[1] - lam[1]),
                 (fp.x[0] - lam[0]) * (fp.x[1] - lam[3]), (fp.x[0] - lam[2]) * (fp.x[1] - lam[3])}
        assert fp.euler in diffs


@pytest.mark.parametrize("name", ["P1", "P2", "P3", "P1xP1", "P1xP2", "X1", "X2"])
def test_fixed_point_consistency_and_partition_of_unity(name):
    spec = {"X1": builtin_X1, "X2": builtin_X2}.get(name, lambda: load_toric(name))()
    for which in (0, 1):
        for S, fp in fixed_points(spec, which).items():
            prod = ONE
            for j in S:
                prod *= fp.restriction[j]
                assert fp.partial[j] * fp.restriction[j] == fp.euler
            assert prod == fp.euler
        # sum of fixed-point residues of any top-degree monomial is independent of lambda
        for e in spec.classes:
            if sum(e) == spec.n:
                assert integrate(spec, e, which) == integrate(spec, e, 1 - which)
            else:
                assert integrate(spec, e, which) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_residue_identity_pn(n):
    spec = pn_fan(n)
    for l in range(n + 1):
        assert integrate(spec, (l,)) == (1 if l == n else 0)


def test_localize_unit():
    spec = load_toric("P2")
    coords = localize(spec, (0,))
    assert all(c == 1 / fixed_points(spec)[S].euler for S, c in coords.items())


# --------------------------------------------------------------------------
# input validation


def test_validation_errors():
    good = dict(rays=[[1], [-1]], cones=[[1], [2]], divisor_matrix=[[1, 1]],
                mori=[{"degrees": [1, 1], "coords": [1]}])
    make_toric("ok", **good)
    with pytest.raises(ValidationError, match="linear relation"):
        make_toric("bad", **{**good, "divisor_matrix": [[1, 2]], "mori": [{"degrees": [1, 2], "coords": [1]}]})
    with pytest.raises(ValidationError, match="disagree"):
        make_toric("bad", **{**good, "mori": [{"degrees": [1, 0], "coords": [1]}]})
    with pytest.raises(ValidationError, match="distinct"):
        make_toric("bad", **good, lambdas=[[1, 1], [1, 2]])
    with pytest.raises(ValidationError, match="smooth"):
        make_toric("bad", rays=[[1, 0], [1, 2], [-1, -1]], cones=[[1, 2], [2, 3], [1, 3]],
                   divisor_matrix=[[1, 1, 2]], mori=[{"degrees": [1, 1, 2], "coords": [1]}])


def test_degenerate_lambda():
    # on X1, R_3 restricted to the cone {1,3,4} is lambda_2 + lambda_5 - lambda_3
    with pytest.raises(DegenerateLambdaError):
        builtin_X1([[1, 2, 5, 7, 3], [11, 13, 17, 19, 23]])


def test_load_from_file(tmp_path):
    data = {"rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[1, 2], [2, 3], [1, 3]],
            "divisor_matrix": [[1, 1, 1]], "mori": [{"degrees": [1, 1, 1], "coords": [1]}],
            "lambda": ["1/2", "3", "-2"]}
    p = tmp_path / "plane.json"
    p.write_text(json.dumps(data))
    spec = load_toric(p)
    assert spec.name == "plane" and spec.lambdas[0] == (F(1, 2), F(3), F(-2))
    assert spec.lambdas[1] != spec.lambdas[0]
    del data["mori"]
    p.write_text(json.dumps(data))
    with pytest.raises(ValidationError, match="mori"):
        load_toric(p)


def test_bundled_fans():
    assert set(builtin_fans()) >= {"P1", "P2", "P3", "P1xP1", "P1xP2"}


# --------------------------------------------------------------------------
# condition scan


@pytest.mark.parametrize("name", ["P1", "P2", "P3", "P1xP1", "P1xP2"])
def test_fano_low_dimension_passes(name):
    spec = load_toric(name)
    for S in spec.cones:
        assert condition_scan(spec, [j + 1 for j in S], 4).ok
    for T in combinations(range(1, spec.N + 1), spec.n):
        assert condition_scan(spec, T, 3).ok


def test_semi_fano_patterns():
    x1, x2 = builtin_X1(), builtin_X2()
    assert condition_scan(x1, (3, 1), 4).ok and condition_scan(x1, (4, 1), 4).ok
    assert condition_scan(x2, (3, 1), 4).ok and condition_scan(x2, (4, 1), 4).ok
    rep = condition_scan(x2, (5, 1), 4)
    assert not rep.ok
    assert rep.failures[0].startswith("degree 1,0")
    assert all(beta[1] == 0 for beta, _, _, ok in rep.per_degree if not ok)


def test_i_term_profiles():
    x1, x2 = builtin_X1(), builtin_X2()
    for d1 in range(4):
        for d2 in range(4):
            if d1 or d2:
                assert i_term_order(x1, (d1, d2)) == (3 * d2 if d2 >= d1 else 3 * d2 + 2)
                assert i_term_order(x2, (d1, d2)) == (3 * d2 if d2 >= 2 * d1 else 3 * d2 + 1)


def test_jx():
    assert jx_criterion(load_toric("P2"), 3)["jx"] == 3
    assert jx_criterion(load_toric("P1xP1"), 3)["satisfied"]
    with pytest.raises(ValidationError):
        jx_criterion(builtin_X1(), 3)


# --------------------------------------------------------------------------
# columns and tables


def test_degree_zero_column_is_coordinate_vector():
    spec = load_toric("P1xP1")
    for i, S in enumerate(spec.cones):
        col = equivariant_columns(spec, S, (0, 0), 4)
        assert all(c.agrees(ZSeries.const(ONE if t == i else ZERO)) for t, c in enumerate(col))
        assert all(not set(c.coeffs) - {0} for c in col)


def test_p1_degree_one_column():
    spec = pn_fan(1, [[2, 7], [1, -3]])
    fps = fixed_points(spec)
    col = equivariant_columns(spec, (0,), (1,), 5)
    for c, S in zip(col, spec.cones):
        a2 = fps[S].restriction[1]
        # (R_1 + z)/((R_1 + z)(R_2 + z)) = 1/(R_2 + z)
        want = ZSeries({-1 - k: (-a2) ** k for k in range(6)}, 5) * (1 / fps[S].euler)
        assert c.agrees(want)


def test_degree_zero_table_empty():
    assert len(toric_two_point(load_toric("P1"), 0).table) == 0


def test_p1_limit_degree_one():
    lim = nonequivariant_limit(load_toric("P1"), 1)
    assert as_scalar(lim) == {
        (1, 0, 1, 0, 1): 1, (1, 1, 0, 0, 1): 1, (0, 0, 1, 1, 1): 1,
        (1, 0, 0, 1, 1): -1, (0, 1, 1, 0, 1): -1, (0, 1, 0, 1, 1): 2,
        (0, 2, 0, 0, 1): -2, (0, 0, 0, 2, 1): -2,
    }


@pytest.mark.parametrize("n", [1, 2, 3])
def test_limit_equals_projective(n):
    assert as_scalar(nonequivariant_limit(load_toric(f"P{n}"), 2)) == \
        {k: v for k, v in pn_two_point(n, 2).values.items()}


def test_p1xp1_checks():
    spec = load_toric("P1xP1")
    run = toric_two_point(spec, 2)
    assert {(1, 0), (0, 1), (1, 1)} <= set(run.table.degrees)
    assert check_unitarity(run.A, run.target).ok
    assert check_string_divisor(run.table, run.A, run.target).ok
    lim = nonequivariant_limit(spec, 2)
    assert check_swap_symmetry(lim).ok
    assert check_dimension(lim, class_degree=limit_class_degrees(spec), dim=2, c1=spec.c1).ok


def test_limit_disagreement_raises():
    spec = load_toric("P1")
    runs = [toric_two_point(spec, 1, None, w) for w in (0, 1)]
    key = next(iter(runs[1].table.values))
    runs[1].table.values[key] += 1
    with pytest.raises(LimitError):
        nonequivariant_limit(spec, 1, runs=runs)


@settings(max_examples=8, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=6, max_size=6, unique=True))
def test_limit_is_lambda_independent(vals):
    lam = [[F(v) for v in vals[:3]], [F(v, 7) for v in vals[3:]]]
    try:
        spec = pn_fan(2, lam)
    except DegenerateLambdaError:
        return
    assert as_scalar(nonequivariant_limit(spec, 1)) == pn_two_point(2, 1).values


# --------------------------------------------------------------------------
# semi-Fano builtins


def test_x1_pipeline():
    spec = builtin_X1()
    comps = column_compositions(spec, 2)
    assert len(comps) == 6 and all(condition_scan(spec, [i + 1 for i in T], 2).ok for T in comps)
    runs = [toric_two_point(spec, 2, None, w) for w in (0, 1)]
    for r in runs:
        assert check_unitarity(r.A, r.target).ok
        assert check_string_divisor(r.table, r.A, r.target).ok
    lim = nonequivariant_limit(spec, 2, runs=runs)
    assert check_swap_symmetry(lim).ok
    assert check_dimension(lim, class_degree=limit_class_degrees(spec), dim=3, c1=spec.c1).ok
    # the negative section curve (1,0) behaves like a line with normal bundle O(-1) + O(-1)
    assert lim.get(0, 1, 0, 1, (1, 0)) == 2 and lim.get(0, 2, 0, 0, (1, 0)) == -2


def test_x2_series():
    assert x2_f_coefficients(3) == {1: 1, 2: F(3, 2), 3: F(10, 3)}
    pre = x2_operator_prefactors(2)
    assert pre["dT1"] == {(0, 0): 1, (1, 0): 2, (2, 0): 6}
    assert pre["dT2"] == {(0, 0): 1, (0, 1): -1, (1, 1): -3}


def test_x2_gated():
    out = semifano_builtin("X2", 3)
    assert [r.passed for r in out["reports"]] == [True, True, False]
    assert all(r.ok for r in out["reports"])
    with pytest.raises(NotCertifiedError):
        semifano_builtin("X2", 1, extract=True)
    with pytest.raises(ValidationError):
        semifano_builtin("X3")


def test_composition_basis_needs_passing_compositions():
    spec = builtin_X2()
    # (5,1) never enters the basis because it fails the scan
    assert all(not {0, 4} <= set(T) for T in column_compositions(spec, 2))
    # the cone columns themselves reach positive powers of z, which the engine refuses
    from twopt.engine import build_s_adjoint
    from twopt.toric import _cone_columns, toric_target
    col = _cone_columns(spec, spec.cones, 1, 0)
    assert any(e > 0 for c in col(spec.cones.index((0, 2, 4)), (1, 0), 4) for e in c.coeffs)
    target = toric_target(spec, 0, 1)
    bad = type(target)(**{**target.__dict__, "column": col})
    with pytest.raises(ConditionError):
        build_s_adjoint(bad, 1, 4)
