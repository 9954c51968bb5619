"""Target-independent two-point engine.

A target supplies the normalized columns ``A[:, j]`` of the adjoint
S-operator (``A(0) = Id``, everything else ``O(1/z)``) in a basis
``v_1..v_N`` with ``(v_hat(i), v_j) = m_i delta_ij``. From these

    S_ij = (m_j / m_i) A_{hat j, hat i}
    R    = (A(z1) S(z2) - Id) / (z1 + z2)          (Novikov-convolved)
    <v_hat(i) psi^k, v_j psi^l>_beta = m_i [z1^{-k-1} z2^{-l-1}] R_ij(beta)
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import (ONE, ZERO, BiZSeries, DegreeMonoid, NovikovTable, ZSeries,
                      divide_by_z1_plus_z2, rat, rat_str)
from .errors import ConditionError, DivisibilityError, ValidationError

Matrix = List[List[ZSeries]]


@dataclass(frozen=True)
class Divisor:
    """A divisor class: its coordinates, its cup-product matrix and its degree pairing."""

    name: str
    coords: Tuple[Fraction, ...]
    mult: Tuple[Tuple[Fraction, ...], ...]  # mult[i][j]: component along v_i of D . v_j
    degree: Callable


@dataclass(frozen=True)
class TargetSpec:
    name: str
    basis: Tuple[str, ...]
    pairing: Tuple[Fraction, ...]  # m_i = (v_hat(i), v_i)
    hat: Tuple[int, ...]
    monoid: DegreeMonoid
    column: Callable  # (j, degree, depth) -> list of N ZSeries
    column_degrees: Optional[Callable] = None  # (j, bound) -> degrees where column j may be nonzero
    unit: Optional[Tuple[Fraction, ...]] = None
    divisors: Tuple[Divisor, ...] = ()
    equivariant: bool = False
    dim: Optional[int] = None
    class_degree: Optional[Tuple[Fraction, ...]] = None
    c1: Optional[Callable] = None  # degree -> <c_1(TX), beta>
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.basis)
        if len(self.pairing) != n or len(self.hat) != n:
            raise ValidationError("basis, pairing and hat must have equal length")
        for j in range(n):
            if self.hat[self.hat[j]] != j:
                raise ValidationError(f"hat is not an involution at index {j}")
            if rat(self.pairing[self.hat[j]]) != rat(self.pairing[j]):
                raise ValidationError(f"pairing constant not hat-invariant at index {j}")
            if not self.pairing[j]:
                raise ValidationError(f"pairing constant m_{j} vanishes")

    @property
    def size(self):
        return len(self.basis)

    def degrees_for(self, j, bound):
        if self.column_degrees is not None:
            return list(self.column_degrees(j, bound))
        return self.monoid.enumerate(bound)

    def default_depth(self, bound):
        if self.c1 is None or self.dim is None:
            return None
        worst = max(self.c1(d) for d in self.monoid.enumerate(bound))
        return int(worst) + self.dim + 1


# --------------------------------------------------------------------------
# S* assembly


def _zero_matrix(n, depth=None) -> Matrix:
    return [[ZSeries({}, depth) for _ in range(n)] for _ in range(n)]


def identity_matrix(n) -> Matrix:
    return [[ZSeries.const(ONE) if i == j else ZSeries() for j in range(n)] for i in range(n)]


def _check_column(target, j, beta, col):
    n = target.size
    if len(col) != n:
        raise ValidationError(f"column {j} has {len(col)} entries, expected {n}")
    zero_degree = target.monoid.is_zero(beta)
    for i, s in enumerate(col):
        top = s.top
        if top is None:
            continue
        if top > 0:
            raise ConditionError(
                f"column {j} at degree {target.monoid.fmt(beta)} has z^{top} along {target.basis[i]}")
        if top == 0 and not zero_degree:
            raise ConditionError(
                f"column {j} at degree {target.monoid.fmt(beta)} has a z^0 term along "
                f"{target.basis[i]}: not of the form v + O(1/z)")
    if zero_degree:
        for i, s in enumerate(col):
            want = ONE if i == j else ZERO
            if set(s.coeffs) - {0} or s[0] != want:
                raise ValidationError(f"degree-0 part of column {j} is not the coordinate vector")


def build_s_adjoint(target: TargetSpec, bound, depth: Optional[int] = None,
                    workers: Optional[int] = None) -> NovikovTable:
    """Matrices ``A(beta)`` of the adjoint S-operator for all degrees up to ``bound``."""
    if depth is None:
        if target.equivariant:
            raise ValidationError("equivariant targets need an explicit depth")
    n = target.size
    tasks = [(j, beta) for j in range(n) for beta in target.degrees_for(j, bound)]

    def run(task):
        j, beta = task
        col = target.column(j, beta, depth)
        _check_column(target, j, beta, col)
        return col

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cols = list(pool.map(run, tasks))
    else:
        cols = [run(t) for t in tasks]
    data: Dict = {}
    for (j, beta), col in zip(tasks, cols):
        if not any(col) and not target.monoid.is_zero(beta):
            continue
        mat = data.setdefault(beta, _zero_matrix(n, depth))
        for i in range(n):
            mat[i][j] = col[i]
    zero = target.monoid.zero()
    data.setdefault(zero, identity_matrix(n))
    return NovikovTable(target.monoid, bound, data)


def adjoint_to_s(A: NovikovTable, target: TargetSpec) -> NovikovTable:
    n, m, hat = target.size, target.pairing, target.hat
    out = {}
    for beta, a in A.items():
        out[beta] = [[a[hat[j]][hat[i]] * (Fraction(m[j]) / m[i]) for j in range(n)] for i in range(n)]
    return NovikovTable(A.monoid, A.bound, out)


# --------------------------------------------------------------------------
# R and invariants


def _pairs(A: NovikovTable, B: NovikovTable, bound):
    m = A.monoid
    out: Dict = {}
    for d1 in A.degrees():
        for d2 in B.degrees():
            d = m.add(d1, d2)
            if m.size(d) <= Fraction(bound):
                out.setdefault(d, []).append((d1, d2))
    return out


def build_r(A: NovikovTable, target: TargetSpec, bound=None, S: Optional[NovikovTable] = None) -> NovikovTable:
    """``R(beta) = (sum A(b1)(z1) S(b2)(z2) - delta Id) / (z1 + z2)``, entrywise."""
    bound = A.bound if bound is None else bound
    S = adjoint_to_s(A, target) if S is None else S
    n = target.size
    out = {}
    for beta, splits in _pairs(A, S, bound).items():
        mat = []
        for i in range(n):
            row = []
            for j in range(n):
                t = BiZSeries({}, None)
                first = True
                for d1, d2 in splits:
                    a, s = A[d1], S[d2]
                    for k in range(n):
                        if not a[i][k] and a[i][k].depth is None:
                            continue
                        if not s[k][j] and s[k][j].depth is None:
                            continue
                        term = BiZSeries.outer(a[i][k], s[k][j])
                        t = term if first else t + term
                        first = False
                if target.monoid.is_zero(beta) and i == j:
                    t = t - BiZSeries({(0, 0): ONE})
                try:
                    row.append(divide_by_z1_plus_z2(t))
                except DivisibilityError as exc:
                    raise exc.located(target.monoid.fmt(beta), (i, j)) from None
            mat.append(row)
        out[beta] = mat
    return NovikovTable(A.monoid, bound, out)


class InvariantTable:
    """``<v_a psi^k, v_b psi^l>_beta`` keyed by ``(a, k, b, l, beta)``; absent keys are zero.

    ``depth`` (if not None) is the largest ``k + l + 2`` for which entries are
    known; beyond it the table says nothing.
    """

    def __init__(self, target_name: str, basis: Sequence[str], monoid: DegreeMonoid,
                 values: Optional[Dict] = None, depth: Optional[int] = None, degrees=()):
        self.target_name = target_name
        self.basis = tuple(basis)
        self.monoid = monoid
        self.values = {k: v for k, v in (values or {}).items() if v}
        self.depth = depth
        self.degrees = sorted(set(degrees) | {k[4] for k in self.values}, key=monoid.sort_key)

    def get(self, a, k, b, l, beta) -> Fraction:
        return self.values.get((a, k, b, l, beta), ZERO)

    def known(self, k, l) -> bool:
        return self.depth is None or k + l + 2 <= self.depth

    def sort_key(self, key):
        a, k, b, l, beta = key
        return (a, k, b, l, self.monoid.sort_key(beta))

    def items(self):
        return [(key, self.values[key]) for key in sorted(self.values, key=self.sort_key)]

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return isinstance(other, InvariantTable) and self.values == other.values

    def restrict(self, beta) -> Dict:
        return {k: v for k, v in self.values.items() if k[4] == beta}

    def label(self, key) -> str:
        a, k, b, l, beta = key

        def ins(i, p):
            name = self.basis[i]
            return name + (f" psi^{p}" if p else "")
        return f"<{ins(a, k)}, {ins(b, l)}>_{self.monoid.fmt(beta)}"


def extract_invariants(R: NovikovTable, target: TargetSpec) -> InvariantTable:
    n, m, hat = target.size, target.pairing, target.hat
    values = {}
    depth = None
    for beta, mat in R.items():
        if target.monoid.is_zero(beta):
            continue
        for i in range(n):
            for j in range(n):
                r = mat[i][j]
                if r.depth is not None:
                    depth = r.depth if depth is None else min(depth, r.depth)
                for (e1, e2), c in r.coeffs.items():
                    values[(hat[i], -e1 - 1, j, -e2 - 1, beta)] = Fraction(m[i]) * c
    degrees = [b for b in R.degrees() if not target.monoid.is_zero(b)]
    return InvariantTable(target.name, target.basis, target.monoid, values, depth, degrees)


def two_point(target: TargetSpec, bound, depth=None, workers=None):
    """Convenience pipeline returning ``(A, R, table)``."""
    if depth is None:
        depth = target.default_depth(bound) if target.equivariant else None
    A = build_s_adjoint(target, bound, depth, workers)
    R = build_r(A, target, bound)
    return A, R, extract_invariants(R, target)


# --------------------------------------------------------------------------
# checks


@dataclass
class Report:
    name: str
    passed: bool = True
    checked: int = 0
    skipped: int = 0
    failures: List[str] = field(default_factory=list)
    expected: Optional[bool] = None  # for documented-failure checks

    def fail(self, msg):
        self.passed = False
        self.failures.append(msg)

    @property
    def ok(self):
        return self.passed if self.expected is None else self.passed == self.expected

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        tail = f" ({self.checked} checked, {self.skipped} skipped)"
        if self.expected is not None:
            tail += " [expected %s]" % ("pass" if self.expected else "fail")
        first = f": {self.failures[0]}" if self.failures else ""
        return f"{status} {self.name}{tail}{first}"

    def to_dict(self):
        return {"check": self.name, "passed": self.passed, "ok": self.ok, "checked": self.checked,
                "skipped": self.skipped, "failures": self.failures[:20], "expected": self.expected}


def check_unitarity(A: NovikovTable, target: TargetSpec, bound=None, S=None) -> Report:
    """``sum A(b1)(-z) S(b2)(z) = delta_{beta,0} Id`` degree by degree."""
    bound = A.bound if bound is None else bound
    S = adjoint_to_s(A, target) if S is None else S
    rep = Report(f"unitarity[{target.name}]")
    n = target.size
    neg = {d: [[x.neg_z() for x in row] for row in mat] for d, mat in A.items()}
    for beta, splits in sorted(_pairs(A, S, bound).items(), key=lambda kv: A.monoid.sort_key(kv[0])):
        for i in range(n):
            for j in range(n):
                acc = ZSeries({}, None)
                for d1, d2 in splits:
                    for k in range(n):
                        acc = acc + neg[d1][i][k] * S[d2][k][j]
                want = ONE if (i == j and A.monoid.is_zero(beta)) else ZERO
                rep.checked += 1
                bad = [e for e, c in acc.coeffs.items() if c != (want if e == 0 else ZERO)]
                if acc[0] != want and 0 not in bad:
                    bad.append(0)
                if bad:
                    e = max(bad)
                    rep.fail(f"degree {A.monoid.fmt(beta)}, entry ({i},{j}), z^{e}")
                    return rep
    return rep


def one_point(A: NovikovTable, target: TargetSpec) -> Dict:
    """``<v_p psi^m>_{0,1,beta}`` read off the J-column ``S*(1) = sum_j unit_j A[:, j]``."""
    n, m, hat = target.size, target.pairing, target.hat
    unit = target.unit
    out = {}
    depth = None
    for beta, a in A.items():
        if A.monoid.is_zero(beta):
            continue
        for p in range(n):
            col = ZSeries({}, None)
            for j in range(n):
                if unit[j]:
                    col = col + a[hat[p]][j] * unit[j]
            if col.depth is not None:
                depth = col.depth if depth is None else min(depth, col.depth)
            for e, c in col.coeffs.items():
                if e <= -2:
                    out[(p, -e - 2, beta)] = Fraction(m[p]) * c
    return out, depth


def check_string_divisor(inv: InvariantTable, A: NovikovTable, target: TargetSpec) -> Report:
    """String and divisor equations against one-point data from the J-column."""
    rep = Report(f"string/divisor[{target.name}]")
    if target.unit is None:
        rep.skipped += 1
        return rep
    onept, adepth = one_point(A, target)
    n = target.size

    def op(p, mm, beta):
        return onept.get((p, mm, beta), ZERO)

    def op_known(mm):
        return adepth is None or mm + 2 <= adepth

    kmax = max([k for (_, k, _, _, _) in inv.values] + [mm for (_, mm, _) in onept] + [0]) + 2
    if inv.depth is not None:
        kmax = min(kmax, inv.depth)
    for beta in inv.degrees:
        for p in range(n):
            for k in range(0, kmax + 1):
                if not inv.known(k, 0):
                    continue
                # string
                if k == 0:
                    rep.skipped += 1
                elif op_known(k - 1):
                    lhs = sum((target.unit[j] * inv.get(p, k, j, 0, beta) for j in range(n)), ZERO)
                    rhs = op(p, k - 1, beta)
                    rep.checked += 1
                    if lhs != rhs:
                        rep.fail(f"string: {inv.basis[p]} psi^{k} at {inv.monoid.fmt(beta)}: {lhs} != {rhs}")
                # divisor
                for D in target.divisors:
                    if not op_known(k):
                        continue
                    lhs = sum((D.coords[j] * inv.get(p, k, j, 0, beta) for j in range(n)), ZERO)
                    rhs = rat(D.degree(beta)) * op(p, k, beta)
                    if k >= 1:
                        rhs += sum((D.mult[q][p] * op(q, k - 1, beta) for q in range(n) if D.mult[q][p]), ZERO)
                    rep.checked += 1
                    if lhs != rhs:
                        rep.fail(f"divisor {D.name}: {inv.basis[p]} psi^{k} at {inv.monoid.fmt(beta)}: "
                                 f"{lhs} != {rhs}")
    return rep


def check_swap_symmetry(inv: InvariantTable) -> Report:
    rep = Report(f"swap-symmetry[{inv.target_name}]")
    for (a, k, b, l, beta), v in inv.values.items():
        if not inv.known(k, l):
            continue
        rep.checked += 1
        w = inv.get(b, l, a, k, beta)
        if v != w:
            rep.fail(f"{inv.label((a, k, b, l, beta))} = {v} but swapped = {w}")
    return rep


def admissible(target: TargetSpec, a, k, b, l, beta) -> bool:
    lhs = target.class_degree[a] + target.class_degree[b] + k + l
    return lhs == target.dim - 1 + rat(target.c1(beta))


def check_dimension(inv: InvariantTable, target: TargetSpec = None, *, class_degree=None,
                    dim=None, c1=None) -> Report:
    """Nonzero entries must satisfy ``deg a + deg b + k + l = dim - 1 + <c_1, beta>``."""
    if target is not None:
        class_degree, dim, c1 = target.class_degree, target.dim, target.c1
    rep = Report(f"dimension-filter[{inv.target_name}]")
    if target is not None and target.equivariant or class_degree is None or c1 is None:
        rep.skipped += 1
        return rep
    for (a, k, b, l, beta), v in inv.values.items():
        rep.checked += 1
        if class_degree[a] + class_degree[b] + k + l != dim - 1 + rat(c1(beta)):
            rep.fail(f"{inv.label((a, k, b, l, beta))} = {v} violates the dimension constraint")
    return rep


def fmt_value(v) -> str:
    return rat_str(v)
