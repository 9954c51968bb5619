"""Smooth toric targets by torus localization.

Divisor classes are ``R_j = sum_i m_ij P_i - lambda_j``. Every maximal cone
``S`` gives a fixed point and a basis class ``v_S = prod_{j in S} R_j`` with
``v_S . v_S' = delta n_S v_S``. The column of ``v_S`` at degree ``beta``,
restricted to the fixed point ``S'``, is

    prod_{j in S} (R_j + R_j(beta) z) * prod_j prod_{m <= 0}(R_j + m z) / prod_{m <= R_j(beta)}(R_j + m z)

evaluated at ``R_j -> R_j|_{S'}``, and its coordinate along ``v_{S'}`` is that
value divided by ``n_{S'}``. The lambdas are fixed rationals, so all arithmetic
stays in Q; two independent assignments certify non-equivariant limits.

Ray and cone indices in input files and compositions are 1-based, as in the
usual labelling of toric divisors; everything internal is 0-based.
"""
import json
import random
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product as iproduct
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (ONE, ZERO, DegreeMonoid, ZSeries, determinant, invert_affine, invert_matrix, rank,
                      rat, rat_str, solve_linear)
from .engine import (Divisor, InvariantTable, Report, TargetSpec, build_r, build_s_adjoint,
                     extract_invariants)
from .errors import ConditionError, DegenerateLambdaError, LimitError, NotCertifiedError, ValidationError

FANS = Path(__file__).parent / "fans"


@dataclass(frozen=True)
class MoriGenerator:
    degrees: Tuple[int, ...]  # R_j(beta) for every ray
    coords: Tuple[int, ...]  # beta_i = int_beta P_i


@dataclass(frozen=True)
class ToricSpec:
    name: str
    rays: Tuple[Tuple[int, ...], ...]
    cones: Tuple[Tuple[int, ...], ...]  # 0-based, sorted
    divisor_matrix: Tuple[Tuple[int, ...], ...]  # k x N
    mori: Tuple[MoriGenerator, ...]
    lambdas: Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]
    classes: Tuple[Tuple[int, ...], ...] = ()  # exponent vectors used for non-equivariant limits

    @property
    def n(self):
        return len(self.rays[0])

    @property
    def N(self):
        return len(self.rays)

    @property
    def k(self):
        return len(self.divisor_matrix)

    @property
    def monoid(self):
        return DegreeMonoid("vector", len(self.mori))

    def ray_degrees(self, beta) -> Tuple[int, ...]:
        """``R_j(beta)`` for a degree given in Mori-generator coordinates."""
        return tuple(sum(a * g.degrees[j] for a, g in zip(beta, self.mori)) for j in range(self.N))

    def pairing_with(self, beta) -> Tuple[int, ...]:
        """``beta_i = int_beta P_i``."""
        return tuple(sum(a * g.coords[i] for a, g in zip(beta, self.mori)) for i in range(self.k))

    def c1(self, beta) -> int:
        return sum(self.ray_degrees(beta))

    @property
    def fano(self) -> bool:
        return all(sum(g.degrees) > 0 for g in self.mori)

    def cone_name(self, S) -> str:
        return "v{" + ",".join(str(j + 1) for j in S) + "}"


# --------------------------------------------------------------------------
# construction and validation


def _default_lambdas(N, seed):
    rng = random.Random(seed)
    vals = []
    while len(vals) < N:
        x = Fraction(rng.randint(-40, 40), rng.randint(1, 6))
        if x not in vals:
            vals.append(x)
    return tuple(vals)


def make_toric(name, rays, cones, divisor_matrix, mori, lambdas=None, classes=None,
               one_based=True) -> ToricSpec:
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    if not rays:
        raise ValidationError("no rays")
    n = len(rays[0])
    N = len(rays)
    if any(len(r) != n for r in rays):
        raise ValidationError("rays have inconsistent dimension")
    off = 1 if one_based else 0
    cones = tuple(sorted(tuple(sorted(int(j) - off for j in c)) for c in cones))
    m = tuple(tuple(int(x) for x in row) for row in divisor_matrix)
    k = N - n
    if len(m) != k or any(len(row) != N for row in m):
        raise ValidationError(f"divisor matrix must be {k} x {N}")
    for i, row in enumerate(m):
        rel = [sum(row[j] * rays[j][t] for j in range(N)) for t in range(n)]
        if any(rel):
            raise ValidationError(f"divisor matrix row {i + 1} is not a linear relation among the rays")
    # the P_i basis is dual to the Mori generators: some k columns are the identity
    cols = {tuple(m[i][j] for i in range(k)) for j in range(N)}
    for i in range(k):
        if tuple(1 if t == i else 0 for t in range(k)) not in cols:
            raise ValidationError(f"no ray has R_j = P_{i + 1} - lambda_j (identity columns missing)")
    for S in cones:
        if len(S) != n or len(set(S)) != n or min(S) < 0 or max(S) >= N:
            raise ValidationError(f"cone {[j + off for j in S]} must consist of {n} distinct rays")
        det = determinant([rays[j] for j in S])
        if abs(det) != 1:
            raise ValidationError(f"cone {[j + off for j in S]} is not smooth (det {det})")
    gens = []
    for g in mori:
        degrees = tuple(int(x) for x in g["degrees"])
        coords = tuple(int(x) for x in g["coords"])
        if len(degrees) != N or len(coords) != k:
            raise ValidationError("Mori generator has wrong length")
        implied = tuple(sum(m[i][j] * coords[i] for i in range(k)) for j in range(N))
        if implied != degrees:
            raise ValidationError(f"Mori generator degrees {degrees} disagree with divisor matrix ({implied})")
        gens.append(MoriGenerator(degrees, coords))
    if lambdas is None:
        lam = _pick_lambdas(m, cones, N, k, 11), _pick_lambdas(m, cones, N, k, 29)
    else:
        lam = tuple(tuple(rat(x) for x in a) for a in lambdas)
        if len(lam) == 1:
            lam = (lam[0], _pick_lambdas(m, cones, N, k, 29, avoid=lam[0]))
        for a in lam:
            if len(a) != N or len(set(a)) != N:
                raise ValidationError(f"lambda assignment needs {N} distinct values")
    if classes is None:
        classes = tuple(v for v in iproduct(range(n + 1), repeat=k) if sum(v) <= n)
        classes = tuple(sorted(classes, key=lambda v: (sum(v), tuple(-x for x in v))))
    spec = ToricSpec(name, rays, cones, m, tuple(gens), lam, tuple(tuple(c) for c in classes))
    for idx in range(2):
        fixed_points(spec, idx)  # raises on degenerate lambdas
    return spec


def _pick_lambdas(m, cones, N, k, seed, avoid=None):
    for attempt in range(100):
        lam = _default_lambdas(N, seed + 1000 * attempt)
        if lam == avoid:
            continue
        try:
            _solve_fixed_points(m, cones, N, k, lam)
            return lam
        except DegenerateLambdaError:
            continue
    raise DegenerateLambdaError("could not find generic lambdas")


def load_toric(path_or_dict, name=None) -> ToricSpec:
    """Read the JSON fan description.

    ``{rays, max_cones, divisor_matrix, mori: [{degrees, coords}], lambda?, classes?}``
    with 1-based cone indices. ``lambda`` is one list of rational strings, or
    a list of two such lists.
    """
    if isinstance(path_or_dict, dict):
        data = path_or_dict
    else:
        p = Path(path_or_dict)
        if not p.exists() and (FANS / f"{p.name}.json").exists():
            p = FANS / f"{p.name}.json"
        data = json.loads(p.read_text())
        name = name or data.get("name") or p.stem
    for key in ("rays", "max_cones", "divisor_matrix", "mori"):
        if key not in data:
            raise ValidationError(f"toric input is missing '{key}'")
    lam = data.get("lambda")
    if lam is not None and lam and not isinstance(lam[0], list):
        lam = [lam]
    return make_toric(name or data.get("name", "toric"), data["rays"], data["max_cones"],
                      data["divisor_matrix"], data["mori"], lam, data.get("classes"))


def builtin_fans() -> List[str]:
    return sorted(p.stem for p in FANS.glob("*.json"))


# --------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True)
class FixedPoint:
    cone: Tuple[int, ...]
    x: Tuple[Fraction, ...]  # P_i restricted to the point
    restriction: Tuple[Fraction, ...]  # R_j restricted to the point, every j
    euler: Fraction  # n_S
    partial: Dict[int, Fraction] = field(default_factory=dict)  # j -> n_S / R_j|_S


def _solve_fixed_points(m, cones, N, k, lam):
    out = {}
    for S in cones:
        rows = [j for j in range(N) if j not in S]
        try:
            x = solve_linear([[m[i][j] for i in range(k)] for j in rows], [lam[j] for j in rows])
        except ValueError:
            raise ValidationError(f"cone {S} gives a singular fixed-point system") from None
        res = tuple(sum((m[i][j] * x[i] for i in range(k)), ZERO) - lam[j] for j in range(N))
        euler = ONE
        for j in S:
            euler *= res[j]
        if euler == 0:
            raise DegenerateLambdaError(f"n_S vanishes at cone {S} for lambda {lam}")
        partial = {j: euler / res[j] for j in S}
        out[S] = FixedPoint(S, tuple(x), res, euler, partial)
    return out


@lru_cache(maxsize=256)
def fixed_points(spec: ToricSpec, which: int = 0) -> Dict[Tuple[int, ...], FixedPoint]:
    return _solve_fixed_points(spec.divisor_matrix, spec.cones, spec.N, spec.k, spec.lambdas[which])


@lru_cache(maxsize=4096)
def localize(spec: ToricSpec, exponents, which=0) -> Dict[Tuple[int, ...], Fraction]:
    """Coordinates of the equivariant monomial ``prod P_i^{e_i}`` in the basis ``v_S``."""
    out = {}
    for S, fp in fixed_points(spec, which).items():
        val = ONE
        for xi, e in zip(fp.x, exponents):
            val *= xi ** e
        out[S] = val / fp.euler
    return out


def integrate(spec: ToricSpec, exponents, which=0) -> Fraction:
    """``int_X prod P_i^{e_i}`` by localization (each ``v_S`` integrates to 1)."""
    return sum(localize(spec, exponents, which).values(), ZERO)


# --------------------------------------------------------------------------
# Condition scan


def i_term_order(spec: ToricSpec, beta) -> int:
    """Guaranteed 1/z-order of the degree-beta hypergeometric factor."""
    return sum(d if d >= 0 else 1 + d for d in spec.ray_degrees(beta))


def condition_scan(spec: ToricSpec, composition: Sequence[int], bound, one_based=True) -> Report:
    """Compare the z-degree of ``prod_t (R_{i_t} + R_{i_t}(beta) z)`` with the I-term order."""
    comp = [int(i) - (1 if one_based else 0) for i in composition]
    label = ",".join(str(i + 1) for i in comp)
    rep = Report(f"condition[{spec.name}; ({label})]")
    rep.per_degree = []
    for beta in spec.monoid.enumerate(bound):
        if not any(beta):
            continue
        rd = spec.ray_degrees(beta)
        num = sum(1 for i in comp if rd[i] != 0)
        order = i_term_order(spec, beta)
        ok = num <= order
        rep.checked += 1
        rep.per_degree.append((beta, num, order, ok))
        if not ok:
            rep.fail(f"degree {spec.monoid.fmt(beta)}: numerator z-degree {num} > I-term order {order}")
    return rep


def jx_criterion(spec: ToricSpec, bound) -> Dict:
    """Truncated estimate of ``min(-K.beta + #{j : R_j(beta) < 0})`` over effective beta != 0."""
    if not spec.fano:
        raise ValidationError(f"{spec.name} is not Fano; the criterion does not apply")
    vals = []
    for beta in spec.monoid.enumerate(bound):
        if any(beta):
            rd = spec.ray_degrees(beta)
            vals.append(sum(rd) + sum(1 for d in rd if d < 0))
    jx = min(vals)
    return {"jx": jx, "dim": spec.n, "satisfied": jx >= spec.n - 1, "truncated_at": bound}


# --------------------------------------------------------------------------
# columns


def fixed_point_value(spec: ToricSpec, composition, beta, point: FixedPoint, depth: int) -> ZSeries:
    """Normalized ``z D_{i_1} ... z D_{i_r} J`` at degree beta restricted to one fixed point."""
    rd = spec.ray_degrees(beta)
    a = point.restriction
    poly = ZSeries.const(ONE)
    for i in composition:
        poly = poly * ZSeries({0: a[i], 1: Fraction(rd[i])})
    for j in range(spec.N):
        for mm in range(rd[j] + 1, 1):
            poly = poly * ZSeries({0: a[j], 1: Fraction(mm)})
    if not poly:
        return ZSeries({}, depth)
    inner = depth + max(poly.top, 0)
    inv = ZSeries.const(ONE)
    for j in range(spec.N):
        for mm in range(1, rd[j] + 1):
            inv = inv * invert_affine(a[j], 1, mm, inner)
    return (poly * inv).truncate(depth)


def composition_value(spec: ToricSpec, composition, point: FixedPoint) -> Fraction:
    """Restriction of ``prod_t R_{i_t}`` to a fixed point."""
    out = ONE
    for i in composition:
        out *= point.restriction[i]
    return out


def _passes(spec: ToricSpec, composition, bound, strict=False) -> bool:
    for beta in spec.monoid.enumerate(bound):
        if any(beta):
            rd = spec.ray_degrees(beta)
            num = sum(1 for i in composition if rd[i] != 0)
            order = i_term_order(spec, beta)
            if num > order or (strict and num == order):
                return False
    return True


def column_compositions(spec: ToricSpec, bound, which: int = 0) -> Tuple[Tuple[int, ...], ...]:
    """Operator compositions whose columns span the equivariant cohomology.

    The cones themselves are used when they all pass the condition scan;
    otherwise divisor monomials that pass are added greedily (by length, then
    lexicographically) while their classes raise the rank.
    """
    if all(_passes(spec, S, bound) for S in spec.cones):
        return spec.cones
    fps = [fixed_points(spec, w) for w in (0, 1)]
    chosen, rows = [], []
    for size in range(spec.n + 1):
        for T in combinations_with_replacement(range(spec.N), size):
            if len(chosen) == len(spec.cones):
                break
            if not _passes(spec, T, bound):
                continue
            row = [composition_value(spec, T, fps[which][S]) for S in spec.cones]
            if rank(rows + [row]) > len(rows):
                chosen.append(T)
                rows.append(row)
    if len(chosen) < len(spec.cones):
        raise ConditionError(f"{spec.name}: the compositions passing the condition scan up to "
                             f"degree {bound} do not span the cohomology")
    for fp in fps:
        if rank([[composition_value(spec, T, fp[S]) for S in spec.cones] for T in chosen]) < len(chosen):
            raise DegenerateLambdaError(f"{spec.name}: composition basis degenerates at one lambda assignment")
    return tuple(chosen)


def equivariant_columns(spec: ToricSpec, S, beta, depth: int, which: int = 0) -> List[ZSeries]:
    """Coordinates along ``v_{S'}`` (cones in ``spec.cones`` order) of the column of ``prod_{j in S} R_j``."""
    fps = fixed_points(spec, which)
    out = []
    for Sp in spec.cones:
        fp = fps[Sp]
        out.append(fixed_point_value(spec, S, beta, fp, depth) * (ONE / fp.euler))
    return out


def _cone_columns(spec: ToricSpec, compositions, bound, which):
    """Column function for the basis ``v_S``.

    A composition whose column reaches ``z^0`` at some ``beta > 0`` computes
    ``z grad_A J`` for a Q-dependent class ``A = e_T + sum_beta Q^beta a_beta``
    rather than the column of ``e_T``. The ``a_beta`` are read off the ``z^0``
    coefficients and removed degree by degree, which leaves the columns of
    the classes ``e_T``; a change of basis then gives the columns of ``v_S``.
    """
    cones = spec.cones
    strict = bound is None or all(_passes(spec, T, bound, strict=True) for T in compositions)
    if tuple(compositions) == cones and strict:
        return lambda j, beta, depth: equivariant_columns(spec, cones[j], beta, depth, which)
    fps = fixed_points(spec, which)
    nb = len(cones)
    # E[T][S'] = coordinate of the class e_T along v_{S'}
    E = [[composition_value(spec, T, fps[S]) / fps[S].euler for S in cones] for T in compositions]
    inv = invert_matrix(E)  # v_S = sum_T inv[S][T] e_T; e-coordinates of x are x @ inv
    monoid = spec.monoid
    cache = {}
    lock = threading.Lock()

    raw_cache = {}

    def raw(beta, depth):
        key = (beta, depth)
        if key not in raw_cache:
            raw_cache[key] = [equivariant_columns(spec, T, beta, depth, which) for T in compositions]
        return [list(c) for c in raw_cache[key]]

    def gauge(beta, depth):
        # e-coordinates of the z^0 part of every raw column at beta
        cols = raw(beta, depth)
        return [[sum((cols[t][a][0] * inv[a][u] for a in range(nb)), ZERO) for u in range(nb)]
                for t in range(nb)]

    def corrected_all(beta, depth):
        key = (beta, depth)
        with lock:
            if key in cache:
                return cache[key]
        cols = raw(beta, depth)
        if any(beta):
            for b1 in monoid.enumerate(sum(beta)):
                if not any(b1) or any(x > y for x, y in zip(b1, beta)):
                    continue
                g = gauge(b1, depth)
                rest = corrected_all(tuple(y - x for x, y in zip(b1, beta)), depth)
                for t in range(nb):
                    for u in range(nb):
                        if g[t][u]:
                            cols[t] = [c - x * g[t][u] for c, x in zip(cols[t], rest[u])]
        with lock:
            cache[key] = cols
        return cols

    def column(j, beta, depth):
        cols = corrected_all(beta, depth)
        out = [ZSeries({}, depth) for _ in cones]
        for t in range(nb):
            c = inv[j][t]
            if c:
                out = [o + x * c for o, x in zip(out, cols[t])]
        return out

    return column


def toric_target(spec: ToricSpec, which: int = 0, bound=None) -> TargetSpec:
    """Fixed-point basis target; ``bound`` picks the compositions used for the columns."""
    fps = fixed_points(spec, which)
    compositions = column_compositions(spec, bound, which) if bound is not None else spec.cones
    cones = spec.cones
    euler = tuple(fps[S].euler for S in cones)
    nb = len(cones)
    divisors = []
    for i in range(spec.k):
        xs = [fps[S].x[i] for S in cones]
        mult = tuple(tuple(xs[a] if a == b else ZERO for b in range(nb)) for a in range(nb))
        divisors.append(Divisor(f"P{i + 1}", tuple(xs[a] / euler[a] for a in range(nb)), mult,
                                lambda beta, i=i: spec.pairing_with(beta)[i]))
    lam = ",".join(rat_str(x) for x in spec.lambdas[which])
    return TargetSpec(
        name=f"{spec.name}[lambda={lam}]",
        basis=tuple(spec.cone_name(S) for S in cones),
        pairing=euler,
        hat=tuple(range(nb)),
        monoid=spec.monoid,
        column=_cone_columns(spec, compositions, bound, which),
        unit=tuple(ONE / e for e in euler),
        divisors=tuple(divisors),
        equivariant=True,
        dim=spec.n,
        c1=spec.c1,
        meta={"kind": "toric", "lambda_index": which,
              "compositions": [[i + 1 for i in T] for T in compositions]},
    )


@dataclass
class ToricRun:
    target: TargetSpec
    A: object
    R: object
    table: InvariantTable


def toric_two_point(spec: ToricSpec, bound, depth=None, which=0, workers=None) -> ToricRun:
    """Fixed-point-basis table ``<v_S1 psi^k, v_S2 psi^l>_beta`` at one lambda assignment."""
    target = toric_target(spec, which, bound)
    depth = target.default_depth(bound) if depth is None else depth
    A = build_s_adjoint(target, bound, depth, workers)
    R = build_r(A, target, bound)
    return ToricRun(target, A, R, extract_invariants(R, target))


def class_name(exponents) -> str:
    parts = []
    for i, e in enumerate(exponents):
        if e:
            base = f"P{i + 1}" if len(exponents) > 1 else "P"
            parts.append(base if e == 1 else f"{base}^{e}")
    return "*".join(parts) or "1"


def contract(spec: ToricSpec, table: InvariantTable, alpha, gamma, k, l, beta, which) -> Fraction:
    la, lg = localize(spec, tuple(alpha), which), localize(spec, tuple(gamma), which)
    idx = {S: i for i, S in enumerate(spec.cones)}
    out = ZERO
    for S1, c1 in la.items():
        if not c1:
            continue
        for S2, c2 in lg.items():
            if c2:
                out += c1 * c2 * table.get(idx[S1], k, idx[S2], l, beta)
    return out


def nonequivariant_limit(spec: ToricSpec, bound, depth=None, classes=None, runs=None) -> InvariantTable:
    """Ordinary invariants of monomial classes, certified at both lambda assignments.

    Dimension-admissible entries are homogeneous of degree zero in lambda, so
    they must agree exactly across assignments; entries below the virtual
    dimension must vanish at both; entries above it have zero limit.
    """
    classes = tuple(tuple(c) for c in (classes or spec.classes))
    if runs is None:
        runs = [toric_two_point(spec, bound, depth, which) for which in (0, 1)]
    tables = [r.table for r in runs]
    known = min((t.depth for t in tables if t.depth is not None), default=None)
    values = {}
    degrees = sorted({b for t in tables for b in t.degrees}, key=spec.monoid.sort_key)
    for beta in degrees:
        vdim = spec.n - 1 + spec.c1(beta)
        for a, alpha in enumerate(classes):
            for b, gamma in enumerate(classes):
                deg = sum(alpha) + sum(gamma)
                for k in range(0, vdim - deg + 1):
                    l = vdim - deg - k
                    if known is not None and k + l + 2 > known:
                        raise LimitError(f"depth {known} too small for admissible key at {beta}")
                    vals = [contract(spec, t, alpha, gamma, k, l, beta, w) for w, t in enumerate(tables)]
                    if vals[0] != vals[1]:
                        raise LimitError(
                            f"<{class_name(alpha)} psi^{k}, {class_name(gamma)} psi^{l}>_{beta}: "
                            f"{vals[0]} vs {vals[1]}")
                    if vals[0]:
                        values[(a, k, b, l, beta)] = vals[0]
                # below the virtual dimension the equivariant numbers vanish identically
                for k in range(0, max(vdim - deg, 0)):
                    for l in range(0, vdim - deg - k):
                        if known is not None and k + l + 2 > known:
                            continue
                        for w, t in enumerate(tables):
                            v = contract(spec, t, alpha, gamma, k, l, beta, w)
                            if v:
                                raise LimitError(f"sub-dimensional entry nonzero: {v}")
    return InvariantTable(spec.name, [class_name(c) for c in classes], spec.monoid, values, None, degrees)


def limit_class_degrees(spec: ToricSpec, classes=None):
    classes = classes or spec.classes
    return tuple(Fraction(sum(c)) for c in classes)


# --------------------------------------------------------------------------
# the two semi-Fano examples


def builtin_X1(lambdas=None) -> ToricSpec:
    """P(O + O(1) + O(1)) over P^1: R_1,R_2 = P1, R_3 = P2, R_4,R_5 = P2 - P1 (minus lambdas)."""
    return make_toric(
        "X1",
        rays=[(1, 0, 0), (-1, 1, 1), (0, -1, -1), (0, 1, 0), (0, 0, 1)],
        cones=[(a, b, c) for a in (1, 2) for b, c in combinations((3, 4, 5), 2)],
        divisor_matrix=[(1, 1, 0, -1, -1), (0, 0, 1, 1, 1)],
        mori=[{"degrees": (1, 1, 0, -1, -1), "coords": (1, 0)},
              {"degrees": (0, 0, 1, 1, 1), "coords": (0, 1)}],
        lambdas=lambdas,
        classes=[(0, 0), (1, 0), (0, 1), (0, 2), (1, 1), (1, 2)],
    )


def builtin_X2(lambdas=None) -> ToricSpec:
    """P(O + O + O(2)) over P^1: R_1,R_2 = P1, R_3,R_4 = P2, R_5 = P2 - 2 P1 (minus lambdas)."""
    return make_toric(
        "X2",
        rays=[(1, 0, 0), (-1, 0, 2), (0, -1, -1), (0, 1, 0), (0, 0, 1)],
        cones=[(a, b, c) for a in (1, 2) for b, c in combinations((3, 4, 5), 2)],
        divisor_matrix=[(1, 1, 0, 0, -2), (0, 0, 1, 1, 1)],
        mori=[{"degrees": (1, 1, 0, 0, -2), "coords": (1, 0)},
              {"degrees": (0, 0, 1, 1, 1), "coords": (0, 1)}],
        lambdas=lambdas,
        classes=[(0, 0), (1, 0), (0, 1), (0, 2), (1, 1), (1, 2)],
    )


def x2_f_coefficients(bound) -> Dict[int, Fraction]:
    """Coefficients ``(2d-1)!/(d!)^2`` of the X2 mirror-map series ``f(Q)``."""
    from math import factorial
    return {d: Fraction(factorial(2 * d - 1), factorial(d) ** 2) for d in range(1, bound + 1)}


def x2_operator_prefactors(bound) -> Dict[str, Dict[Tuple[int, int], Fraction]]:
    """Truncated series of ``1 + 2 q1 f'(q1)`` and ``1 - q2 f'(q1)`` in ``(q1, q2) = (e^t1, e^t2)``.

    The second is implemented as printed (it mixes ``t2`` and ``t1``); the
    derivative operators rescale by the reciprocals of these series.
    """
    f = x2_f_coefficients(bound + 1)
    first = {(0, 0): ONE}
    for d in range(1, bound + 1):
        first[(d, 0)] = 2 * d * f[d]
    second = {(0, 0): ONE}
    for d in range(1, bound + 1):
        if d - 1 + 1 <= bound:
            second[(d - 1, 1)] = -d * f[d]
    return {"dT1": first, "dT2": second}


SEMI_FANO_COMPOSITIONS = {
    "X1": {(3, 1): True, (4, 1): True},
    "X2": {(3, 1): True, (4, 1): True, (5, 1): False},
}


def semifano_builtin(which: str, bound: int = 3, depth=None, allow_uncertified=False, extract=False):
    """Condition reports for the built-in semi-Fano targets, plus extraction where certified.

    X1 needs no mirror map, so its fixed-point pipeline runs unchanged. X2
    needs a mirror change of variables that is not fully specified, so its
    extraction is refused unless ``allow_uncertified`` is set.
    """
    which = which.upper()
    if which not in SEMI_FANO_COMPOSITIONS:
        raise ValidationError(f"unknown builtin {which!r}; choose X1 or X2")
    spec = builtin_X1() if which == "X1" else builtin_X2()
    reports = []
    for comp, expected in SEMI_FANO_COMPOSITIONS[which].items():
        rep = condition_scan(spec, comp, bound)
        rep.expected = expected
        reports.append(rep)
    out = {"spec": spec, "reports": reports}
    if which == "X2":
        out["f"] = x2_f_coefficients(bound)
        out["prefactors"] = x2_operator_prefactors(bound)
    if extract:
        if which == "X2" and not allow_uncertified:
            raise NotCertifiedError("X2 extraction needs the mirror change of variables; "
                                    "pass allow_uncertified to run the uncorrected pipeline")
        out["runs"] = [toric_two_point(spec, bound, depth, w) for w in (0, 1)]
    return out
