"""Weighted projective space P(w_0, ..., w_n).

Sectors of the inertia stack are labelled by ``f`` in
``F = {k/w_i : 0 <= k < w_i}``; sector ``f`` is ``P(w_i : f w_i in Z)`` with
cohomology ``Q[P]/P^{dim_f + 1}``. Basis ``v_j = sigma_j P^{r_j} 1_{c_j}``.

Indices are 0-based throughout: ``j`` here is ``j + 1`` in 1-based notation.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Tuple

from .algebra import (ONE, ZERO, BiZSeries, CohClass, DegreeMonoid, ZSeries, divide_by_z1_plus_z2,
                      frac_part, invert_affine, invert_matrix, lcm_all, rat_str)
from .engine import Divisor, InvariantTable, TargetSpec, two_point
from .errors import ValidationError


@dataclass(frozen=True)
class WpsSpec:
    weights: Tuple[int, ...]
    N: int
    c: Tuple[Fraction, ...]
    sectors: Tuple[Fraction, ...]
    sigma: Tuple[Fraction, ...]
    r: Tuple[int, ...]
    dsize: Tuple[int, ...]  # d_j = #{i : c_i = c_j}
    m: Tuple[int, ...]
    hat: Tuple[int, ...]
    pairing: Tuple[Fraction, ...]  # (v_hat(j), v_j)
    sector_dim: Dict[Fraction, int]
    gram: Tuple[Tuple[Fraction, ...], ...]
    dual: Tuple[Tuple[Fraction, ...], ...]  # dual[j][i]: coordinate of v^j along v_i

    @property
    def n(self):
        return len(self.weights) - 1

    def index(self, sector, power) -> int:
        for j, (cj, rj) in enumerate(zip(self.c, self.r)):
            if cj == sector and rj == power:
                return j
        raise KeyError((sector, power))

    def age(self, f) -> Fraction:
        return sum((frac_part(-f * w) for w in self.weights), ZERO)

    def name(self, j) -> str:
        p = {0: "", 1: "P"}.get(self.r[j], f"P^{self.r[j]}")
        s = "" if self.c[j] == 0 else f"1_{rat_str(self.c[j])}"
        body = "*".join(x for x in (p, s) if x) or "1"
        return body if self.sigma[j] == 1 else f"{rat_str(self.sigma[j])}*{body}"


def _sigma(weights, c, j) -> Fraction:
    num = ONE
    for cm in c:
        if cm < c[j]:
            num *= c[j] - cm
    den = ONE
    for w in weights:
        top = c[j] * w
        b = frac_part(top)
        if b == 0:
            b = ONE
        while b <= top:
            den *= b
            b += 1
    return num / den


def wps_basis_data(weights) -> WpsSpec:
    weights = tuple(int(w) for w in weights)
    if len(weights) < 2 or min(weights) < 1:
        raise ValidationError("weights must be at least two positive integers")
    g = 0
    for w in weights:
        g = gcd(g, w)
    if g != 1:
        raise ValidationError("weights must be coprime (well-formed up to an overall gerbe)")
    c = tuple(sorted(Fraction(k, w) for w in weights for k in range(w)))
    sectors = tuple(sorted(set(c)))
    dims = {f: sum(1 for w in weights if (f * w).denominator == 1) - 1 for f in sectors}
    N = len(c)
    r = tuple(sum(1 for i in range(j) if c[i] == c[j]) for j in range(N))
    dsize = tuple(sum(1 for i in range(N) if c[i] == c[j]) for j in range(N))
    m = []
    for j in range(N):
        prod = 1
        for w in weights:
            if (c[j] * w).denominator == 1:
                prod *= w
        m.append(prod)
    sigma = tuple(_sigma(weights, c, j) for j in range(N))

    # Chen-Ruan pairing: int_{X_f} P^{dim_f} 1_f = 1/m_f against sector <1-f>
    def pair(i, j):
        if frac_part(c[i] + c[j]) != 0:
            return ZERO
        if r[i] + r[j] != dims[c[i]]:
            return ZERO
        return sigma[i] * sigma[j] / m[i]

    gram = tuple(tuple(pair(i, j) for j in range(N)) for i in range(N))
    ginv = invert_matrix(gram)
    # v^j = sum_i ginv[i][j] v_i  (dual basis: (v^j, v_k) = delta_jk)
    dual = tuple(tuple(ginv[i][j] for i in range(N)) for j in range(N))
    hat = []
    pairing = []
    for j in range(N):
        support = [i for i in range(N) if dual[j][i]]
        if len(support) != 1:
            raise ValidationError(f"dual of v_{j} is not a multiple of a single basis vector")
        i = support[0]
        hat.append(i)
        pairing.append(1 / dual[j][i])
    return WpsSpec(weights, N, c, sectors, sigma, r, dsize, tuple(m), tuple(hat), tuple(pairing),
                   dims, gram, dual)


# --------------------------------------------------------------------------
# columns


def _jdegree_factors(spec: WpsSpec, d: Fraction):
    """The affine factors ``(w_i P + b z)`` of the J-function denominator at degree d."""
    out = []
    for w in spec.weights:
        top = d * w
        b = frac_part(top)
        if b == 0:
            b = ONE
        while b <= top:
            out.append((w, b))
            b += 1
    return out


def wps_column_class(spec: WpsSpec, j: int, d) -> ZSeries:
    """Class-valued ``z^{-1} D_j J(0; z)`` at J-degree ``d`` (Novikov exponent ``d - c_j``)."""
    d = Fraction(d)
    f = frac_part(d)
    if f not in spec.sector_dim:
        raise ValidationError(f"fractional part {f} of degree {d} is not a sector")
    if d < 0:
        raise ValidationError("degree must be non-negative")
    dim = spec.sector_dim[f]
    P = CohClass.generator(0, f, dim)
    out = ZSeries.const(CohClass.scalar(1, f, dim))
    for cm in spec.c[:j]:
        out = out * ZSeries({0: P, 1: CohClass.scalar(d - cm, f, dim)})
        if not out:
            return out
    for w, b in _jdegree_factors(spec, d):
        out = out * invert_affine(P, w, b)
    return out


def components(spec: WpsSpec, s: ZSeries) -> List[ZSeries]:
    """Coordinates along ``v_0..v_{N-1}`` of a class-valued series on one sector."""
    out = [ZSeries({}, s.depth) for _ in range(spec.N)]
    if not s.coeffs:
        return out
    f = next(iter(s.coeffs.values())).sector
    for i in range(spec.N):
        if spec.c[i] == f:
            ri, si = spec.r[i], spec.sigma[i]
            out[i] = s.map(lambda cl, ri=ri, si=si: cl.coefficient(ri) / si)
    return out


def wps_column(spec: WpsSpec, j: int, d, depth=None):
    """Returns ``(novikov_exponent, components)`` for column ``j`` at J-degree ``d``."""
    d = Fraction(d)
    s = wps_column_class(spec, j, d)
    return d - spec.c[j], [x.truncate(depth) for x in components(spec, s)]


def _column_degrees(spec: WpsSpec, j, bound):
    bound = Fraction(bound)
    out = set()
    for f in spec.sectors:
        k = 0
        while f + k - spec.c[j] <= bound:
            e = f + k - spec.c[j]
            if e >= 0:
                out.add(e)
            k += 1
    return sorted(out)


def wps_target(spec: WpsSpec) -> TargetSpec:
    N = spec.N
    den = lcm_all(w for w in spec.weights)
    unit = tuple(ONE if i == 0 else ZERO for i in range(N))
    # P . v_j = (sigma_j / sigma_j') v_j' with j' the next power on the same sector
    mult = [[ZERO] * N for _ in range(N)]
    for j in range(N):
        if spec.r[j] < spec.sector_dim[spec.c[j]]:
            jp = spec.index(spec.c[j], spec.r[j] + 1)
            mult[jp][j] = spec.sigma[j] / spec.sigma[jp]
    p_index = spec.index(Fraction(0), 1)
    coords = tuple((ONE / spec.sigma[p_index]) if i == p_index else ZERO for i in range(N))
    hyper = Divisor("P", coords, tuple(tuple(row) for row in mult), lambda e: e)
    return TargetSpec(
        name="P(" + ",".join(map(str, spec.weights)) + ")",
        basis=tuple(spec.name(j) for j in range(N)),
        pairing=spec.pairing,
        hat=spec.hat,
        monoid=DegreeMonoid("scalar", 1, den),
        column=lambda j, e, depth: wps_column(spec, j, Fraction(e) + spec.c[j], depth)[1],
        column_degrees=lambda j, bound: _column_degrees(spec, j, bound),
        unit=unit,
        divisors=(hyper,),
        dim=spec.n,
        class_degree=tuple(spec.r[j] + spec.age(spec.c[j]) for j in range(N)),
        c1=lambda e: spec.N * Fraction(e),
        meta={"kind": "wps", "weights": list(spec.weights)},
    )


def wps_two_point(spec: WpsSpec, d_max):
    return two_point(wps_target(spec), d_max)[2]


# --------------------------------------------------------------------------
# closed-form bilinear route


def _monomials(spec: WpsSpec, s: ZSeries):
    """Split a class-valued series into ``{(sector, power): scalar ZSeries}``."""
    out = {}
    if not s.coeffs:
        return out
    f = next(iter(s.coeffs.values())).sector
    for p in range(spec.sector_dim[f] + 1):
        comp = s.map(lambda cl, p=p: cl.coefficient(p))
        if comp:
            out[(f, p)] = comp
    return out


def wps_closed_form(spec: WpsSpec, d) -> Dict:
    """Degree-``d`` invariants from the bilinear generating identity.

    Forms the tensor ``sum_s (1/g_s) E_s(d1; z1) (x) E_hat(s)(d2; z2)`` over
    J-degree splittings ``d1 + d2 = d + c_s + c_hat(s)``, where ``E_s(d1)`` is
    the class-valued column and ``g_s = sigma_s sigma_hat(s) / m_s``, divides by
    ``z1 + z2`` and converts coefficients of ``P^a 1_f (x) P^b 1_g`` into
    invariants through sector duality. The result is keyed by
    ``(r_j, r_k, c_j, c_k)`` and maps ``(k, l)`` to ``<v_j psi^k, v_k psi^l>_d``.

    This route never touches the Gram solve or the matrix adjoint.
    """
    d = Fraction(d)
    if d <= 0:
        raise ValueError("closed form is stated for d > 0")
    N = spec.N
    dims = spec.sector_dim

    def dual_index(f, p):
        """Index i with v_i proportional to the Poincare dual partner of P^p 1_f."""
        g = frac_part(1 - f)
        return spec.index(g, dims[f] - p)

    tensor: Dict = {}
    for s in range(N):
        # the hat partner by sector duality, independent of the Gram solve
        sh = dual_index(spec.c[s], spec.r[s])
        g_s = spec.sigma[s] * spec.sigma[sh] / spec.m[s]
        total = d + spec.c[s] + spec.c[sh]
        for f1 in spec.sectors:
            k1 = 0
            while f1 + k1 <= total:
                d1 = f1 + k1
                d2 = total - d1
                k1 += 1
                if d1 < spec.c[s] or d2 < spec.c[sh] or frac_part(d2) not in dims:
                    continue
                E1 = _monomials(spec, wps_column_class(spec, s, d1))
                E2 = _monomials(spec, wps_column_class(spec, sh, d2))
                for key1, x in E1.items():
                    for key2, y in E2.items():
                        t = BiZSeries.outer(x, y) * (1 / g_s)
                        key = key1 + key2
                        tensor[key] = tensor[key] + t if key in tensor else t
    out: Dict = {}
    for (f1, p1, f2, p2), t in tensor.items():
        q = divide_by_z1_plus_z2(t)
        # tensor = sum <v_j, v_k> v^j (x) v^k with v^j = sigma_hj P^{r_hj} 1_{c_hj} / g_j
        j = dual_index(f1, p1)
        k = dual_index(f2, p2)
        hj, hk = spec.index(f1, p1), spec.index(f2, p2)
        gj = spec.sigma[j] * spec.sigma[hj] / spec.m[j]
        gk = spec.sigma[k] * spec.sigma[hk] / spec.m[k]
        scale = gj * gk / (spec.sigma[hj] * spec.sigma[hk])
        vals = {(-e1 - 1, -e2 - 1): c * scale for (e1, e2), c in q.coeffs.items() if c}
        if vals:
            out[(spec.r[j], spec.r[k], spec.c[j], spec.c[k])] = vals
    return out


def closed_form_as_table(spec: WpsSpec, degrees) -> InvariantTable:
    """Closed-form values re-keyed as an :class:`InvariantTable` over basis indices."""
    t = wps_target(spec)
    values = {}
    for d in degrees:
        if d <= 0:
            continue
        for (rj, rk, cj, ck), vals in wps_closed_form(spec, d).items():
            a, b = spec.index(cj, rj), spec.index(ck, rk)
            for (k, l), v in vals.items():
                values[(a, k, b, l, Fraction(d))] = v
    return InvariantTable(t.name, t.basis, t.monoid, values, None, [Fraction(d) for d in degrees if d > 0])
