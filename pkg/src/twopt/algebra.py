"""Exact arithmetic kernels.

Everything here is immutable and built on :class:`fractions.Fraction`.

* :class:`CohClass` -- a class on one sector of the inertia stack, stored as a
  polynomial in divisor generators truncated by total degree.
* :class:`ZSeries` -- a Laurent polynomial/series in ``z`` with exponents
  ``<= top``; ``depth=None`` means exact (finite), otherwise only coefficients
  of ``z^e`` with ``e >= -depth`` are meaningful.
* :class:`BiZSeries` -- same in two variables ``z1, z2``; ``depth`` bounds the
  total degree ``-(e1 + e2)``.
* :class:`NovikovTable` -- a degree-indexed table over a :class:`DegreeMonoid`.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Any, Callable, Dict, Iterable, Mapping, Optional, Tuple

import sympy

from .errors import DivisibilityError, MonoidMismatchError, SectorMismatchError

Rat = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and sympy rationals to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def rat_str(x: Fraction) -> str:
    x = rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# cohomology classes


@dataclass(frozen=True)
class CohClass:
    sector: Fraction
    dim: int
    terms: Mapping[Tuple[int, ...], Fraction] = field(default_factory=dict)
    ngens: int = 1

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            if len(mono) != self.ngens:
                raise ValueError(f"monomial {mono} has wrong arity for {self.ngens} generators")
            if sum(mono) > self.dim or not c:
                continue
            clean[tuple(mono)] = rat(c)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "sector", rat(self.sector))

    @classmethod
    def scalar(cls, c, sector=0, dim=0, ngens=1):
        return cls(sector, dim, {(0,) * ngens: rat(c)}, ngens)

    @classmethod
    def generator(cls, i=0, sector=0, dim=1, ngens=1):
        mono = tuple(1 if t == i else 0 for t in range(ngens))
        return cls(sector, dim, {mono: ONE}, ngens)

    def zero(self):
        return CohClass(self.sector, self.dim, {}, self.ngens)

    def _check(self, other):
        if (self.sector, self.dim, self.ngens) != (other.sector, other.dim, other.ngens):
            raise SectorMismatchError(
                f"cannot combine classes on sectors {self.sector} (dim {self.dim}) "
                f"and {other.sector} (dim {other.dim})")

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, CohClass):
            other = CohClass.scalar(other, self.sector, self.dim, self.ngens)
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, ZERO) + c
        return CohClass(self.sector, self.dim, out, self.ngens)

    __radd__ = __add__

    def __neg__(self):
        return CohClass(self.sector, self.dim, {m: -c for m, c in self.terms.items()}, self.ngens)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, CohClass):
            c = rat(other)
            return CohClass(self.sector, self.dim, {m: c * v for m, v in self.terms.items()}, self.ngens)
        self._check(other)
        out: Dict[Tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                if sum(mono) > self.dim:
                    continue
                out[mono] = out.get(mono, ZERO) + c1 * c2
        return CohClass(self.sector, self.dim, out, self.ngens)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CohClass.scalar(1, self.sector, self.dim, self.ngens)
        for _ in range(k):
            out = out * self
        return out

    def coefficient(self, mono) -> Fraction:
        if isinstance(mono, int):
            mono = (mono,)
        return self.terms.get(tuple(mono), ZERO)

    def is_nilpotent(self):
        return not self.coefficient((0,) * self.ngens)

    def __repr__(self):
        if not self.terms:
            return f"0[{self.sector}]"
        parts = []
        for mono, c in sorted(self.terms.items()):
            name = "*".join(f"P{i}^{e}" if self.ngens > 1 else f"P^{e}" for i, e in enumerate(mono) if e)
            parts.append(f"{c}" + (f"*{name}" if name else ""))
        return " + ".join(parts) + f" [{self.sector}]"


# --------------------------------------------------------------------------
# one-variable series


def _is_zero(c) -> bool:
    return not c


class ZSeries:
    """Series ``sum_e c_e z^e``; coefficients are Fractions or CohClasses."""

    __slots__ = ("coeffs", "depth")

    def __init__(self, coeffs: Optional[Mapping[int, Any]] = None, depth: Optional[int] = None):
        clean = {}
        for e, c in (coeffs or {}).items():
            if depth is not None and e < -depth:
                continue
            if _is_zero(c):
                continue
            clean[int(e)] = c
        self.coeffs = clean
        self.depth = depth

    @classmethod
    def const(cls, c, depth=None):
        return cls({0: c}, depth)

    @classmethod
    def monomial(cls, c, e, depth=None):
        return cls({e: c}, depth)

    @property
    def top(self) -> Optional[int]:
        if self.coeffs:
            return max(self.coeffs)
        return None

    @property
    def bottom(self) -> Optional[int]:
        if self.coeffs:
            return min(self.coeffs)
        return None

    def is_exact(self):
        return self.depth is None

    def __getitem__(self, e):
        return self.coeffs.get(e, ZERO)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, ZSeries):
            return self.coeffs == other.coeffs and self.depth == other.depth
        if not other:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()) if all(isinstance(v, Fraction) for v in self.coeffs.values())
                     else len(self.coeffs), self.depth))

    def agrees(self, other: "ZSeries", depth: Optional[int] = None) -> bool:
        """Equality on the common window of validity."""
        d = _min_depth(self.depth, other.depth, depth)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[e] == other[e] for e in keys if d is None or e >= -d)

    def __add__(self, other):
        if not isinstance(other, ZSeries):
            other = ZSeries.const(other)
        depth = _min_depth(self.depth, other.depth)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return ZSeries(out, depth)

    __radd__ = __add__

    def __neg__(self):
        return ZSeries({e: -c for e, c in self.coeffs.items()}, self.depth)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ZSeries):
            return series_mul(self, other)
        return ZSeries({e: c * other for e, c in self.coeffs.items()}, self.depth)

    def __rmul__(self, other):
        return ZSeries({e: other * c for e, c in self.coeffs.items()}, self.depth)

    def truncate(self, depth: Optional[int]):
        if depth is None:
            return self
        return ZSeries(self.coeffs, _min_depth(self.depth, depth))

    def neg_z(self) -> "ZSeries":
        """Substitute ``z -> -z``."""
        return ZSeries({e: (c if e % 2 == 0 else -c) for e, c in self.coeffs.items()}, self.depth)

    def map(self, f: Callable[[Any], Any]) -> "ZSeries":
        return ZSeries({e: f(c) for e, c in self.coeffs.items()}, self.depth)

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            body = " + ".join(f"({c})z^{e}" for e, c in sorted(self.coeffs.items(), reverse=True))
        return f"ZSeries({body}; depth={self.depth})"


def _min_depth(*ds):
    ds = [d for d in ds if d is not None]
    return min(ds) if ds else None


def _product_depth(a: ZSeries, b: ZSeries) -> Optional[int]:
    # a truncated factor's unknown tail lies below -depth; it reaches the
    # product at most `top` of the other factor higher.
    cands = []
    for x, y in ((a, b), (b, a)):
        if x.depth is None:
            continue
        ytop = y.top
        if ytop is None:
            ytop = -(y.depth + 1) if y.depth is not None else None
        if ytop is None:
            continue
        cands.append(x.depth - ytop)
    return min(cands) if cands else None


def series_mul(a: ZSeries, b: ZSeries) -> ZSeries:
    """Truncated product; the result's depth follows :func:`_product_depth`."""
    if (not a.coeffs and a.depth is None) or (not b.coeffs and b.depth is None):
        return ZSeries({}, None)
    depth = _product_depth(a, b)
    out: Dict[int, Any] = {}
    for ea, ca in a.coeffs.items():
        for eb, cb in b.coeffs.items():
            e = ea + eb
            if depth is not None and e < -depth:
                continue
            t = ca * cb
            out[e] = out[e] + t if e in out else t
    return ZSeries(out, depth)


def invert_affine(c, w, b, depth: Optional[int] = None) -> ZSeries:
    """Expand ``1/(w*c + b*z)`` in powers of ``1/z``.

    ``c`` is a nilpotent :class:`CohClass` (the expansion terminates) or a
    rational scalar. A nonzero scalar ``c`` needs an explicit ``depth``.
    """
    w, b = rat(w), rat(b)
    if b == 0:
        raise ZeroDivisionError("invert_affine needs a nonzero z coefficient")
    if isinstance(c, CohClass):
        if not c.is_nilpotent():
            raise ValueError("invert_affine needs a nilpotent class")
        one = CohClass.scalar(1, c.sector, c.dim, c.ngens)
    else:
        c = rat(c)
        one = ONE
        if c and depth is None:
            raise ValueError("a nonzero scalar needs a truncation depth")
    out = {}
    power = one
    m = 0
    while True:
        e = -m - 1
        if depth is not None and e < -depth:
            break
        if _is_zero(power) or (not isinstance(c, CohClass) and m > 0 and c == 0):
            break
        out[e] = power * ((-w) ** m / b ** (m + 1))
        power = power * c
        m += 1
    return ZSeries(out, depth)


# --------------------------------------------------------------------------
# two-variable series


class BiZSeries:
    """Series in ``z1, z2`` with non-positive exponents.

    With ``depth=D`` the coefficients of ``z1^e1 z2^e2`` are meaningful for
    ``e1 + e2 >= -D``.
    """

    __slots__ = ("coeffs", "depth")

    def __init__(self, coeffs: Optional[Mapping[Tuple[int, int], Any]] = None, depth: Optional[int] = None):
        clean = {}
        for (e1, e2), c in (coeffs or {}).items():
            if depth is not None and e1 + e2 < -depth:
                continue
            if _is_zero(c):
                continue
            clean[(int(e1), int(e2))] = c
        self.coeffs = clean
        self.depth = depth

    @classmethod
    def outer(cls, x: ZSeries, y: ZSeries) -> "BiZSeries":
        """``x(z1) * y(z2)`` as a two-variable series."""
        cands = []
        if x.depth is not None:
            cands.append(x.depth - max(y.top or 0, 0))
        if y.depth is not None:
            cands.append(y.depth - max(x.top or 0, 0))
        depth = min(cands) if cands else None
        out = {}
        for e1, c1 in x.coeffs.items():
            for e2, c2 in y.coeffs.items():
                if depth is not None and e1 + e2 < -depth:
                    continue
                out[(e1, e2)] = c1 * c2
        return cls(out, depth)

    def __getitem__(self, key):
        return self.coeffs.get(key, ZERO)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, BiZSeries):
            return self.coeffs == other.coeffs and self.depth == other.depth
        return NotImplemented

    def agrees(self, other: "BiZSeries", depth: Optional[int] = None) -> bool:
        d = _min_depth(self.depth, other.depth, depth)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[k] == other[k] for k in keys if d is None or -(k[0] + k[1]) <= d)

    def __add__(self, other):
        depth = _min_depth(self.depth, other.depth)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return BiZSeries(out, depth)

    def __neg__(self):
        return BiZSeries({k: -c for k, c in self.coeffs.items()}, self.depth)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return BiZSeries({k: c * scalar for k, c in self.coeffs.items()}, self.depth)

    __rmul__ = __mul__

    def times_z1_plus_z2(self) -> "BiZSeries":
        out = {}
        for (e1, e2), c in self.coeffs.items():
            for k in ((e1 + 1, e2), (e1, e2 + 1)):
                out[k] = out[k] + c if k in out else c
        return BiZSeries(out, None if self.depth is None else self.depth - 1)

    def max_total(self) -> int:
        return max((-(a + b) for a, b in self.coeffs), default=0)

    def __repr__(self):
        body = " + ".join(f"({c})z1^{a}z2^{b}" for (a, b), c in sorted(self.coeffs.items())) or "0"
        return f"BiZSeries({body}; depth={self.depth})"


def divide_by_z1_plus_z2(t: BiZSeries) -> BiZSeries:
    """Exact quotient of ``t`` by ``z1 + z2``.

    In ``u = 1/z1, v = 1/z2`` we have ``z1 + z2 = (u + v)/(u v)``, so the
    quotient is ``u v q`` where ``t = (u + v) q``. ``q`` is solved one
    anti-diagonal at a time; the last equation of every anti-diagonal is the
    remainder, which must vanish.
    """
    for (e1, e2) in t.coeffs:
        if e1 > 0 or e2 > 0:
            raise ValueError(f"positive z-exponent {(e1, e2)} in dividend")
    top = t.max_total() if t.depth is None else t.depth
    q: Dict[Tuple[int, int], Any] = {}

    def T(a, b):
        return t.coeffs.get((-a, -b), ZERO)

    if T(0, 0):
        raise DivisibilityError(0, T(0, 0))
    for n in range(1, top + 1):
        prev = ZERO
        for a in range(n):
            val = T(a, n - a) - prev
            if not _is_zero(val):
                q[(a, n - 1 - a)] = val
            prev = val
        rem = T(n, 0) - prev
        if not _is_zero(rem):
            raise DivisibilityError(n, rem)
    out = {(-(a + 1), -(b + 1)): c for (a, b), c in q.items()}
    return BiZSeries(out, None if t.depth is None else t.depth + 1)


# --------------------------------------------------------------------------
# Novikov degrees


@dataclass(frozen=True)
class DegreeMonoid:
    """Either rational scalar degrees with bounded denominator or integer vectors."""

    kind: str = "scalar"
    rank: int = 1
    denominator: int = 1

    def zero(self):
        return Fraction(0) if self.kind == "scalar" else (0,) * self.rank

    def add(self, a, b):
        if self.kind == "scalar":
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def size(self, d) -> Fraction:
        return rat(d) if self.kind == "scalar" else Fraction(sum(d))

    def is_zero(self, d) -> bool:
        return self.size(d) == 0 if self.kind == "scalar" else not any(d)

    def validate(self, d):
        if self.kind == "scalar":
            d = rat(d)
            if d < 0 or self.denominator % d.denominator:
                raise MonoidMismatchError(f"degree {d} not in (1/{self.denominator})Z>=0")
            return d
        d = tuple(int(x) for x in d)
        if len(d) != self.rank or min(d) < 0:
            raise MonoidMismatchError(f"degree {d} not in N^{self.rank}")
        return d

    def enumerate(self, bound):
        """All degrees of size at most ``bound``, in deterministic order."""
        if self.kind == "scalar":
            n = int(Fraction(bound) * self.denominator)
            return [Fraction(i, self.denominator) for i in range(n + 1)]
        b = int(bound)
        return sorted((v for v in iproduct(range(b + 1), repeat=self.rank) if sum(v) <= b),
                      key=lambda v: (sum(v), v))

    def sort_key(self, d):
        return (self.size(d), d)

    def fmt(self, d) -> str:
        if self.kind == "scalar":
            return rat_str(d)
        return ",".join(str(x) for x in d)


class NovikovTable:
    """Degree -> value map over a :class:`DegreeMonoid`, truncated at ``bound``."""

    def __init__(self, monoid: DegreeMonoid, bound, data: Optional[Mapping] = None):
        self.monoid = monoid
        self.bound = bound
        self.data = {}
        for d, v in (data or {}).items():
            d = monoid.validate(d)
            if monoid.size(d) > Fraction(bound):
                raise MonoidMismatchError(f"degree {d} exceeds truncation bound {bound}")
            self.data[d] = v

    def __getitem__(self, d):
        return self.data[d]

    def get(self, d, default=None):
        return self.data.get(d, default)

    def __contains__(self, d):
        return d in self.data

    def __len__(self):
        return len(self.data)

    def degrees(self):
        return sorted(self.data, key=self.monoid.sort_key)

    def items(self):
        return [(d, self.data[d]) for d in self.degrees()]

    def __eq__(self, other):
        return (isinstance(other, NovikovTable) and self.monoid == other.monoid
                and self.data == other.data)


def novikov_convolve(a: NovikovTable, b: NovikovTable, mul=None, add=None, bound=None) -> NovikovTable:
    """Cauchy product ``sum_{d1 + d2 = d} a[d1] * b[d2]`` up to the common bound."""
    if a.monoid != b.monoid:
        raise MonoidMismatchError(f"cannot convolve {a.monoid} with {b.monoid}")
    mul = mul or (lambda x, y: x * y)
    add = add or (lambda x, y: x + y)
    if bound is None:
        bound = min(Fraction(a.bound), Fraction(b.bound))
    m = a.monoid
    out: Dict[Any, Any] = {}
    for d1 in a.degrees():
        for d2 in b.degrees():
            d = m.add(d1, d2)
            if m.size(d) > Fraction(bound):
                continue
            t = mul(a[d1], b[d2])
            out[d] = add(out[d], t) if d in out else t
    return NovikovTable(m, bound, out)


# --------------------------------------------------------------------------
# exact linear algebra (sympy backed)


def solve_linear(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly; raises ValueError when singular."""
    M = sympy.Matrix([[sympy.Rational(rat(v).numerator, rat(v).denominator) for v in row] for row in matrix])
    if M.rows != M.cols or M.det() == 0:
        raise ValueError("singular linear system")
    b = sympy.Matrix([sympy.Rational(rat(v).numerator, rat(v).denominator) for v in rhs])
    return [rat(x) for x in M.LUsolve(b)]


def invert_matrix(matrix):
    M = sympy.Matrix([[sympy.Rational(rat(v).numerator, rat(v).denominator) for v in row] for row in matrix])
    if M.det() == 0:
        raise ValueError("singular matrix")
    inv = M.inv()
    return [[rat(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


def determinant(matrix) -> Fraction:
    M = sympy.Matrix([[sympy.Rational(rat(v).numerator, rat(v).denominator) for v in row] for row in matrix])
    return rat(M.det())


def lcm_all(values: Iterable[int]) -> int:
    from math import lcm
    out = 1
    for v in values:
        out = lcm(out, int(v))
    return out


def rank(matrix) -> int:
    if not matrix:
        return 0
    M = sympy.Matrix([[sympy.Rational(rat(v).numerator, rat(v).denominator) for v in row] for row in matrix])
    return M.rank()
