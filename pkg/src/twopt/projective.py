"""Projective space P^n from the closed-form small J-function.

The column of ``P^j`` at degree ``d`` is ``(P + dz)^j / prod_{k=1}^d (P + kz)^{n+1}``
in ``H*(P^n) = Q[P]/P^{n+1}``.
"""
from fractions import Fraction

from .algebra import ONE, ZERO, CohClass, DegreeMonoid, ZSeries, invert_affine
from .engine import Divisor, TargetSpec, two_point


def _affine(c: CohClass, a) -> ZSeries:
    """``c + a z`` as an exact series."""
    return ZSeries({0: c, 1: CohClass.scalar(a, c.sector, c.dim)})


def pn_column_class(n: int, j: int, d: int) -> ZSeries:
    if not 0 <= j <= n:
        raise ValueError(f"P^{j} is not a basis class of P^{n}")
    if d < 0:
        raise ValueError("degree must be non-negative")
    P = CohClass.generator(0, 0, n)
    out = ZSeries.const(CohClass.scalar(1, 0, n))
    for _ in range(j):
        out = out * _affine(P, d)
    for k in range(1, d + 1):
        inv = invert_affine(P, 1, k)
        for _ in range(n + 1):
            out = out * inv
    return out


def pn_column(n: int, j: int, d: int, depth=None):
    """Components along ``1, P, ..., P^n`` of the normalized column of ``P^j``."""
    s = pn_column_class(n, j, d)
    return [s.map(lambda c, i=i: c.coefficient(i)).truncate(depth) for i in range(n + 1)]


def pn_target(n: int) -> TargetSpec:
    if n < 1:
        raise ValueError("n must be at least 1")
    N = n + 1
    shift = tuple(tuple(ONE if i == j + 1 else ZERO for j in range(N)) for i in range(N))
    hyper = Divisor("P", tuple(ONE if i == 1 else ZERO for i in range(N)), shift, lambda d: d)
    return TargetSpec(
        name=f"P^{n}",
        basis=tuple("1" if i == 0 else ("P" if i == 1 else f"P^{i}") for i in range(N)),
        pairing=(ONE,) * N,
        hat=tuple(n - i for i in range(N)),
        monoid=DegreeMonoid("scalar", 1, 1),
        column=lambda j, d, depth: pn_column(n, j, int(d), depth),
        unit=tuple(ONE if i == 0 else ZERO for i in range(N)),
        divisors=(hyper,),
        dim=n,
        class_degree=tuple(Fraction(i) for i in range(N)),
        c1=lambda d: (n + 1) * Fraction(d),
        meta={"kind": "pn", "n": n},
    )


def pn_two_point(n: int, d_max: int):
    """All ``<P^a psi^k, P^b psi^l>_{0,2,d}`` for ``1 <= d <= d_max``."""
    return two_point(pn_target(n), d_max)[2]
