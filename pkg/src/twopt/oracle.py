"""Genus-zero descendant invariants of P^1 and P^2 by universal relations.

Reduction order: degree 0 closed form, then string, dilaton and divisor
removal, then Kontsevich's recursion for primary point counts on P^2, and
topological recursion for anything carrying psi classes. TRR needs three
marked points; smaller correlators get extra divisor insertions first (the
divisor equation read backwards).

Insertions are pairs ``(k, a)`` meaning ``psi^k P^a``.
"""
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Dict, Tuple

from .algebra import ZERO

Insertion = Tuple[int, int]


class DescendantOracle:
    """Memoized correlators ``<tau_{k_1}(P^{a_1}) ... >_{0,n,d}`` on P^r.

    ``schedule`` picks which psi-carrying point TRR strips and which two points
    sit on the other side; every schedule must give the same numbers.
    """

    def __init__(self, r: int, d_max: int = 3, n_max: int = 8, k_max: int = 16, schedule: int = 0):
        if r not in (1, 2):
            raise ValueError("the oracle covers P^1 and P^2 only")
        self.r = r
        self.d_max, self.n_max, self.k_max = d_max, n_max, k_max
        self.schedule = schedule
        self.memo: Dict = {}
        self._kont: Dict[int, Fraction] = {}

    # -- bookkeeping ---------------------------------------------------
    def _key(self, ins, d):
        return (d, tuple(sorted(ins)))

    def admissible(self, ins, d) -> bool:
        n = len(ins)
        return sum(k + a for k, a in ins) == self.r + (self.r + 1) * d + n - 3

    def _check_bounds(self, ins, d):
        if d > self.d_max or len(ins) > self.n_max + 2 or any(k > self.k_max for k, _ in ins):
            raise ValueError(f"query {ins} at degree {d} exceeds oracle bounds")

    # -- public -----------------------------------------------------------
    def correlator(self, ins, d) -> Fraction:
        ins = tuple((int(k), int(a)) for k, a in ins)
        self._check_bounds(ins, d)
        key = self._key(ins, d)
        if key in self.memo:
            return self.memo[key]
        val = self._compute(key[1], d)
        self.memo[key] = val
        return val

    # -- recursion ----------------------------------------------------------
    def _compute(self, ins, d) -> Fraction:
        r = self.r
        if any(a < 0 or a > r or k < 0 for k, a in ins):
            return ZERO
        if not self.admissible(ins, d):
            return ZERO
        n = len(ins)
        if d == 0:
            if n < 3 or sum(a for _, a in ins) != r:
                return ZERO
            out = Fraction(factorial(n - 3))
            for k, _ in ins:
                out /= factorial(k)
            return out
        rest = list(ins)
        if (0, 0) in ins:
            rest.remove((0, 0))
            return sum((self.correlator(_lower(rest, j), d) for j in range(len(rest)) if rest[j][0] > 0), ZERO)
        if (1, 0) in ins:
            rest.remove((1, 0))
            return (len(rest) - 2) * self.correlator(rest, d)
        if (0, 1) in ins:
            rest.remove((0, 1))
            return self._divisor_expand(rest, d)
        if all(k == 0 for k, _ in ins):
            return self._primary(ins, d)
        if n >= 3:
            return self._trr(ins, d)
        return self._lift(ins, d)

    def _divisor_expand(self, rest, d):
        """``<P, rest>_d`` by the divisor equation."""
        out = d * self.correlator(rest, d)
        for j, (k, a) in enumerate(rest):
            if k > 0 and a + 1 <= self.r:
                out += self.correlator(_raise(rest, j), d)
        return out

    def _lift(self, ins, d):
        """Solve ``<P, X>_d = d <X>_d + corrections`` for ``<X>_d``."""
        bigger = [(0, 1)] + list(ins)
        full = self._trr(bigger, d) if len(bigger) >= 3 else self._lift(bigger, d)
        corr = ZERO
        for j, (k, a) in enumerate(ins):
            if k > 0 and a + 1 <= self.r:
                corr += self.correlator(_raise(list(ins), j), d)
        return (full - corr) / d

    def _trr(self, ins, d):
        ins = list(ins)
        n = len(ins)
        carriers = [i for i in range(n) if ins[i][0] > 0]
        if self.schedule == 0:
            i = carriers[0]
            others = [j for j in range(n) if j != i][:2]
        else:
            i = max(carriers, key=lambda t: (ins[t][0], t))
            others = [j for j in range(n) if j != i][-2:]
        k1, a1 = ins[i]
        fixed = [ins[j] for j in others]
        free = [ins[j] for j in range(n) if j != i and j not in others]
        out = ZERO
        r = self.r
        for size in range(len(free) + 1):
            for A in combinations(range(len(free)), size):
                left = [free[t] for t in A]
                right = [free[t] for t in range(len(free)) if t not in A]
                for d1 in range(d + 1):
                    d2 = d - d1
                    for e in range(r + 1):
                        x = self.correlator([(k1 - 1, a1)] + left + [(0, e)], d1)
                        if not x:
                            continue
                        y = self.correlator([(0, r - e)] + fixed + right, d2)
                        out += x * y
        return out

    def _primary(self, ins, d):
        if self.r == 1:
            return Fraction(1) if (d == 1 and not ins) else ZERO
        if all(a == 2 for _, a in ins) and len(ins) == 3 * d - 1:
            return self.kontsevich(d)
        return ZERO

    def kontsevich(self, d) -> Fraction:
        """Number of rational plane curves of degree d through 3d-1 points."""
        if d in self._kont:
            return self._kont[d]
        if d == 1:
            val = Fraction(1)
        else:
            splits = range(1, d) if self.schedule == 0 else range(d - 1, 0, -1)
            val = ZERO
            for d1 in splits:
                d2 = d - d1
                val += self.kontsevich(d1) * self.kontsevich(d2) * (
                    d1 * d1 * d2 * d2 * comb(3 * d - 4, 3 * d1 - 2)
                    - d1 ** 3 * d2 * comb(3 * d - 4, 3 * d1 - 1))
        self._kont[d] = val
        return val

    def two_point(self, a, k, b, l, d) -> Fraction:
        return self.correlator([(k, a), (l, b)], d)

    def one_point(self, a, k, d) -> Fraction:
        return self.correlator([(k, a)], d)


def _lower(ins, j):
    out = list(ins)
    k, a = out[j]
    out[j] = (k - 1, a)
    return out


def _raise(ins, j):
    out = list(ins)
    k, a = out[j]
    out[j] = (k - 1, a + 1)
    return out


def reconstruct(r: int, d_max: int, n_max: int, k_max: int, schedule: int = 0) -> Dict:
    """Every dimension-admissible correlator with ``1 <= d <= d_max`` and ``n <= n_max``."""
    if d_max > 3 or n_max > 8:
        raise ValueError("oracle bounds are d_max <= 3, n_max <= 8")
    orc = DescendantOracle(r, d_max, n_max, k_max, schedule)
    slots = [(k, a) for k in range(k_max + 1) for a in range(r + 1)]
    table = {}
    for d in range(1, d_max + 1):
        for n in range(0, n_max + 1):
            for ins in _multisets(slots, n):
                if orc.admissible(ins, d):
                    table[(d, ins)] = orc.correlator(ins, d)
    return table


def _multisets(items, n, start=0):
    if n == 0:
        yield ()
        return
    for i in range(start, len(items)):
        for rest in _multisets(items, n - 1, i):
            yield (items[i],) + rest


def two_point_oracle(r, a, k, b, l, d) -> Fraction:
    if d < 1:
        raise ValueError("two-point invariants need d >= 1")
    return DescendantOracle(r, max(d, 1)).two_point(a, k, b, l, d)


def check_against_oracle(inv, r: int, d_max: int, schedules=(0, 1)):
    """Compare every admissible two-point key of a P^r table against the oracle.

    ``inv`` is keyed by basis index ``a`` meaning ``P^a``; keys beyond the
    table's known psi-range are skipped.
    """
    from .engine import Report
    rep = Report(f"oracle[P^{r}, d<={d_max}]")
    d_max = min(int(d_max), 3)
    oracles = [DescendantOracle(r, d_max, schedule=s) for s in schedules]
    for d in range(1, d_max + 1):
        total = r - 1 + (r + 1) * d
        for a in range(r + 1):
            for b in range(r + 1):
                for k in range(0, total - a - b + 1):
                    l = total - a - b - k
                    if not inv.known(k, l):
                        rep.skipped += 1
                        continue
                    rep.checked += 1
                    got = inv.get(a, k, b, l, Fraction(d))
                    want = [o.two_point(a, k, b, l, d) for o in oracles]
                    if len(set(want)) != 1:
                        rep.fail(f"oracle schedules disagree at {(a, k, b, l, d)}: {want}")
                    elif got != want[0]:
                        rep.fail(f"{inv.label((a, k, b, l, Fraction(d)))} = {got}, oracle {want[0]}")
    return rep
