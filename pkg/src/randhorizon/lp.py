"""Exact rational simplex for the per-atom minimax and convex-hull problems.

Both problems go through one dense tableau routine using Bland's rule
(lowest-index entering column, lowest-index leaving basic variable on ties),
so every run is deterministic and terminates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .extended import NEG_INF, POS_INF, is_inf

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class MinimaxInstance:
    rows: tuple  # of (c, a) with a a tuple of length d

    @property
    def dim(self) -> int:
        return len(self.rows[0][1]) if self.rows else 0


@dataclass(frozen=True)
class LPOutcome:
    value: object
    argmin: Optional[tuple] = None
    certificate: Optional[tuple] = None

    @property
    def bounded(self) -> bool:
        return not is_inf(self.value)


@dataclass(frozen=True)
class HullOutcome:
    contains: bool
    weights: Optional[tuple] = None
    separator: Optional[tuple] = None


def dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    s = ZERO
    for a, b in zip(x, y):
        if a and b:
            s += a * b
    return s


class _Tableau:
    """min c.x s.t. A x = b, x >= 0, started from a given feasible basis."""

    def __init__(self, A, b, c, basis):
        self.m = len(A)
        self.n = len(c)
        self.rows = [list(r) + [rhs] for r, rhs in zip(A, b)]
        self.basis = list(basis)
        # objective row holds reduced costs; last entry is -objective value
        obj = list(c) + [ZERO]
        for i, j in enumerate(self.basis):
            cj = obj[j]
            if cj:
                r = self.rows[i]
                obj = [o - cj * v for o, v in zip(obj, r)]
        self.obj = obj

    def pivot(self, i: int, j: int):
        r = self.rows[i]
        p = r[j]
        if p != 1:
            r = [v / p for v in r]
            self.rows[i] = r
        for k in range(self.m):
            if k != i:
                f = self.rows[k][j]
                if f:
                    self.rows[k] = [a - f * b for a, b in zip(self.rows[k], r)]
        f = self.obj[j]
        if f:
            self.obj = [a - f * b for a, b in zip(self.obj, r)]
        self.basis[i] = j

    def run(self):
        """Return ("optimal", None) or ("unbounded", entering column)."""
        while True:
            enter = next((j for j in range(self.n) if self.obj[j] < 0), None)
            if enter is None:
                return "optimal", None
            best = None
            for i in range(self.m):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rows[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded", enter
            self.pivot(best[1], enter)

    def solution(self):
        x = [ZERO] * self.n
        for i, j in enumerate(self.basis):
            x[j] = self.rows[i][-1]
        return x

    def ray(self, enter: int):
        d = [ZERO] * self.n
        d[enter] = ONE
        for i, j in enumerate(self.basis):
            d[j] = -self.rows[i][enter]
        return d


def _prepare_rows(rows):
    """Handle infinite payoffs and duplicates; return (status, rows)."""
    if not rows:
        raise ValueError("minimax instance needs at least one row")
    if any(is_inf(c) and c > 0 for c, _ in rows):
        return POS_INF, None
    finite = []
    seen = set()
    for c, a in rows:
        if is_inf(c):
            continue
        key = (c, tuple(a))
        if key not in seen:
            seen.add(key)
            finite.append((Fraction(c), tuple(Fraction(v) for v in a)))
    if not finite:
        return NEG_INF, None
    return None, finite


def minimax(inst) -> LPOutcome:
    """min over theta of max_j (c_j - theta . a_j), exactly.

    Rows whose payoff is -inf never bind and are dropped; any +inf payoff
    makes the value +inf.  An unbounded instance returns -inf with a
    certificate theta* satisfying theta* . a_j >= 1 for every finite row.
    """
    rows = inst.rows if isinstance(inst, MinimaxInstance) else tuple(inst)
    d = len(rows[0][1]) if rows else 0
    status, rows = _prepare_rows(rows)
    if status is POS_INF:
        return LPOutcome(POS_INF, None, None)
    if status is NEG_INF:
        return LPOutcome(NEG_INF, None, None)
    cmax = max(c for c, _ in rows)
    if d == 0 or all(not any(a) for _, a in rows):
        return LPOutcome(cmax, (ZERO,) * d, None)
    m = len(rows)
    # columns: z'+, z'-, theta+ (d), theta- (d), slacks (m); z = cmax + z'
    n = 2 + 2 * d + m
    A, b = [], []
    for j, (c, a) in enumerate(rows):
        r = [ZERO] * n
        r[0], r[1] = -ONE, ONE
        for k in range(d):
            r[2 + k] = -a[k]
            r[2 + d + k] = a[k]
        r[2 + 2 * d + j] = ONE
        A.append(r)
        b.append(cmax - c)
    cost = [ZERO] * n
    cost[0], cost[1] = ONE, -ONE
    tab = _Tableau(A, b, cost, [2 + 2 * d + j for j in range(m)])
    state, enter = tab.run()
    if state == "unbounded":
        ray = tab.ray(enter)
        theta = tuple(ray[2 + k] - ray[2 + d + k] for k in range(d))
        lo = min(dot(theta, a) for _, a in rows)
        if lo <= 0:
            raise AssertionError("unbounded ray is not a strict immediate-profit direction")
        theta = tuple(v / lo for v in theta)
        return LPOutcome(NEG_INF, None, theta)
    x = tab.solution()
    theta = tuple(x[2 + k] - x[2 + d + k] for k in range(d))
    value = cmax + x[0] - x[1]
    check = max(c - dot(theta, a) for c, a in rows)
    if check != value:
        raise AssertionError(f"minimax post-check failed: {check} != {value}")
    return LPOutcome(value, theta, None)


def _hull_scalar(vs):
    if 0 in vs:
        first = vs.index(0)
        return HullOutcome(True, tuple(ONE if i == first else ZERO for i in range(len(vs))))
    lo_i = min(range(len(vs)), key=lambda i: (vs[i], i))
    hi_i = max(range(len(vs)), key=lambda i: (vs[i], -i))
    lo, hi = vs[lo_i], vs[hi_i]
    if lo < 0 < hi:
        w = [ZERO] * len(vs)
        w[lo_i] = hi / (hi - lo)
        w[hi_i] = -lo / (hi - lo)
        return HullOutcome(True, tuple(w))
    x = -ONE / lo if lo > 0 else -ONE / hi
    return HullOutcome(False, None, (x,))


def hull_contains_zero(vectors: Sequence[Sequence[Fraction]], method: str = "auto") -> HullOutcome:
    """Decide 0 in conv(vectors).

    True comes with convex weights reproducing 0.  False comes with a
    separator x such that x . v < 0 for every v, scaled so the largest of
    these products is exactly -1.
    """
    vs = [tuple(Fraction(c) for c in v) for v in vectors]
    if not vs:
        raise ValueError("hull of an empty set")
    d = len(vs[0])
    if d == 0:
        return HullOutcome(True, (ONE,) + (ZERO,) * (len(vs) - 1))
    if d == 1 and method == "auto":
        return _hull_scalar([v[0] for v in vs])
    k = len(vs)
    m = d + 1
    # columns: lambda (k), artificials (m); rows: sum lambda = 1, sum lambda v = 0
    A, b = [], []
    for i in range(m):
        r = [ZERO] * (k + m)
        for j, v in enumerate(vs):
            r[j] = ONE if i == 0 else v[i - 1]
        r[k + i] = ONE
        A.append(r)
        b.append(ONE if i == 0 else ZERO)
    cost = [ZERO] * k + [ONE] * m
    tab = _Tableau(A, b, cost, [k + i for i in range(m)])
    state, _ = tab.run()
    assert state == "optimal"
    optimum = -tab.obj[-1]
    if optimum == 0:
        x = tab.solution()
        return HullOutcome(True, tuple(x[:k]))
    y = [ONE - tab.obj[k + i] for i in range(m)]
    w = tuple(y[1:])
    top = max(dot(w, v) for v in vs)
    if top >= 0:
        raise AssertionError("Farkas certificate does not separate")
    return HullOutcome(False, None, tuple(c / -top for c in w))


__all__ = ["MinimaxInstance", "LPOutcome", "HullOutcome", "minimax", "hull_contains_zero", "dot"]
