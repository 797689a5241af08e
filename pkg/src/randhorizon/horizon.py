"""Random horizon tau: Azema pair, enlarged filtration, deflator, hazard triplet.

A random time is a tuple with one entry per outcome, each an int in 0..T or
POS_INF (meaning tau > T).  Only comparisons against integer times are ever
evaluated, so the infinite value never takes part in arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .extended import POS_INF
from .prob import (
    ONE, ZERO, ConsistencyError, DomainError, FilteredSpace, Measure, Partition,
    E, measurable,
)

INF_TIME = POS_INF


@dataclass(frozen=True)
class AzemaPair:
    G: tuple        # G[t] = P(tau > t | F_t)
    Gt: tuple       # Gt[t] = P(tau >= t | F_t)

    def G_prev(self, t: int) -> tuple:
        """G_{t-1}; for t = 0 the survival probability before time 0 is 1."""
        if t == 0:
            return (ONE,) * len(self.G[0])
        return self.G[t - 1]


@dataclass(frozen=True)
class Deflator:
    ZF: tuple
    Qtilde: Measure


@dataclass(frozen=True)
class HazardTriplet:
    m: tuple
    NG: tuple
    DoF: tuple


def check_tau(space: FilteredSpace, tau: Sequence) -> tuple:
    if len(tau) != space.n:
        raise DomainError("tau needs one value per outcome")
    out = []
    for w, v in enumerate(tau):
        if v == INF_TIME:
            out.append(INF_TIME)
        elif isinstance(v, int) and not isinstance(v, bool) and 0 <= v <= space.horizon:
            out.append(v)
        else:
            raise DomainError(f"tau({space.outcomes[w]!r}) = {v!r} is outside 0..T or inf")
    return tuple(out)


def azema(space: FilteredSpace, tau: Sequence) -> AzemaPair:
    P = space.P
    G, Gt = [], []
    for t in range(space.horizon + 1):
        F = space.filtration[t]
        G.append(E(tuple(ONE if v > t else ZERO for v in tau), F, P))
        Gt.append(E(tuple(ONE if v >= t else ZERO for v in tau), F, P))
    return AzemaPair(tuple(G), tuple(Gt))


def enlarge(space: FilteredSpace, tau: Sequence) -> tuple:
    """Partitions G_0..G_T: each F_t block split by {tau=s} (s <= t) and {tau>t}."""
    parts = []
    for t in range(space.horizon + 1):
        labels = [v if v <= t else "alive" for v in tau]
        parts.append(space.filtration[t].intersect(labels))
    return tuple(parts)


def reduce(X: Sequence, t: int, space: FilteredSpace, tau: Sequence, Gfilt: Sequence[Partition]) -> tuple:
    """F_{t-1}-measurable X' with X' = X on {tau >= t}; 0 on blocks missing {tau >= t}."""
    if not measurable(X, Gfilt[t - 1]):
        raise DomainError(f"variable is not G_{t - 1}-measurable")
    out = [ZERO] * space.n
    for b in space.filtration[t - 1].blocks:
        alive = [w for w in b if tau[w] >= t]
        if alive:
            v = X[alive[0]]
            for w in b:
                out[w] = v
    return tuple(out)


def deflator(space: FilteredSpace, az: AzemaPair) -> Deflator:
    n, P = space.n, space.P
    Z = [(ONE,) * n]
    for s in range(1, space.horizon + 1):
        pos = tuple(ONE if g > 0 else ZERO for g in az.Gt[s])
        p = E(pos, space.filtration[s - 1], P)
        prev = az.G[s - 1]
        row = []
        for w in range(n):
            factor = ZERO
            if pos[w]:
                if p[w] == 0:
                    raise ConsistencyError("P(Gtilde_s > 0 | F_{s-1}) vanishes where Gtilde_s > 0")
                factor = ONE / p[w]
            if prev[w] == 0:
                factor += ONE
            row.append(Z[-1][w] * factor)
        Z.append(tuple(row))
    for s in range(1, space.horizon + 1):
        if E(Z[s], space.filtration[s - 1], P) != Z[s - 1]:
            raise ConsistencyError(f"Z^F fails the martingale property at time {s}")
    return Deflator(tuple(Z), P.with_density(Z[-1]))


def default_density(az: AzemaPair, t: int) -> tuple:
    """P(tau = t | F_t) = Gtilde_t - G_t."""
    return tuple(a - b for a, b in zip(az.Gt[t], az.G[t]))


def hazard(space: FilteredSpace, tau: Sequence, az: AzemaPair) -> HazardTriplet:
    n, P, T = space.n, space.P, space.horizon
    m = [(ONE,) * n]
    for s in range(1, T + 1):
        pe = E(az.Gt[s], space.filtration[s - 1], P)
        m.append(tuple(m[-1][w] + az.Gt[s][w] - pe[w] for w in range(n)))
    D, acc = [], (ZERO,) * n
    for s in range(T + 1):
        acc = tuple(a + b for a, b in zip(acc, default_density(az, s)))
        D.append(acc)
    NG = []
    for t in range(T + 1):
        row = []
        for w in range(n):
            v = ONE if tau[w] <= t else ZERO
            for s in range(1, t + 1):
                if tau[w] < s:
                    break
                gt = az.Gt[s][w]
                if gt == 0:
                    raise ConsistencyError("Gtilde vanishes on {tau >= s}")
                v -= (az.Gt[s][w] - az.G[s][w]) / gt
            row.append(v)
        NG.append(tuple(row))
    return HazardTriplet(tuple(m), tuple(NG), tuple(D))


def transform_T(M: Sequence[Sequence[Fraction]], space: FilteredSpace, tau: Sequence, az: AzemaPair) -> tuple:
    """T(M)_t = sum_{u <= tau^t} [(G_{u-1}/Gt_u) dM_u + E(1{Gt_u = 0} dM_u | F_{u-1})]."""
    n, P, T = space.n, space.P, space.horizon
    incr = [None]
    for u in range(1, T + 1):
        dM = [M[u][w] - M[u - 1][w] for w in range(n)]
        corr = E(tuple(dM[w] if az.Gt[u][w] == 0 else ZERO for w in range(n)),
                 space.filtration[u - 1], P)
        step = []
        for w in range(n):
            if az.Gt[u][w] > 0:
                step.append(az.G[u - 1][w] / az.Gt[u][w] * dM[w] + corr[w])
            else:
                step.append(None)  # never used: Gt_u > 0 on {tau >= u}
        incr.append(step)
    out = [(ZERO,) * n]
    for t in range(1, T + 1):
        row = []
        for w in range(n):
            v = out[-1][w]
            if tau[w] >= t:
                v = v + incr[t][w]
            row.append(v)
        out.append(tuple(row))
    return tuple(out)


def is_martingale(X: Sequence, parts: Sequence[Partition], mu: Measure) -> bool:
    """Adapted to parts and E_mu[X_t | parts[t-1]] = X_{t-1} on mu-positive blocks."""
    for t, part in enumerate(parts):
        if not measurable(X[t], part):
            return False
    for t in range(1, len(parts)):
        for b in parts[t - 1].blocks:
            m = mu.mass(b)
            if m == 0:
                continue
            if sum((mu.weights[w] * X[t][w] for w in b if mu.weights[w]), ZERO) != m * X[t - 1][b[0]]:
                return False
    return True


def is_predictable(X: Sequence, parts: Sequence[Partition]) -> bool:
    """X_t measurable w.r.t. parts[t-1] for t >= 1, X_0 w.r.t. parts[0]."""
    return measurable(X[0], parts[0]) and all(measurable(X[t], parts[t - 1]) for t in range(1, len(parts)))


__all__ = [
    "INF_TIME", "AzemaPair", "Deflator", "HazardTriplet", "check_tau", "azema", "enlarge",
    "reduce", "deflator", "default_density", "hazard", "transform_T", "is_martingale",
    "is_predictable",
]
