"""Risk decompositions of vulnerable-claim price processes and two G-martingale identities.

Processes are indexed [t][w].  Integrals against processes stopped at tau
only collect increments at times s <= tau, which is where G_{s-1} > 0 and
Gtilde_s > 0, so the weights 1/G_{s-1} and 1/Gtilde_s are always defined.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .horizon import AzemaPair, HazardTriplet, is_martingale, is_predictable, transform_T
from .market import angle, bracket
from .pricing import ClaimKit, recovery_process
from .prob import ONE, ZERO, DomainError, FilteredSpace, E

TERMS = ("initial", "trend", "PFRisk", "PureDefault", "CRRisk_benefit", "CRRisk_flow")


def _zeros(n):
    return (ZERO,) * n


def _accumulate(incr: Sequence, n: int) -> tuple:
    """Partial sums of increments incr[1..T] starting from 0 at t = 0."""
    out = [_zeros(n)]
    for s in range(1, len(incr)):
        out.append(tuple(a + b for a, b in zip(out[-1], incr[s])))
    return tuple(out)


def _incr(X: Sequence, s: int) -> tuple:
    return tuple(a - b for a, b in zip(X[s], X[s - 1]))


def stopped_integral(H, X: Sequence, tau: Sequence) -> tuple:
    """sum_{1 <= s <= t ^ tau} H(s, w) dX_s(w); H is called only at s <= tau(w)."""
    n = len(X[0])
    incr = [None]
    for s in range(1, len(X)):
        dX = _incr(X, s)
        incr.append(tuple(H(s, w) * dX[w] if tau[w] >= s and dX[w] else ZERO for w in range(n)))
    return _accumulate(incr, n)


@dataclass(frozen=True)
class Quadruplet:
    M: tuple
    N: tuple
    Nbar: tuple
    Vtilde: tuple
    xi: tuple
    A: tuple


def quadruplet(kit: ClaimKit, X: Sequence, space: FilteredSpace, az: AzemaPair, haz: HazardTriplet,
               literal: bool = False) -> Quadruplet:
    """(M, N, Nbar, Vtilde) for the F-price X; zero-recovery entries carry the class-1 signs."""
    n, T, P = space.n, space.horizon, space.P
    F = space.filtration
    K, recov = recovery_process(kit, literal)
    sign = ONE if recov else -ONE   # class 1: Vtilde = E[X (Gt - G)], N = X . D^o - Vtilde
    xi = [tuple(X[0])]
    dM, dV, dN, dNbar, dA = [None], [None], [None], [None], [None]
    for s in range(1, T + 1):
        ex = E(X[s], F[s - 1], P)
        xi.append(ex)
        dM.append(tuple(a - b for a, b in zip(X[s], ex)))
        dA.append(tuple(a - b for a, b in zip(ex, X[s - 1])))
        gap = tuple(az.Gt[s][w] - az.G[s][w] for w in range(n))
        KX = tuple(sign * (K[s][w] - X[s][w]) for w in range(n))
        v = E(tuple(KX[w] * gap[w] for w in range(n)), F[s - 1], P)
        dV.append(v)
        dD = _incr(haz.DoF, s)
        dN.append(tuple(KX[w] * dD[w] - v[w] for w in range(n)))
        XG = tuple(X[s][w] * az.Gt[s][w] for w in range(n))
        eXG = E(XG, F[s - 1], P)
        dm = _incr(haz.m, s)
        dNbar.append(tuple(XG[w] - eXG[w] - az.G[s - 1][w] * dM[s][w] - ex[w] * dm[w] for w in range(n)))
    return Quadruplet(_accumulate(dM, n), _accumulate(dN, n), _accumulate(dNbar, n),
                      _accumulate(dV, n), tuple(xi), _accumulate(dA, n))


@dataclass(frozen=True)
class DecompositionReport:
    terms: dict            # name -> G-adapted process
    total: tuple           # sum of all terms
    target: tuple          # K_tau 1{tau <= t} + X_t 1{tau > t}
    quad: Quadruplet
    flow_parts: tuple      # (Gm^{-1} . T(Nbar), coefficient . T(m)) making up CRRisk_flow

    def residual(self, other=None) -> tuple:
        ref = self.target if other is None else other
        return tuple(tuple(a - b for a, b in zip(x, y)) for x, y in zip(self.total, ref))

    def telescopes(self, other=None) -> bool:
        return all(v == 0 for row in self.residual(other) for v in row)


def decompose(kit: ClaimKit, X: Sequence, space: FilteredSpace, tau: Sequence, az: AzemaPair,
              haz: HazardTriplet, literal: bool = False) -> DecompositionReport:
    """Labelled decomposition of the G-price built from the F-price X.

    The zero-recovery form (survival_strict) uses -dVtilde^(1) in the
    CRRisk_flow coefficient, which is what the recovery form gives at K = 0.
    ``literal=True`` keeps the class-1 display's +dVtilde^(1) and also treats
    survival_incl with zero recovery; neither telescopes in general.
    """
    n, T, P = space.n, space.horizon, space.P
    F = space.filtration
    K, recov = recovery_process(kit, literal)
    q = quadruplet(kit, X, space, az, haz, literal)
    TM = transform_T(q.M, space, tau, az)
    TN = transform_T(q.N, space, tau, az)
    TNbar = transform_T(q.Nbar, space, tau, az)
    Tm = transform_T(haz.m, space, tau, az)
    Mm = angle(q.M, haz.m, F, P)

    initial = tuple(tuple((K[0][w] if tau[w] == 0 else X[0][w]) for w in range(n)) for _ in range(T + 1))
    tr = [None]
    for s in range(1, T + 1):
        inner = tuple((K[s][w] * (az.Gt[s][w] - az.G[s][w]) + X[s][w] * az.G[s][w]) / az.G[s - 1][w]
                      if az.G[s - 1][w] > 0 else ZERO for w in range(n))
        ce = E(inner, F[s - 1], P)
        tr.append(tuple(ce[w] - X[s - 1][w] if tau[w] >= s else ZERO for w in range(n)))
    trend = _accumulate(tr, n)

    pure = stopped_integral(lambda s, w: K[s][w] - X[s][w], haz.NG, tau)
    inv = lambda s, w: ONE / az.G[s - 1][w]
    csign = ONE if recov else -ONE
    benefit = stopped_integral(lambda s, w: csign * inv(s, w), TN, tau)
    nbar_part = stopped_integral(inv, TNbar, tau)
    vsign = ONE if (recov or not literal) else -ONE
    # q.Vtilde already carries the class sign; the corrected survival form needs -dV^(1) = dV^(3)
    dV = [None] + [_incr(q.Vtilde, s) for s in range(1, T + 1)]
    dMm = [None] + [_incr(Mm, s) for s in range(1, T + 1)]
    if not recov:
        dV = [None] + [tuple(-v for v in dV[s]) for s in range(1, T + 1)]
    coef = lambda s, w: (vsign * dV[s][w] + dMm[s][w]) / (az.G[s - 1][w] ** 2)
    m_part = stopped_integral(coef, Tm, tau)
    flow = tuple(tuple(a - b for a, b in zip(x, y)) for x, y in zip(nbar_part, m_part))

    terms = {"initial": initial, "trend": trend, "PFRisk": TM, "PureDefault": pure,
             "CRRisk_benefit": benefit, "CRRisk_flow": flow}
    total = tuple(tuple(sum((terms[k][t][w] for k in TERMS), ZERO) for w in range(n)) for t in range(T + 1))
    Ktau = tuple(K[v][w] if v <= T else ZERO for w, v in enumerate(tau)) if recov else _zeros(n)
    target = tuple(tuple(X[t][w] if tau[w] > t else Ktau[w] for w in range(n)) for t in range(T + 1))
    return DecompositionReport(terms, total, target, q, (nbar_part, m_part))


def martingale_terms(rep: DecompositionReport) -> dict:
    """The G-martingale pieces of a decomposition."""
    return {"PFRisk": rep.terms["PFRisk"], "PureDefault": rep.terms["PureDefault"],
            "CRRisk_benefit": rep.terms["CRRisk_benefit"], "flow_Nbar": rep.flow_parts[0],
            "flow_m": rep.flow_parts[1]}


def gmart_identities(M: Sequence, V: Sequence, space: FilteredSpace, tau: Sequence, az: AzemaPair,
                     haz: HazardTriplet) -> tuple:
    """Residuals of the two identities (each a G-adapted process that must vanish)."""
    n, T, P = space.n, space.horizon, space.P
    F = space.filtration
    if not is_martingale(M, F, P):
        raise DomainError("M must be an F-martingale")
    if not is_predictable(V, F):
        raise DomainError("V must be F-predictable")
    Tm = transform_T(haz.m, space, tau, az)
    pos = [None] + [E(tuple(ONE if g > 0 else ZERO for g in az.Gt[s]), F[s - 1], P) for s in range(1, T + 1)]
    lhs1 = stopped_integral(lambda s, w: az.G[s - 1][w] / az.Gt[s][w], V, tau)
    a1 = stopped_integral(lambda s, w: pos[s][w], V, tau)
    dV = [None] + [_incr(V, s) for s in range(1, T + 1)]
    b1 = stopped_integral(lambda s, w: dV[s][w] / az.G[s - 1][w], Tm, tau)
    r1 = tuple(tuple(lhs1[t][w] - a1[t][w] + b1[t][w] for w in range(n)) for t in range(T + 1))

    TM = transform_T(M, space, tau, az)
    br = bracket(M, haz.m)
    an = angle(M, haz.m, F, P)
    diff = tuple(tuple(a - b for a, b in zip(x, y)) for x, y in zip(br, an))
    Tdiff = transform_T(diff, space, tau, az)
    inv = lambda s, w: ONE / az.G[s - 1][w]
    c1 = stopped_integral(inv, Tdiff, tau)
    dA = [None] + [_incr(an, s) for s in range(1, T + 1)]
    c2 = stopped_integral(lambda s, w: dA[s][w] / az.G[s - 1][w] ** 2, Tm, tau)
    c3 = stopped_integral(inv, an, tau)
    r2 = []
    for t in range(T + 1):
        row = []
        for w in range(n):
            Mtau = M[min(t, tau[w]) if tau[w] <= t else t][w]
            row.append(Mtau - M[0][w] - (TM[t][w] + c1[t][w] - c2[t][w] + c3[t][w]))
        r2.append(tuple(row))
    return r1, tuple(r2)


__all__ = ["TERMS", "Quadruplet", "quadruplet", "DecompositionReport", "decompose", "martingale_terms",
           "gmart_identities", "stopped_integral"]
