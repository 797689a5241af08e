"""AIP detection, super-hedging prices and the vulnerable-claim formulas.

Prices live on outcomes: a value at time t is constant on the atoms of the
pricing filtration at t.  Atoms of zero mass under the pricing measure are
masked with ``None``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .extended import NEG_INF, POS_INF, is_inf
from .horizon import AzemaPair, Deflator
from .lp import HullOutcome, dot, hull_contains_zero, minimax
from .market import PriceSystem, increments
from .prob import ONE, ZERO, DomainError, FilteredSpace, Measure, Partition, cond_esssup

CLASSES = ("survival_strict", "survival_incl", "at_default", "mixed")


class AIPViolation(Exception):
    """Raised when a formula requiring AIP is applied to a model violating it."""

    def __init__(self, t: int, atom: tuple, certificate=None):
        super().__init__(f"AIP fails at t={t}, atom={list(atom)}")
        self.t = t
        self.atom = atom
        self.certificate = certificate


@dataclass(frozen=True)
class AIPReport:
    verdicts: dict      # (t, atom) -> HullOutcome, atom a tuple of outcome indices
    overall: bool

    def violations(self):
        return [(t, atom, h) for (t, atom), h in sorted(self.verdicts.items()) if not h.contains]


@dataclass
class PriceReport:
    prices: tuple                 # prices[t][w], ext rational or None
    strategies: tuple             # strategies[t][w] for t < T: d-tuple or None
    unbounded: list               # (t, atom, certificate) where the local LP is unbounded
    label: str = ""


def as_vector(X: Sequence) -> tuple:
    """Wrap a scalar process as a one-asset vector process."""
    return tuple(tuple((x,) for x in X[t]) for t in range(len(X)))


def aip(X: Sequence, parts: Sequence[Partition], mu: Measure) -> AIPReport:
    verdicts = {}
    for t in range(1, len(parts)):
        dX = increments(X, t)
        for atom in parts[t - 1].blocks:
            live = [w for w in atom if mu.weights[w] > 0]
            if not live:
                verdicts[(t - 1, atom)] = HullOutcome(True, None, None)
                continue
            verdicts[(t - 1, atom)] = hull_contains_zero([dX[w] for w in live])
    return AIPReport(verdicts, all(h.contains for h in verdicts.values()))


def aip_crosscheck(X: Sequence, parts: Sequence[Partition], mu: Measure, report: AIPReport,
                   rng: random.Random, samples: int = 8) -> list:
    """Check each verdict against the esssup criterion; return mismatches.

    A holding verdict needs esssup(theta . dX) >= 0 for every sampled theta;
    a failing one needs esssup(separator . dX) < 0.
    """
    bad = []
    for t in range(1, len(parts)):
        dX = increments(X, t)
        d = len(dX[0])
        for atom in parts[t - 1].blocks:
            h = report.verdicts[(t - 1, atom)]
            live = [w for w in atom if mu.weights[w] > 0]
            if not live:
                continue
            thetas = [h.separator] if not h.contains else [
                tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(d)) for _ in range(samples)]
            for th in thetas:
                sup = max(dot(th, dX[w]) for w in live)
                if (sup >= 0) != h.contains:
                    bad.append((t - 1, atom, th, sup))
    return bad


def _rows(xi, dX, atom, mu):
    return [(xi[w], dX[w]) for w in atom if mu.weights[w] > 0]


def one_step(X: Sequence, parts: Sequence[Partition], mu: Measure, t: int, xi: Sequence):
    """Price at time t of the time-(t+1) payoff xi; returns (values, strategies, unbounded)."""
    dX = increments(X, t + 1)
    n = len(xi)
    vals, strat, unb = [None] * n, [None] * n, []
    for atom in parts[t].blocks:
        rows = _rows(xi, dX, atom, mu)
        if not rows:
            continue
        out = minimax(rows)
        if out.value == NEG_INF and out.certificate is not None:
            unb.append((t, atom, out.certificate))
        for w in atom:
            vals[w] = out.value
            strat[w] = out.argmin
    return tuple(vals), tuple(strat), unb


def backward_price(X: Sequence, parts: Sequence[Partition], mu: Measure, xi_T: Sequence, label: str = "") -> PriceReport:
    T = len(parts) - 1
    prices = [None] * (T + 1)
    strategies = [None] * T
    unbounded = []
    prices[T] = tuple(v if mu.weights[w] > 0 else None for w, v in enumerate(xi_T))
    for t in range(T - 1, -1, -1):
        v, s, u = one_step(X, parts, mu, t, prices[t + 1])
        prices[t], strategies[t] = v, s
        unbounded.extend(u)
    return PriceReport(tuple(prices), tuple(strategies), sorted(unbounded, key=lambda r: (r[0], r[1])), label)


def global_oracle(X: Sequence, parts: Sequence[Partition], mu: Measure, xi_T: Sequence) -> tuple:
    """Time-0 super-hedging price from a single LP per time-0 atom."""
    T = len(parts) - 1
    n = len(xi_T)
    dXs = [None] + [increments(X, s) for s in range(1, T + 1)]
    d = len(X[0][0])
    out = [None] * n
    for atom in parts[0].blocks:
        live = [w for w in atom if mu.weights[w] > 0]
        if not live:
            continue
        slots = {}
        for s in range(1, T + 1):
            for w in live:
                key = (s, parts[s - 1].block_of[w])
                if key not in slots:
                    slots[key] = len(slots)
        rows = []
        for w in live:
            a = [ZERO] * (d * len(slots))
            for s in range(1, T + 1):
                base = d * slots[(s, parts[s - 1].block_of[w])]
                for k in range(d):
                    a[base + k] = dXs[s][w][k]
            rows.append((xi_T[w], tuple(a)))
        value = minimax(rows).value
        for w in atom:
            out[w] = value
    return tuple(out)


# --- vulnerable claims -------------------------------------------------------

def kappa(g: Sequence, K: Sequence, Gt_t: Sequence, G_t: Sequence) -> tuple:
    """g 1{Gt=G>0} + K 1{Gt>G=0} + max(g,K) 1{Gt>G>0}."""
    out = []
    for gv, kv, a, b in zip(g, K, Gt_t, G_t):
        if a == b and b > 0:
            out.append(gv)
        elif a > b and b == 0:
            out.append(kv)
        elif a > b > 0:
            out.append(max(gv, kv))
        else:
            out.append(ZERO)
    return tuple(out)


def f_recovery(R: Sequence, t: int, x: Sequence, az: AzemaPair) -> tuple:
    return kappa(x, R[t], az.Gt[t], az.G[t])


@dataclass(frozen=True)
class ClaimKit:
    cls: str
    g: tuple
    K: tuple
    ghat: tuple = field(repr=False)
    kappa0: tuple = field(repr=False)
    kappag: tuple = field(repr=False)
    gbar: tuple = field(repr=False)

    def at_default_value(self, tau: Sequence) -> tuple:
        """K_tau per outcome (0 where tau = inf)."""
        return tuple(self.K[v][w] if v != POS_INF else ZERO for w, v in enumerate(tau))


def claim_kit(cls: str, g: Sequence, K: Sequence, az: AzemaPair) -> ClaimKit:
    if cls not in CLASSES:
        raise DomainError(f"unknown claim class {cls!r}")
    T = len(az.G) - 1
    g = tuple(tuple(Fraction(v) for v in g[t]) for t in range(T + 1))
    K = tuple(tuple(Fraction(v) for v in K[t]) for t in range(T + 1))
    zero = (ZERO,) * len(g[0])
    ghat = tuple(kappa(g[t], zero, az.Gt[t], az.G[t]) for t in range(T + 1))
    k0 = tuple(kappa(zero, K[t], az.Gt[t], az.G[t]) for t in range(T + 1))
    kg = tuple(kappa(g[t], K[t], az.Gt[t], az.G[t]) for t in range(T + 1))
    gbar = tuple(tuple(v if a > 0 else ZERO for v, a in zip(g[t], az.Gt[t])) for t in range(T + 1))
    return ClaimKit(cls, g, K, ghat, k0, kg, gbar)


def g_claim(kit: ClaimKit, t: int, tau: Sequence) -> tuple:
    """The G_t-measurable payoff of the class at time t."""
    Kt = kit.at_default_value(tau)
    out = []
    for w, v in enumerate(tau):
        if kit.cls == "survival_strict":
            out.append(kit.g[t][w] if v > t else ZERO)
        elif kit.cls == "survival_incl":
            out.append(kit.g[t][w] if v >= t else ZERO)
        elif kit.cls == "at_default":
            out.append(Kt[w] if v <= t else ZERO)
        else:
            out.append(kit.g[t][w] if v > t else Kt[w])
    return tuple(out)


def f_payoff(kit: ClaimKit, t: int) -> tuple:
    """The F_t-measurable payoff replacing the class claim in the one-step formula."""
    return {"survival_strict": kit.ghat, "survival_incl": kit.gbar,
            "at_default": kit.kappa0, "mixed": kit.kappag}[kit.cls][t]


def recovery_part(kit: ClaimKit, t: int, tau: Sequence) -> tuple:
    """K_tau 1{tau <= t} for recovery classes, 0 for survival classes."""
    if kit.cls in ("survival_strict", "survival_incl"):
        return (ZERO,) * len(tau)
    Kt = kit.at_default_value(tau)
    return tuple(Kt[w] if v <= t else ZERO for w, v in enumerate(tau))


@dataclass(frozen=True)
class OneStepResult:
    lhs: tuple
    rhs_Qtilde: tuple
    rhs_delta: tuple
    f_price_Qtilde: tuple   # F-side Q-tilde price before composing with indicators
    f_price_delta: tuple


def one_step_vulnerable(kit: ClaimKit, t: int, space: FilteredSpace, tau: Sequence, az: AzemaPair,
                        defl: Deflator, ps: PriceSystem, Gfilt: Sequence[Partition]) -> OneStepResult:
    if t < 1:
        raise DomainError("one-step vulnerable pricing needs t >= 1")
    n, P = space.n, space.P
    xi = g_claim(kit, t, tau)
    lhs, _, _ = one_step(ps.Stau, Gfilt, P, t - 1, xi)
    Y = f_payoff(kit, t)
    fq, _, _ = one_step(ps.Stilde, space.filtration, defl.Qtilde, t - 1, Y)
    dSbar = increments(ps.Sbar, t)
    fd = [None] * n
    for atom in space.filtration[t - 1].blocks:
        rows = [(Y[w], dSbar[w] + ((-ONE if az.Gt[t][w] == 0 else ZERO),)) for w in atom]
        v = minimax(rows).value
        for w in atom:
            fd[w] = v
    rec = recovery_part(kit, t - 1, tau)

    def compose(f):
        return tuple(rec[w] + f[w] if tau[w] >= t else rec[w] for w in range(n))

    return OneStepResult(lhs, compose(fq), compose(tuple(fd)), fq, tuple(fd))


@dataclass
class VulnerableResult:
    F_process: tuple
    G_report: PriceReport
    conventions: dict        # t -> set of matching on-set conventions ("tau>t", "tau>=t")


def _fill(vals: Sequence) -> tuple:
    return tuple(ZERO if v is None else v for v in vals)


def f_terminal(kit: ClaimKit, az: AzemaPair) -> tuple:
    T = len(az.G) - 1
    n = len(az.G[0])
    if kit.cls == "survival_strict" or kit.cls == "mixed":
        return tuple(v if G > 0 else ZERO for v, G in zip(kit.g[T], az.G[T]))
    if kit.cls == "survival_incl":
        return tuple(v if G > 0 else ZERO for v, G in zip(kit.g[T], az.Gt[T]))
    return (ZERO,) * n


def recovery_process(kit: ClaimKit, literal: bool = False):
    """(R, recovery_form) driving the F-recursion and the decomposition.

    survival_incl pays g_T on {tau = T}; it is handled as the recovery class
    with R_T = g_T and R_t = 0 before T.  ``literal=True`` uses R = 0 for it,
    as in the zero-recovery statement, which misprices {Gtilde_T > G_T = 0}.
    """
    T, n = len(kit.g) - 1, len(kit.g[0])
    zeros = tuple((ZERO,) * n for _ in range(T + 1))
    if kit.cls in ("at_default", "mixed"):
        return kit.K, True
    if kit.cls == "survival_incl" and not literal:
        return zeros[:T] + (kit.g[T],), True
    return zeros, False


def f_recursion(kit: ClaimKit, space: FilteredSpace, az: AzemaPair, defl: Deflator, ps: PriceSystem,
                simplified: bool = False, literal: bool = False) -> tuple:
    """Backward F-side recursion; masked Q-tilde-null atoms are filled with 0."""
    T, n = space.horizon, space.n
    R, _ = recovery_process(kit, literal)
    X = [None] * (T + 1)
    X[T] = f_terminal(kit, az)
    for t in range(T - 1, -1, -1):
        if simplified:
            Kbar = tuple(k if a > b else ZERO for k, a, b in zip(R[t + 1], az.Gt[t + 1], az.G[t + 1]))
            pay = tuple(max(x, k) for x, k in zip(X[t + 1], Kbar))
        else:
            pay = f_recovery(R, t + 1, X[t + 1], az)
        vals, _, _ = one_step(ps.Stilde, space.filtration, defl.Qtilde, t, pay)
        X[t] = _fill(vals)
    return tuple(X)


def require_aip(ps: PriceSystem, space: FilteredSpace, defl: Deflator) -> AIPReport:
    rep = aip(ps.Stilde, space.filtration, defl.Qtilde)
    if not rep.overall:
        t, atom, h = rep.violations()[0]
        raise AIPViolation(t, atom, h.separator)
    return rep


def g_form(kit: ClaimKit, X: Sequence, t: int, tau: Sequence, convention: str) -> tuple:
    """K_tau 1{tau <= t} + X_t 1{tau > t} (or the variant with tau >= t)."""
    Kt = kit.at_default_value(tau) if kit.cls in ("at_default", "mixed") else (ZERO,) * len(tau)
    out = []
    for w, v in enumerate(tau):
        alive = v > t if convention == "tau>t" else v >= t
        out.append(X[t][w] if alive else Kt[w])
    return tuple(out)


def price_vulnerable(kit: ClaimKit, space: FilteredSpace, tau: Sequence, az: AzemaPair, defl: Deflator,
                     ps: PriceSystem, Gfilt: Sequence[Partition], literal: bool = False) -> VulnerableResult:
    require_aip(ps, space, defl)
    X = f_recursion(kit, space, az, defl, ps, literal=literal)
    rep = backward_price(ps.Stau, Gfilt, space.P, g_claim(kit, space.horizon, tau), label="(S^tau,G,P)")
    conv = {}
    for t in range(space.horizon + 1):
        conv[t] = {c for c in ("tau>t", "tau>=t") if g_form(kit, X, t, tau, c) == rep.prices[t]}
    return VulnerableResult(X, rep, conv)


def options_simplify(kit: ClaimKit, space: FilteredSpace, az: AzemaPair, defl: Deflator, ps: PriceSystem) -> tuple:
    """F-side prices via the max-form recursion; requires g, K >= 0."""
    if any(v < 0 for row in kit.g for v in row) or any(v < 0 for row in kit.K for v in row):
        raise DomainError("options recursion needs nonnegative g and K")
    return f_recursion(kit, space, az, defl, ps, simplified=True)


__all__ = [
    "CLASSES", "AIPViolation", "AIPReport", "PriceReport", "as_vector", "aip", "aip_crosscheck",
    "one_step", "backward_price", "global_oracle", "kappa", "f_recovery", "ClaimKit", "claim_kit",
    "g_claim", "f_payoff", "recovery_part", "OneStepResult", "one_step_vulnerable",
    "VulnerableResult", "recovery_process", "f_terminal", "f_recursion", "require_aip", "g_form", "price_vulnerable",
    "options_simplify",
]
