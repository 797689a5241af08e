"""Theorem-verification suites over fixtures and seeded random models.

Each suite runs a fixed set of fixture checks plus one task per model seed.
Tasks are independent and may run in worker processes; results are
assembled in seed order so the report does not depend on scheduling.
"""
from __future__ import annotations

import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .decomp import TERMS, decompose, gmart_identities, martingale_terms
from .extended import NEG_INF, fmt
from .generator import REGIMES, GenConfig, GenerationError, deadzone_times, gen, random_aip_process
from .horizon import is_martingale, is_predictable, transform_T
from .laws import (Checker, Failure, check_calculus, check_change_of_measure, check_counterexample,
                   check_horizon_laws, counterexample_instance, esssup_instance, measurable_var)
from .lp import dot
from .market import build_derived, stop
from .model import Model
from .modelfile import load
from .pricing import (CLASSES, aip, aip_crosscheck, backward_price, claim_kit, f_recursion, g_claim,
                      global_oracle, one_step, one_step_vulnerable, options_simplify, price_vulnerable,
                      recovery_part)
from .prob import ONE, ZERO, E, Partition

SUITES = ("esssup", "aip", "onestep", "multistep", "decomp", "options", "preservation")
DEFAULT_MODELS = {"esssup": 500, "aip": 300, "onestep": 300, "multistep": 50, "decomp": 100,
                  "options": 100, "preservation": 100}
WORKERS_ENV = "RANDHORIZON_WORKERS"
FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
MAX_FAIL_LINES = 50


def fixture(name: str) -> Model:
    return load(os.path.join(FIXTURE_DIR, f"{name}.json"))


@dataclass
class TaskResult:
    checks: int = 0
    failures: list = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)

    def absorb(self, chk: Checker):
        self.checks += chk.checks
        self.failures.extend(chk.failures)


@dataclass
class SuiteResult:
    name: str
    models: int
    seed: int
    checks: int
    failures: list
    stats: Counter

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        out = [f"suite={self.name} models={self.models} seed={self.seed} checks={self.checks} "
               f"failures={len(self.failures)} status={'pass' if self.ok else 'fail'}"]
        out += [f"stat {self.name}.{k}={v}" for k, v in sorted(self.stats.items())]
        out += [f.line() for f in self.failures[:MAX_FAIL_LINES]]
        if len(self.failures) > MAX_FAIL_LINES:
            out.append(f"more_failures={len(self.failures) - MAX_FAIL_LINES}")
        return out


# --- helpers ---------------------------------------------------------------------

def _ids(model: Model):
    return model.space.outcomes


def _aip_model(seed: int, tries: int = 60, **kw):
    """First model with AIP under (S-tilde, F, Q-tilde) among sub-seeds of ``seed``.

    The tau regime cycles with ``seed`` so every regime is represented.
    """
    regime = REGIMES[seed % 4]
    for j in range(tries):
        s = seed * tries + j
        try:
            m = gen(GenConfig(seed=s, regime=regime, **kw))
        except GenerationError:
            continue
        a = m.analyze()
        if aip(a.ps.Stilde, m.space.filtration, a.defl.Qtilde).overall:
            return m, s
    raise GenerationError(f"no AIP model among sub-seeds of {seed}")


def _regime_model(seed: int, regime: str, tries: int = 20, **kw):
    for j in range(tries):
        s = seed * tries + j
        try:
            return gen(GenConfig(seed=s, regime=regime, **kw)), s
        except GenerationError:
            continue
    raise GenerationError(f"regime {regime!r} not reached for seed {seed}")


def _check_mart(chk: Checker, tag: str, X, parts, mu):
    """Adaptedness and the one-step martingale property, block by block."""
    for t, part in enumerate(parts):
        for b in part.blocks:
            chk.checks += 1
            if any(X[t][w] != X[t][b[0]] for w in b):
                chk.fail(tag + ":adapted", t, b, X[t][b[0]], "non-constant")
    for t in range(1, len(parts)):
        for b in parts[t - 1].blocks:
            m = mu.mass(b)
            if m == 0:
                continue
            chk.checks += 1
            lhs = sum((mu.weights[w] * X[t][w] for w in b if mu.weights[w]), ZERO) / m
            if lhs != X[t - 1][b[0]]:
                chk.fail(tag, t, b, lhs, X[t - 1][b[0]])


def _hull_certificate_ok(dX, atom, mu, sep) -> bool:
    return sep is not None and max(dot(sep, dX[w]) for w in atom if mu.weights[w] > 0) < 0


def _scalar_model(model: Model, incr: Callable[[int], tuple]) -> tuple:
    """One-asset price with S_0 = 1 (shifted to stay nonnegative) and given increments."""
    n, T = model.n, model.T
    S = [(ONE,) * n]
    for t in range(1, T + 1):
        dS = incr(t)
        S.append(tuple(a + b for a, b in zip(S[-1], dS)))
    low = min(min(row) for row in S)
    shift = -low if low < 0 else ZERO
    return tuple(tuple((v + shift,) for v in row) for row in S)


def _predictable_process(model: Model, rng: random.Random, constant: bool) -> tuple:
    n, T, F = model.n, model.T, model.space.filtration
    x0 = measurable_var(rng, F[0])
    X = [tuple((v,) for v in x0)]
    for t in range(1, T + 1):
        dx = (ZERO,) * n if constant else measurable_var(rng, F[t - 1], -2, 2)
        X.append(tuple((X[-1][w][0] + dx[w],) for w in range(n)))
    return tuple(X)


def _predictable_integrand(model: Model, rng: random.Random) -> tuple:
    F = model.space.filtration
    return (measurable_var(rng, F[0]),) + tuple(measurable_var(rng, F[t - 1]) for t in range(1, model.T + 1))


def _integrate(psi, X) -> tuple:
    n = len(X[0])
    out = [tuple((ZERO,) for _ in range(n))]
    for t in range(1, len(X)):
        out.append(tuple((out[-1][w][0] + psi[t][w] * (X[t][w][0] - X[t - 1][w][0]),) for w in range(n)))
    return tuple(out)


# --- esssup ----------------------------------------------------------------------

def _task_esssup(seed: int) -> TaskResult:
    res = TaskResult()
    rng = random.Random(seed)
    inst = esssup_instance(rng)
    chk = Checker([f"w{i}" for i in range(inst.n)], seed)
    check_calculus(inst, chk)
    check_change_of_measure(inst, chk)
    res.absorb(chk)
    m = gen(GenConfig(seed=seed, regime=REGIMES[seed % 4]))
    chk = Checker(_ids(m), seed)
    check_horizon_laws(m.space, m.tau, rng, chk)
    res.absorb(chk)
    res.stats["instances"] += 1
    res.stats["nontrivial_null"] += inst.nontrivial_null
    res.stats["horizon_models"] += 1
    res.stats["deadzone_models"] += bool(deadzone_times(m))
    return res


def _fixtures_esssup() -> TaskResult:
    res = TaskResult()
    for variant in (0, 1):
        chk = Checker(("a", "b"))
        check_counterexample(counterexample_instance(variant=variant), chk)
        res.absorb(chk)
    for name in ("M1", "M2", "M3"):
        m = fixture(name)
        chk = Checker(_ids(m))
        check_horizon_laws(m.space, m.tau, random.Random(0), chk)
        res.absorb(chk)
    return res


# --- aip -------------------------------------------------------------------------

def _three_verdicts(m: Model, ps=None):
    a = m.analyze()
    ps = ps or a.ps
    sp = m.space
    return (aip(ps.Stau, a.Gfilt, sp.P), aip(ps.Stilde, sp.filtration, a.defl.Qtilde),
            aip(ps.Sbar, sp.filtration, sp.P))


def _check_aip_model(m: Model, chk: Checker, rng: random.Random, res: TaskResult, ps=None):
    a = m.analyze()
    sp = m.space
    ps = ps or a.ps
    rg, rt, rb = _three_verdicts(m, ps)
    chk.truth("aip:G<=>Qtilde", rg.overall, rt.overall)
    if rt.overall:
        chk.truth("aip:Qtilde=>bar", rb.overall, True)
    for tag, X, parts, mu, rep in (("stopped", ps.Stau, a.Gfilt, sp.P, rg),
                                  ("tilde", ps.Stilde, sp.filtration, a.defl.Qtilde, rt),
                                  ("bar", ps.Sbar, sp.filtration, sp.P, rb)):
        for t, atom, th, sup in aip_crosscheck(X, parts, mu, rep, rng):
            chk.fail(f"aip:crosscheck-{tag}", t, atom, sup, "sign")
        chk.checks += 1
        # zero claim: price 0 where AIP holds at the atom, -inf where it fails
        for t in range(sp.horizon):
            vals, _, _ = one_step(X, parts, mu, t, (ZERO,) * sp.n)
            for b in parts[t].blocks:
                if vals[b[0]] is None:
                    continue
                chk.checks += 1
                want = ZERO if rep.verdicts[(t, b)].contains else NEG_INF
                if vals[b[0]] != want:
                    chk.fail(f"aip:zero-claim-{tag}", t, b, vals[b[0]], want)
    res.stats["aip_G"] += rg.overall
    res.stats["aip_bar_only"] += rb.overall and not rt.overall
    # no-jump corollary
    dz = [[a.az.Gt[t][w] == 0 < a.az.G[t - 1][w] for w in range(sp.n)] for t in range(1, sp.horizon + 1)]
    quiet = all(not (dz[t - 1][w] and any(x != y for x, y in zip(ps.S[t][w], ps.S[t - 1][w])))
                for t in range(1, sp.horizon + 1) for w in range(sp.n))
    if quiet:
        res.stats["nojump_hypothesis"] += 1
        chk.truth("nojump:G=bar", rg.overall, rb.overall)
        chk.truth("nojump:tilde=bar", rt.overall, rb.overall)
    return rg, rt, rb


def _check_remarks(m: Model, chk: Checker, res: TaskResult):
    """The three constructions on a model whose tau has a dead zone."""
    a = m.analyze()
    sp, az, n, T = m.space, a.az, m.n, m.T
    F, P = sp.filtration, sp.P
    dzone = lambda t: tuple(ONE if az.Gt[t][w] == 0 < az.G[t - 1][w] else ZERO for w in range(n))
    # (a) compensated dead-zone indicator: bar holds, tilde and stopped fail
    S = _scalar_model(m, lambda t: tuple(x - y for x, y in zip(dzone(t), E(dzone(t), F[t - 1], P))))
    ps = build_derived(sp, az, S, a.tau)
    rg, rt, rb = _three_verdicts(m, ps)
    chk.truth("remark(a):bar", rb.overall, True)
    chk.truth("remark(a):tilde", rt.overall, False)
    chk.truth("remark(a):stopped", rg.overall, False)
    # (b) Delta S = 1{Gtilde = 0}: S^tau constant; (S, F) fails iff {G_{t-1} = 0} has mass for some t
    S = _scalar_model(m, lambda t: tuple(ONE if g == 0 else ZERO for g in az.Gt[t]))
    ps = build_derived(sp, az, S, a.tau)
    dead_before = any(az.G[t - 1][w] == 0 and P.weights[w] > 0 for t in range(1, T + 1) for w in range(n))
    chk.truth("remark(b):S", aip(ps.S, F, P).overall, not dead_before)
    chk.truth("remark(b):Stau-constant", all(ps.Stau[t] == ps.Stau[0] for t in range(T + 1)), True)
    chk.truth("remark(b):stopped", aip(ps.Stau, a.Gfilt, P).overall, True)
    res.stats["remark_b_S_violates"] += dead_before
    # (c) Delta S = dead-zone indicator: AIP holds, an arbitrage exists, S^tau constant
    S = _scalar_model(m, dzone)
    ps = build_derived(sp, az, S, a.tau)
    chk.truth("remark(c):S", aip(ps.S, F, P).overall, True)
    arb = any(all(ps.S[t][w][0] >= ps.S[t - 1][w][0] for w in b) and
              any(ps.S[t][w][0] > ps.S[t - 1][w][0] for w in b)
              for t in range(1, T + 1) for b in F[t - 1].blocks)
    chk.truth("remark(c):arbitrage", arb, True)
    chk.truth("remark(c):stopped", aip(ps.Stau, a.Gfilt, P).overall, True)


def _check_predictable(m: Model, rng: random.Random, chk: Checker, res: TaskResult):
    F, P = m.space.filtration, m.space.P
    X = _predictable_process(m, rng, constant=rng.random() < 0.4)
    const = all(X[t] == X[0] for t in range(m.T + 1))
    chk.truth("predictable(a)", aip(X, F, P).overall, const)
    Y = random_aip_process(m, rng, 1)
    psi = _predictable_integrand(m, rng)
    chk.truth("predictable(b)", aip(_integrate(psi, Y), F, P).overall, True)
    res.stats["predictable_processes"] += 1
    res.stats["predictable_constant"] += const


def _task_aip(seed: int) -> TaskResult:
    res = TaskResult()
    rng = random.Random(seed)
    regime = REGIMES[seed % 4]
    m = gen(GenConfig(seed=seed, regime=regime, aip_prices=seed % 3 != 0,
                      quiet_deadzone=regime == "with_deadzone" and seed % 2 == 0))
    chk = Checker(_ids(m), seed)
    _check_aip_model(m, chk, rng, res)
    _check_predictable(m, rng, chk, res)
    if deadzone_times(m):
        _check_remarks(m, chk, res)
        res.stats["remark_models"] += 1
    res.stats["models"] += 1
    res.absorb(chk)
    return res


def _fixtures_aip() -> TaskResult:
    res = TaskResult()
    rng = random.Random(0)
    for name in ("M1", "M2", "M3"):
        m = fixture(name)
        chk = Checker(_ids(m))
        rg, rt, rb = _check_aip_model(m, chk, rng, res)
        if name == "M3":
            chk.truth("M3:bar", rb.overall, True)
            chk.truth("M3:stopped", rg.overall, False)
            chk.truth("M3:tilde", rt.overall, False)
            bad = rg.violations()
            a = m.analyze()
            chk.truth("M3:violation-at", [(t, tuple(m.space.outcomes[w] for w in atom)) for t, atom, _ in bad],
                      [(0, ("a",))])
            if bad:
                t, atom, h = bad[0]
                dX = tuple(tuple(x - y for x, y in zip(a.ps.Stau[1][w], a.ps.Stau[0][w])) for w in range(m.n))
                chk.truth("M3:certificate", _hull_certificate_ok(dX, atom, m.space.P, h.separator), True)
            _check_remarks(m, chk, res)
        else:
            for tag, r in (("stopped", rg), ("tilde", rt), ("bar", rb)):
                chk.truth(f"{name}:aip-{tag}", r.overall, True)
        res.absorb(chk)
    return res


# --- onestep ---------------------------------------------------------------------

def _check_onestep(m: Model, chk: Checker, res: TaskResult, classes=CLASSES):
    a = m.analyze()
    sp, tau = m.space, a.tau
    for cls in classes:
        kit = a.kit(cls, m.claim.g, m.claim.K)
        recov = cls in ("at_default", "mixed")
        for t in range(1, m.T + 1):
            r = one_step_vulnerable(kit, t, sp, tau, a.az, a.defl, a.ps, a.Gfilt)
            on = [w for w in range(m.n) if tau[w] >= t]
            off = [w for w in range(m.n) if tau[w] < t]
            chk.eq(f"onestep:{cls}:Qtilde", r.lhs, r.rhs_Qtilde, t, on)
            chk.eq(f"onestep:{cls}:delta", r.lhs, r.rhs_delta, t, on)
            rec = recovery_part(kit, t - 1, tau)
            chk.eq(f"onestep:{cls}:off", r.rhs_Qtilde, rec, t, off)
            if recov:
                chk.ge(f"onestep:{cls}:slack", r.lhs, rec, t, off)
                res.stats["slack_positive"] += sum(1 for w in off if r.lhs[w] > rec[w])
            else:
                chk.eq(f"onestep:{cls}:off-zero", r.lhs, rec, t, off)
            res.stats["neg_inf_on"] += sum(1 for w in on if r.lhs[w] == NEG_INF)


def _task_onestep(seed: int) -> TaskResult:
    res = TaskResult()
    m = gen(GenConfig(seed=seed, regime=REGIMES[seed % 4], aip_prices=seed % 3 != 0))
    chk = Checker(_ids(m), seed)
    _check_onestep(m, chk, res)
    res.stats["models"] += 1
    res.absorb(chk)
    return res


def _fixtures_onestep() -> TaskResult:
    res = TaskResult()
    for name in ("M1", "M2", "M3"):
        m = fixture(name)
        chk = Checker(_ids(m))
        _check_onestep(m, chk, res)
        a = m.analyze()
        kit = a.kit()
        r = one_step_vulnerable(kit, 1, m.space, a.tau, a.az, a.defl, a.ps, a.Gfilt)
        if name == "M2":
            third = (Fraction(1, 3),) * 4
            for label, v in (("lhs", r.lhs), ("Qtilde", r.rhs_Qtilde), ("delta", r.rhs_delta)):
                chk.eq(f"M2:onestep-{label}", v, third, 1)
        if name == "M3":
            # on {tau >= 1} = {a} the single Q-tilde row has nonzero exposure: unbounded below
            for label, v in (("lhs", r.lhs), ("Qtilde", r.rhs_Qtilde), ("delta", r.rhs_delta)):
                chk.eq(f"M3:onestep-{label}", v, (NEG_INF, ZERO), 1)
        res.absorb(chk)
    return res


# --- multistep -------------------------------------------------------------------

def _check_multistep(m: Model, chk: Checker, res: TaskResult):
    a = m.analyze()
    sp, tau, T = m.space, a.tau, m.T
    gT = m.claim.g[T]
    plain = backward_price(a.ps.S, sp.filtration, sp.P, gT)
    chk.eq("oracle:(S,F,P)", plain.prices[0], global_oracle(a.ps.S, sp.filtration, sp.P, gT), 0)
    for cls in CLASSES:
        kit = a.kit(cls, m.claim.g, m.claim.K)
        v = price_vulnerable(kit, sp, tau, a.az, a.defl, a.ps, a.Gfilt)
        xi = g_claim(kit, T, tau)
        chk.eq(f"oracle:{cls}", v.G_report.prices[0], global_oracle(a.ps.Stau, a.Gfilt, sp.P, xi), 0)
        for t in range(T + 1):
            want = "tau>=t" if cls == "survival_incl" and t == T else "tau>t"
            chk.truth(f"form:{cls}", want in v.conventions[t], True, t)
        if cls == "survival_incl":
            lit = price_vulnerable(kit, sp, tau, a.az, a.defl, a.ps, a.Gfilt, literal=True)
            res.stats["literal_incl_mismatch"] += any("tau>t" not in lit.conventions[t] for t in range(T))
        res.stats["prices_checked"] += 1
    # nonnegative payoffs: F-price nonnegative and zero on {G = 0}
    g = tuple(tuple(max(x, ZERO) for x in row) for row in m.claim.g)
    K = tuple(tuple(max(x, ZERO) for x in row) for row in m.claim.K)
    for cls in CLASSES:
        X = f_recursion(claim_kit(cls, g, K, a.az), sp, a.az, a.defl, a.ps)
        for t in range(T + 1):
            chk.ge(f"AIP4Qtilde:nonneg:{cls}", X[t], (ZERO,) * m.n, t)
            dead = [a.az.G[t][w] == 0 for w in range(m.n)]
            # the inclusive survival payoff at T lives on {Gtilde_T > G_T = 0} as well
            keep = cls == "survival_incl" and t == T
            want = tuple(g[T][w] if keep and dead[w] and a.az.Gt[T][w] > 0 else ZERO for w in range(m.n))
            chk.eq(f"AIP4Qtilde:dead:{cls}", tuple(X[t][w] if dead[w] else ZERO for w in range(m.n)), want, t)


def _task_multistep(seed: int) -> TaskResult:
    res = TaskResult()
    m, s = _aip_model(seed)
    chk = Checker(_ids(m), s)
    _check_multistep(m, chk, res)
    res.stats["models"] += 1
    res.absorb(chk)
    return res


def _fixtures_multistep() -> TaskResult:
    res = TaskResult()
    third = Fraction(1, 3)
    m = fixture("M1")
    a = m.analyze()
    sp = m.space
    chk = Checker(_ids(m))
    xi = tuple(max(s[0] - 1, ZERO) for s in a.ps.S[1])
    vals, strat, _ = one_step(a.ps.S, sp.filtration, sp.P, 0, xi)
    chk.eq("M1:one_step", vals, (third, third), 0)
    chk.eq("M1:theta", strat, ((Fraction(2, 3),),) * 2, 0)
    rep = backward_price(a.ps.S, sp.filtration, sp.P, xi)
    chk.eq("M1:backward", rep.prices[0], (third, third), 0)
    chk.eq("M1:backward-theta", rep.strategies[0], ((Fraction(2, 3),),) * 2, 0)
    chk.eq("M1:oracle", global_oracle(a.ps.S, sp.filtration, sp.P, xi), (third, third), 0)
    v = price_vulnerable(a.kit(), sp, a.tau, a.az, a.defl, a.ps, a.Gfilt)
    chk.eq("M1:F_process", v.F_process[0], (third, third), 0)
    chk.eq("M1:G_price", v.G_report.prices[0], (third, third), 0)
    _check_multistep(m, chk, res)
    res.absorb(chk)
    m = fixture("M2")
    a = m.analyze()
    chk = Checker(_ids(m))
    xi = g_claim(a.kit(), 1, a.tau)
    chk.eq("M2:oracle", global_oracle(a.ps.Stau, a.Gfilt, m.space.P, xi), (third,) * 4, 0)
    _check_multistep(m, chk, res)
    res.absorb(chk)
    return res


# --- decomp ----------------------------------------------------------------------

def _check_decomp(m: Model, rng: random.Random, chk: Checker, res: TaskResult, pairs: int = 2):
    a = m.analyze()
    sp, tau, T, n = m.space, a.tau, m.T, m.n
    F, P, Gf = sp.filtration, sp.P, a.Gfilt
    haz = a.haz
    _check_mart(chk, "mart:m", haz.m, F, P)
    _check_mart(chk, "mart:ZF", a.defl.ZF, F, P)
    _check_mart(chk, "mart:NG", haz.NG, Gf, P)
    res.stats["m_constant"] += all(haz.m[t] == haz.m[0] for t in range(T + 1))
    for cls in CLASSES:
        kit = a.kit(cls, m.claim.g, m.claim.K)
        v = price_vulnerable(kit, sp, tau, a.az, a.defl, a.ps, a.Gfilt)
        d = decompose(kit, v.F_process, sp, tau, a.az, haz)
        for t in range(T + 1):
            chk.eq(f"telescope:{cls}", d.total[t], d.target[t], t)
            chk.eq(f"telescope-G:{cls}", d.total[t], v.G_report.prices[t], t)
        q = d.quad
        for t in range(T + 1):
            chk.eq(f"quad:{cls}:X=X0+M+A", v.F_process[t],
                   tuple(v.F_process[0][w] + q.M[t][w] + q.A[t][w] for w in range(n)), t)
        _check_mart(chk, f"quad:{cls}:M", q.M, F, P)
        chk.truth(f"quad:{cls}:A-predictable", is_predictable(q.A, F), True)
        _check_mart(chk, f"quad:{cls}:N", q.N, F, P)
        _check_mart(chk, f"quad:{cls}:Nbar", q.Nbar, F, P)
        for name, X in martingale_terms(d).items():
            _check_mart(chk, f"decomp:{cls}:{name}", X, Gf, P)
        if all(haz.m[t] == haz.m[0] for t in range(T + 1)):
            chk.eq(f"immersion:{cls}:flow_m", d.flow_parts[1][T], (ZERO,) * n, T)
        if cls.startswith("survival"):
            lit = decompose(kit, v.F_process, sp, tau, a.az, haz, literal=True)
            res.stats["literal_fails"] += not lit.telescopes()
        res.stats["decompositions"] += 1
    for _ in range(pairs):
        xi = measurable_var(rng, F[T])
        M = tuple(E(xi, F[t], P) for t in range(T + 1))
        V = (measurable_var(rng, F[0]),) + tuple(measurable_var(rng, F[t - 1]) for t in range(1, T + 1))
        _check_mart(chk, "mart:T(M)", transform_T(M, sp, tau, a.az), Gf, P)
        r1, r2 = gmart_identities(M, V, sp, tau, a.az, haz)
        for t in range(T + 1):
            chk.eq("gmart:(1)", r1[t], (ZERO,) * n, t)
            chk.eq("gmart:(2)", r2[t], (ZERO,) * n, t)
        res.stats["gmart_pairs"] += 1


def _task_decomp(seed: int) -> TaskResult:
    res = TaskResult()
    m, s = _aip_model(seed)
    chk = Checker(_ids(m), s)
    _check_decomp(m, random.Random(s), chk, res)
    res.stats["models"] += 1
    res.absorb(chk)
    return res


def _fixtures_decomp() -> TaskResult:
    res = TaskResult()
    for name in ("M1", "M2"):
        m = fixture(name)
        chk = Checker(_ids(m))
        _check_decomp(m, random.Random(0), chk, res)
        if name == "M2":
            a = m.analyze()
            kit = a.kit()
            v = price_vulnerable(kit, m.space, a.tau, a.az, a.defl, a.ps, a.Gfilt)
            d = decompose(kit, v.F_process, m.space, a.tau, a.az, a.haz)
            half = E(v.F_process[1], m.space.filtration[0], m.space.P)
            chk.eq("M2:Vtilde1", d.quad.Vtilde[1], tuple(x / 2 for x in half), 1)
        res.absorb(chk)
    return res


# --- options ---------------------------------------------------------------------

def _check_options(m: Model, chk: Checker, res: TaskResult):
    a = m.analyze()
    sp, tau, T = m.space, a.tau, m.T
    G, F = {}, {}
    for cls in CLASSES:
        kit = a.kit(cls, m.claim.g, m.claim.K)
        X = f_recursion(kit, sp, a.az, a.defl, a.ps)
        Y = options_simplify(kit, sp, a.az, a.defl, a.ps)
        for t in range(T + 1):
            chk.eq(f"options:{cls}:max-form", Y[t], X[t], t)
        F[cls] = X
        G[cls] = price_vulnerable(kit, sp, tau, a.az, a.defl, a.ps, a.Gfilt).G_report.prices
    for t in range(T + 1):
        top = tuple(max(x, y) for x, y in zip(G["survival_strict"][t], G["at_default"][t]))
        chk.ge("options:G3>=max(G1,G2)", G["mixed"][t], top, t)
        ftop = tuple(max(x, y) for x, y in zip(F["survival_strict"][t], F["at_default"][t]))
        chk.ge("options:F3>=max(F1,F2)", F["mixed"][t], ftop, t)
        chk.ge("options:G3<=G1+G2", tuple(x + y for x, y in zip(G["survival_strict"][t], G["at_default"][t])),
               G["mixed"][t], t)


def _task_options(seed: int) -> TaskResult:
    res = TaskResult()
    m, s = _aip_model(seed, nonneg_claim=True)
    chk = Checker(_ids(m), s)
    _check_options(m, chk, res)
    res.stats["models"] += 1
    res.absorb(chk)
    return res


def _fixtures_options() -> TaskResult:
    res = TaskResult()
    for name in ("M1", "M2"):
        m = fixture(name)
        chk = Checker(_ids(m))
        _check_options(m, chk, res)
        res.absorb(chk)
    return res


# --- preservation ----------------------------------------------------------------

def _task_preservation(seed: int, processes: int = 100, deadzone: bool = True) -> TaskResult:
    res = TaskResult()
    rng = random.Random(seed)
    m, s = _regime_model(seed, "z_identity")
    a = m.analyze()
    chk = Checker(_ids(m), s)
    n, T = m.n, m.T
    chk.truth("preservation:Z=1", all(a.defl.ZF[t] == (ONE,) * n for t in range(T + 1)), True)
    for _ in range(processes):
        X = random_aip_process(m, rng, rng.choice((1, 2)))
        chk.truth("preservation:stopped-aip", aip(stop(X, a.tau), a.Gfilt, m.space.P).overall, True)
        res.stats["processes"] += 1
    res.stats["z_identity_models"] += 1
    res.absorb(chk)
    if deadzone:
        m, s = _regime_model(seed, "with_deadzone")
        chk = Checker(_ids(m), s)
        _check_constructed(m, chk)
        res.stats["with_deadzone_models"] += 1
        res.absorb(chk)
    return res


def _check_constructed(m: Model, chk: Checker):
    a = m.analyze()
    sp, az, n, T = m.space, a.az, m.n, m.T
    F, P = sp.filtration, sp.P
    chk.truth("preservation:Z!=1", all(a.defl.ZF[t] == (ONE,) * n for t in range(T + 1)), False)
    X = [tuple((ZERO,) for _ in range(n))]
    for t in range(1, T + 1):
        dead = tuple(ONE if g == 0 else ZERO for g in az.Gt[t])
        ce = E(dead, F[t - 1], P)
        X.append(tuple((X[-1][w][0] + dead[w] - ce[w],) for w in range(n)))
    X = tuple(X)
    chk.truth("preservation:constructed-F", aip(X, F, P).overall, True)
    Xs = stop(X, a.tau)
    rep = aip(Xs, a.Gfilt, P)
    chk.truth("preservation:constructed-G", rep.overall, False)
    for t, atom, h in rep.violations():
        dX = tuple(tuple(x - y for x, y in zip(Xs[t + 1][w], Xs[t][w])) for w in range(n))
        chk.truth("preservation:certificate", _hull_certificate_ok(dX, atom, P, h.separator), True, t, atom)


def _fixtures_preservation() -> TaskResult:
    res = TaskResult()
    for name in ("M1", "M2"):
        m = fixture(name)
        a = m.analyze()
        chk = Checker(_ids(m))
        chk.truth(f"{name}:Z=1", all(z == ONE for row in a.defl.ZF for z in row), True)
        rng = random.Random(0)
        for _ in range(10):
            X = random_aip_process(m, rng, 1)
            chk.truth(f"{name}:stopped-aip", aip(stop(X, a.tau), a.Gfilt, m.space.P).overall, True)
        res.absorb(chk)
    m = fixture("M3")
    chk = Checker(_ids(m))
    _check_constructed(m, chk)
    res.absorb(chk)
    return res


# --- driver ----------------------------------------------------------------------

TASKS = {"esssup": _task_esssup, "aip": _task_aip, "onestep": _task_onestep, "multistep": _task_multistep,
         "decomp": _task_decomp, "options": _task_options, "preservation": _task_preservation}
FIXTURES = {"esssup": _fixtures_esssup, "aip": _fixtures_aip, "onestep": _fixtures_onestep,
            "multistep": _fixtures_multistep, "decomp": _fixtures_decomp, "options": _fixtures_options,
            "preservation": _fixtures_preservation}


def _run_task(args):
    name, seed = args
    try:
        return TASKS[name](seed)
    except GenerationError as exc:
        res = TaskResult()
        res.failures.append(Failure(f"{name}:generation", None, (), str(exc).replace(" ", "_"), "model", seed))
        return res


def _run_preservation(args):
    seed, dead = args
    try:
        return _task_preservation(seed, deadzone=dead)
    except GenerationError as exc:
        res = TaskResult()
        res.failures.append(Failure("preservation:generation", None, (), str(exc).replace(" ", "_"), "model", seed))
        return res


def workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return os.cpu_count() or 1


def _map(fn, args: Sequence, nworkers: int) -> list:
    if nworkers <= 1 or len(args) < 2:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=min(nworkers, len(args))) as ex:
        return list(ex.map(fn, args, chunksize=max(1, len(args) // (4 * nworkers))))


def run_suite(name: str, models: Optional[int] = None, seed: int = 0, nworkers: Optional[int] = None) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    count = DEFAULT_MODELS[name] if models is None else models
    if count < 0:
        raise ValueError("model count must be nonnegative")
    nworkers = workers() if nworkers is None else nworkers
    parts = [FIXTURES[name]()]
    seeds = list(range(seed, seed + count))
    if name == "preservation":
        # every model gets a z_identity check; one in five also gets a dead-zone model
        parts += _map(_run_preservation, [(s, i % 5 == 0) for i, s in enumerate(seeds)], nworkers)
    else:
        parts += _map(_run_task, [(name, s) for s in seeds], nworkers)
    checks, failures, stats = 0, [], Counter()
    for p in parts:
        checks += p.checks
        failures.extend(p.failures)
        stats.update(p.stats)
    return SuiteResult(name, count, seed, checks, failures, stats)


def run(suites: Sequence[str], models: Optional[int] = None, seed: int = 0,
        nworkers: Optional[int] = None) -> list:
    return [run_suite(s, models, seed, nworkers) for s in suites]


def report(results: Sequence[SuiteResult]) -> str:
    lines = []
    for r in results:
        lines.extend(r.lines())
    ok = all(r.ok for r in results)
    lines.append(f"overall={'pass' if ok else 'fail'}")
    return "\n".join(lines) + "\n"


__all__ = ["SUITES", "DEFAULT_MODELS", "WORKERS_ENV", "TaskResult", "SuiteResult", "fixture", "run_suite",
           "run", "report", "workers"]
