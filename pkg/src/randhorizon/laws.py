"""Outcome-wise checks of the conditional esssup calculus.

Two kinds of instances are used.  An abstract instance carries a family of
variables, a density Z and two nested partitions H1 <= H2 on a random finite
space.  A horizon instance carries a generated model with a random time and
families measurable for the enlarged filtration.  Every check is an exact
comparison at each outcome of the set the statement is about.

Q-esssup is undefined on Q-null blocks.  Where a statement holds P-a.s. and
still mentions the Q-esssup, the value -inf is used on those blocks (the
least element, which is what the essential supremum over a null set is).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .extended import NEG_INF, fmt, neg, pos
from .horizon import azema, deflator, enlarge, reduce
from .prob import (ONE, ZERO, E, Measure, Partition, cond_essinf, cond_esssup, measurable)


@dataclass(frozen=True)
class Failure:
    tag: str
    t: Optional[int]
    atom: tuple
    lhs: object
    rhs: object
    seed: Optional[int] = None

    def line(self) -> str:
        t = "-" if self.t is None else str(self.t)
        seed = "fixture" if self.seed is None else str(self.seed)
        return (f"FAIL tag={self.tag} seed={seed} t={t} atom={{{','.join(map(str, self.atom))}}} "
                f"lhs={_show(self.lhs)} rhs={_show(self.rhs)}")


def _show(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (tuple, list)):
        return "(" + ",".join(_show(x) for x in v) + ")"
    if isinstance(v, str):
        return v
    return fmt(v)


class Checker:
    """Collects exact comparisons; each outcome compared counts as one check."""

    def __init__(self, ids: Sequence[str], seed: Optional[int] = None):
        self.ids = tuple(ids)
        self.seed = seed
        self.checks = 0
        self.failures: list = []

    def fail(self, tag, t, atom, lhs, rhs):
        self.failures.append(Failure(tag, t, tuple(self.ids[w] for w in atom), lhs, rhs, self.seed))

    def eq(self, tag, lhs, rhs, t=None, where=None):
        for w in (range(len(lhs)) if where is None else where):
            self.checks += 1
            if lhs[w] != rhs[w]:
                self.fail(tag, t, (w,), lhs[w], rhs[w])

    def ge(self, tag, lhs, rhs, t=None, where=None):
        for w in (range(len(lhs)) if where is None else where):
            self.checks += 1
            if not lhs[w] >= rhs[w]:
                self.fail(tag, t, (w,), lhs[w], rhs[w])

    def same_set(self, tag, A, B, t=None, where=None):
        """Two events given as boolean vectors agree on ``where``."""
        for w in (range(len(A)) if where is None else where):
            self.checks += 1
            if bool(A[w]) != bool(B[w]):
                self.fail(tag, t, (w,), bool(A[w]), bool(B[w]))

    def truth(self, tag, lhs, rhs, t=None, atom=()):
        self.checks += 1
        if lhs != rhs:
            self.fail(tag, t, atom, lhs, rhs)


# --- small helpers ----------------------------------------------------------------

def _ind(pred) -> tuple:
    return tuple(ONE if p else ZERO for p in pred)


def _mul(c, X) -> tuple:
    """Indicator (0/1 vector) times X, by selection."""
    return tuple(x if k else ZERO for k, x in zip(c, X))


def _fam(G, c) -> list:
    return [_mul(c, X) for X in G]


def _or_neg_inf(X) -> tuple:
    return tuple(NEG_INF if x is None else x for x in X)


def _small(rng: random.Random, lo=-3, hi=3) -> Fraction:
    den = rng.choice((1, 2, 3, 4))
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_partition(rng: random.Random, n: int) -> Partition:
    k = rng.randint(1, n)
    labels = [rng.randrange(k) for _ in range(n)]
    return Partition.from_blocks(_group(labels), n)


def coarsen(rng: random.Random, part: Partition) -> Partition:
    k = rng.randint(1, len(part.blocks))
    labels = [rng.randrange(k) for _ in part.blocks]
    groups = {}
    for b, lab in zip(part.blocks, labels):
        groups.setdefault(lab, []).extend(b)
    return Partition.from_blocks(list(groups.values()), part.n)


def _group(labels) -> list:
    groups = {}
    for w, lab in enumerate(labels):
        groups.setdefault(lab, []).append(w)
    return list(groups.values())


def measurable_var(rng: random.Random, part: Partition, lo=-3, hi=3) -> tuple:
    out = [None] * part.n
    for b in part.blocks:
        v = _small(rng, lo, hi)
        for w in b:
            out[w] = v
    return tuple(out)


def measurable_family(rng: random.Random, part: Partition, lo=-3, hi=3) -> list:
    return [measurable_var(rng, part, lo, hi) for _ in range(rng.randint(1, 3))]


# --- abstract instances -----------------------------------------------------------

@dataclass
class EsssupInstance:
    n: int
    P: Measure
    H1: Partition
    H2: Partition
    Gamma: list            # H2-measurable
    Z: tuple               # H2-measurable density, E_P[Z] = 1
    X: tuple               # nonnegative H2-measurable variable
    Free: list = field(default_factory=list)   # arbitrary (discrete-measurable) family

    @property
    def Q(self) -> Measure:
        return self.P.with_density(self.Z)

    @property
    def nontrivial_null(self) -> bool:
        return any(z == 0 for z in self.Z)


def esssup_instance(rng: random.Random, max_n: int = 16, force_null: Optional[bool] = None) -> EsssupInstance:
    n = rng.randint(2, max_n)
    raw = [rng.randint(1, 4) for _ in range(n)]
    P = Measure(tuple(Fraction(r, sum(raw)) for r in raw))
    H2 = random_partition(rng, n)
    H1 = coarsen(rng, H2)
    null = rng.random() < 0.6 if force_null is None else force_null
    zb = []
    for _ in H2.blocks:
        zb.append(0 if null and rng.random() < 0.4 else rng.randint(1, 4))
    if all(v == 0 for v in zb):
        zb[rng.randrange(len(zb))] = rng.randint(1, 4)
    if null and all(v > 0 for v in zb) and len(zb) > 1:
        zb[rng.randrange(len(zb))] = 0
    zraw = [None] * n
    for b, v in zip(H2.blocks, zb):
        for w in b:
            zraw[w] = Fraction(v)
    mean = sum(z * p for z, p in zip(zraw, P.weights))
    Z = tuple(z / mean for z in zraw)
    X = tuple(pos(v) if rng.random() < 0.6 else ZERO for v in measurable_var(rng, H2, 0, 3))
    X = _h2_fix(X, H2)
    Free = [tuple(_small(rng) for _ in range(n)) for _ in range(rng.randint(1, 3))]
    return EsssupInstance(n, P, H1, H2, measurable_family(rng, H2), Z, X, Free)


def _h2_fix(X, H2):
    out = list(X)
    for b in H2.blocks:
        for w in b:
            out[w] = X[b[0]]
    return tuple(out)


def counterexample_instance(eps: Fraction = Fraction(1), variant: int = 0) -> EsssupInstance:
    """Two outcomes in one H1 block, Z = (2, 0): P(Z = 0 < Z^{H1}) = 1/2 > 0."""
    n = 2
    P = Measure((Fraction(1, 2), Fraction(1, 2)))
    H1 = Partition.trivial(n)
    H2 = Partition.discrete(n)
    Z = (Fraction(2), ZERO)
    pz0 = E(_ind(z == 0 for z in Z), H1, P)
    if variant == 0:
        gamma = tuple(-eps if p > 0 else ZERO for p in pz0)
    else:
        gamma = tuple(-eps if p > 0 else eps for p in pz0)
    return EsssupInstance(n, P, H1, H2, [gamma], Z, (ONE, ZERO), [gamma])


def check_counterexample(inst: EsssupInstance, chk: Checker):
    """The converse of the first claim of the sign assertion fails on this instance."""
    P, Q, H1 = inst.P, inst.Q, inst.H1
    zpos = [z > 0 for z in inst.Z]
    gt = cond_esssup(_fam(inst.Gamma, zpos), H1, P)
    gq = cond_esssup(inst.Gamma, H1, Q)
    chk.truth("counterexample:gamma>=0", all(v >= 0 for v in gt), True)
    chk.truth("counterexample:Q(gammaQ<0)>0",
              sum(Q.weights[w] for w in range(inst.n) if gq[w] is not None and gq[w] < 0) > 0, True)
    check_change_of_measure(inst, chk)


def check_calculus(inst: EsssupInstance, chk: Checker):
    """Tower, positive part, indicator lemma and duality for the free family."""
    n, P, Q = inst.n, inst.P, inst.Q
    G = inst.Free
    for mu, name in ((P, "P"), (Q, "Q")):
        s1 = cond_esssup(G, inst.H1, mu)
        s2 = cond_esssup(G, inst.H2, mu)
        live = [w for w in range(n) if mu.weights[w] > 0]
        chk.ge(f"tower:le[{name}]", s1, s2, where=live)
        chk.eq(f"tower:eq[{name}]", s1, cond_esssup([s2], inst.H1, mu), where=live)
        for part, pname in ((inst.H1, "H1"), (inst.H2, "H2")):
            s = cond_esssup(G, part, mu)
            chk.eq(f"positive_part:plus[{name},{pname}]", tuple(pos(v) if v is not None else None for v in s),
                   cond_esssup([tuple(pos(x) for x in X) for X in G], part, mu), where=live)
            chk.eq(f"positive_part:minus[{name},{pname}]", tuple(neg(v) if v is not None else None for v in s),
                   cond_essinf([tuple(neg(x) for x in X) for X in G], part, mu), where=live)
            inf = cond_essinf(G, part, mu)
            chk.eq(f"duality[{name},{pname}]", inf,
                   tuple(None if v is None else -v for v in cond_esssup([tuple(-x for x in X) for X in G], part, mu)),
                   where=live)
    # indicator lemma, base measure
    H = [x > 0 for x in G[0]]
    for part, pname in ((inst.H1, "H1"), (inst.H2, "H2")):
        sup = cond_esssup([_ind(H)], part, P)
        inf = cond_essinf([_ind(H)], part, P)
        smallest = [any(H[v] for v in part.block(w)) for w in range(n)]
        largest = [all(H[v] for v in part.block(w)) for w in range(n)]
        chk.eq(f"indicator:sup[{pname}]", sup, _ind(smallest))
        chk.eq(f"indicator:inf[{pname}]", inf, _ind(largest))
        chk.same_set(f"indicator:sup>0[{pname}]", [v > 0 for v in sup], [v == 1 for v in sup])
        chk.same_set(f"indicator:inf>0[{pname}]", [v > 0 for v in inf], [v == 1 for v in inf])


def check_change_of_measure(inst: EsssupInstance, chk: Checker):
    """Assertions (a) to (g) of the change of prior/filtration theorem and its essinf corollary."""
    n, P, Q, H1, G = inst.n, inst.P, inst.Q, inst.H1, inst.Gamma
    Z = inst.Z
    qsup = [w for w in range(n) if Q.weights[w] > 0]
    zpos = [z > 0 for z in Z]
    zero = [z == 0 for z in Z]
    pz0 = E(_ind(zero), H1, P)
    zH1 = E(Z, H1, P)
    gq = cond_esssup(G, H1, Q)                 # None on Q-null blocks
    gt = cond_esssup(_fam(G, zpos), H1, P)
    plain = cond_esssup(G, H1, P)
    gqx = _or_neg_inf(gq)

    # (a)
    X = inst.X
    Y = E(X, H1, P)
    xpos, xzero = [x > 0 for x in X], [x == 0 for x in X]
    chk.eq("cpf(a):sup{X>0}", cond_esssup([_ind(xpos)], H1, P), _ind(y > 0 for y in Y))
    chk.eq("cpf(a):inf{X>0}", cond_essinf([_ind(xpos)], H1, P), _ind(p == 1 for p in E(_ind(xpos), H1, P)))
    chk.eq("cpf(a):sup{X=0}", cond_esssup([_ind(xzero)], H1, P), _ind(p > 0 for p in E(_ind(xzero), H1, P)))
    chk.eq("cpf(a):inf{X=0}", cond_essinf([_ind(xzero)], H1, P), _ind(y == 0 for y in Y))
    # (b)
    chk.ge("cpf(b):gamma>=gammaQ", gt, gq, where=qsup)
    chk.ge("cpf(b):sign", _mul([p > 0 for p in pz0], gt), (ZERO,) * n)
    # (c)
    where = [w for w in qsup if gq[w] >= 0]
    chk.eq("cpf(c)", gq, gt, where=where)
    # (d)
    gq_plus = cond_esssup([tuple(pos(x) for x in X_) for X_ in G], H1, Q)
    chk.eq("cpf(d):first", tuple(pos(v) if v is not None else None for v in gq), gq_plus, where=qsup)
    chk.eq("cpf(d):second", gq_plus, tuple(pos(v) for v in gt), where=qsup)
    # (e)
    where = [w for w in range(n) if pz0[w] == 0]
    chk.eq("cpf(e):Q", gq, gt, where=where)
    chk.eq("cpf(e):P", gt, plain, where=where)
    # (f)
    if all(gq[w] >= 0 for w in qsup):
        chk.truth("cpf(f):implication", all(v >= 0 for v in gt), True)
    chk.same_set("cpf(f):positive", [gq[w] is not None and gq[w] > 0 for w in range(n)], [v > 0 for v in gt], where=qsup)
    chk.ge("cpf(f):zero-part", cond_esssup(_fam(G, zero), H1, P), (ZERO,) * n, where=qsup)
    # (g), P-a.s. with -inf on Q-null blocks
    lt = [gqx[w] < gt[w] for w in range(n)]
    chk.same_set("cpf(g):first", lt, [gqx[w] < 0 and pz0[w] > 0 for w in range(n)])
    chk.same_set("cpf(g):second", lt, [gqx[w] < 0 <= gt[w] for w in range(n)])
    chk.same_set("cpf(g):third", [v < 0 for v in gt], [pz0[w] == 0 and gqx[w] < 0 for w in range(n)])

    # essinf corollary
    it = cond_essinf(_fam(G, zpos), H1, P)
    iq = cond_essinf(G, H1, Q)
    onz = [w for w in range(n) if zH1[w] > 0]
    chk.ge("cpf-inf(a):first", iq, it, where=onz)
    chk.ge("cpf-inf(a):second", (ZERO,) * n, it, where=[w for w in range(n) if pz0[w] > 0])
    local = [w for w in onz if iq[w] <= 0]
    chk.eq("cpf-inf(b)", iq, it, where=local)
    if all(iq[w] <= 0 for w in qsup):
        chk.truth("cpf-inf(c)", all(v <= 0 for v in it), True)


# --- horizon instances ------------------------------------------------------------

def check_horizon_laws(space, tau, rng: random.Random, chk: Checker):
    """Laws that involve the random time, on one model with random families."""
    n, T, P = space.n, space.horizon, space.P
    F = space.filtration
    az = azema(space, tau)
    Gf = enlarge(space, tau)
    defl = deflator(space, az)
    Qt = defl.Qtilde
    Z = defl.ZF
    for t in range(T + 1):
        ge_t = [v >= t for v in tau]
        gt_t = [v > t for v in tau]
        chk.eq("main-cor:(1)sup", cond_esssup([_ind(ge_t)], F[t], P), _ind(g > 0 for g in az.Gt[t]), t)
        chk.eq("main-cor:(1)inf", cond_essinf([_ind(ge_t)], F[t], P), _ind(g == 1 for g in az.Gt[t]), t)
        chk.eq("main-cor:(2)sup", cond_esssup([_ind(gt_t)], F[t], P), _ind(g > 0 for g in az.G[t]), t)
        chk.eq("main-cor:(2)inf", cond_essinf([_ind(gt_t)], F[t], P), _ind(g == 1 for g in az.G[t]), t)
        if t == 0:
            continue
        Gm = az.G[t - 1]
        chk.eq("main-cor:(3)sup", cond_esssup([_ind(g > 0 for g in az.Gt[t])], F[t - 1], P), _ind(g > 0 for g in Gm), t)
        chk.eq("main-cor:(3)inf", cond_essinf([_ind(g == 1 for g in az.Gt[t])], F[t - 1], P), _ind(g == 1 for g in Gm), t)
        chk.eq("main-cor:(4)sup", cond_esssup([_ind(ge_t)], F[t - 1], P), _ind(g > 0 for g in Gm), t)
        chk.eq("main-cor:(4)inf", cond_essinf([_ind(ge_t)], F[t - 1], P), _ind(g == 1 for g in Gm), t)
        # set identity behind the deflator
        pg = E(_ind(g > 0 for g in az.Gt[t]), F[t - 1], P)
        chk.same_set("Qtilde:set-identity", [p > 0 for p in pg], [g > 0 for g in Gm], t)
        # Q-tilde corollary with an F_t-measurable family
        Gam = measurable_family(rng, F[t])
        gq = cond_esssup(Gam, F[t - 1], Qt)
        gtil = cond_esssup(_fam(Gam, [g > 0 for g in az.Gt[t]]), F[t - 1], P)
        alive = [g > 0 for g in Gm]
        lhs = tuple(gq[w] if alive[w] else ZERO for w in range(n))   # None cannot survive: Z_{t-1} > 0 there
        if all(v >= 0 for v in lhs):
            chk.truth("Qtilde-cor(a):sign", all(v >= 0 for v in gtil), True, t)
            chk.eq("Qtilde-cor(a):eq", lhs, gtil, t)
        if all(v >= 0 for v in gtil):
            dz = E(_ind(az.Gt[t][w] == 0 < Gm[w] for w in range(n)), F[t - 1], P)
            for w in range(n):
                if alive[w] and gq[w] is not None and gq[w] < 0:
                    chk.truth("Qtilde-cor(b)", dz[w] > 0, True, t, (w,))
        _check_G_vs_F(space, tau, az, Gf, t, rng, chk)
        _check_ineq_characterization(space, az, tau, t, rng, chk)
        # projection lemma through reduce
        Xg = measurable_var(rng, Gf[t - 1])
        Xr = reduce(Xg, t, space, tau, Gf)
        chk.truth("projection:measurable", measurable(Xr, F[t - 1]), True, t)
        chk.eq("projection:agree", Xr, Xg, t, where=[w for w in range(n) if tau[w] >= t])
        Xp = tuple(pos(x) for x in Xg)
        chk.ge("projection:nonneg", reduce(Xp, t, space, tau, Gf), (ZERO,) * n, t,
               where=[w for w in range(n) if tau[w] >= t])
    # deflator and universal preservation (b) <=> (c)
    chk.truth("deflator:Z0", Z[0] == (ONE,) * n, True)
    chk.truth("deflator:mass", sum(Qt.weights) == 1, True)
    ident = all(Z[t] == (ONE,) * n for t in range(T + 1))
    sets = all([az.G[t - 1][w] == 0 for w in range(n)] == [az.Gt[t][w] == 0 for w in range(n)]
               for t in range(1, T + 1))
    chk.truth("preservation:(b)<=>(c)", ident, sets)
    return az


def _check_G_vs_F(space, tau, az, Gf, t, rng, chk):
    """G-vs-F esssup theorem, assertions (a) to (d), and the esssup-to-expectation corollary."""
    n, P, F = space.n, space.P, space.filtration
    Gm = az.G[t - 1]
    I = [v >= t for v in tau]
    on = [w for w in range(n) if I[w]]
    Gam = measurable_family(rng, Gf[space.horizon])
    sG = cond_esssup(_fam(Gam, I), Gf[t - 1], P)
    sF = cond_esssup(_fam(Gam, I), F[t - 1], P)
    chk.ge("GvF(a):upper", sF, sG, t)
    chk.ge("GvF(a):sign", _mul([g < 1 for g in Gm], sF), (ZERO,) * n, t)
    sigma = [v >= 0 for v in sG]
    chk.eq("GvF(b):on-sigma", sG, _mul(I, sF), t, where=[w for w in range(n) if sigma[w]])
    one = [g == 1 for g in Gm]
    chk.eq("GvF(b):off-sigma", _mul(one, sF), _mul(one, sG), t, where=[w for w in range(n) if not sigma[w]])
    # (c) nonnegative family
    Gp = [tuple(pos(x) for x in X) for X in Gam]
    chk.eq("GvF(c):first", cond_esssup(_fam(Gp, I), Gf[t - 1], P), cond_esssup(_fam(Gp, I), F[t - 1], P), t, where=on)
    infG = cond_essinf(Gp, Gf[t - 1], P)
    chk.eq("GvF(c):second", infG, cond_esssup([cond_essinf(_fam(Gp, I), Gf[t - 1], P)], F[t - 1], P), t, where=on)
    # (d) signed decomposition
    Gpl = [tuple(pos(x) for x in X) for X in Gam]
    Gmi = [tuple(neg(x) for x in X) for X in Gam]
    lhs = _mul(I, cond_esssup(Gam, Gf[t - 1], P))
    a = _mul(I, cond_esssup(_fam(Gpl, I), F[t - 1], P))
    b = _mul(one, cond_esssup(_fam([tuple(-x for x in X) for X in Gmi], I), F[t - 1], P))
    c = _mul([I[w] and Gm[w] < 1 for w in range(n)],
             cond_esssup([cond_essinf(_fam(Gmi, I), Gf[t - 1], P)], F[t - 1], P))
    chk.eq("GvF(d)", lhs, tuple(a[w] + b[w] - c[w] for w in range(n)), t)
    # esssup-to-expectation corollary
    Y = measurable_var(rng, Gf[t - 1], 0, 3)
    YI = _mul(I, Y)
    s = cond_esssup([YI], F[t - 1], P)
    chk.eq("esssup-to-E:pathwise", YI, _mul(I, s), t)
    chk.eq("esssup-to-E:expectation", E(YI, F[t - 1], P), tuple(Gm[w] * s[w] for w in range(n)), t)


def _check_ineq_characterization(space, az, tau, t, rng, chk):
    """Inequalities on {tau = t}, {tau > t}, {tau >= t} seen through (G, Gtilde)."""
    n, F = space.n, space.filtration
    X = measurable_var(rng, F[t])
    K = measurable_var(rng, F[t])
    if rng.random() < 0.5:      # make the inequalities hold often enough to matter
        X = tuple(max(x, k) for x, k in zip(X, K))
    Gt, G = az.Gt[t], az.G[t]

    def holds(sel_l, sel_r, lhs=X, rhs=K):
        return all((lhs[w] if sel_l[w] else ZERO) >= (rhs[w] if sel_r[w] else ZERO) for w in range(n))

    eq_t = [v == t for v in tau]
    gt_t = [v > t for v in tau]
    ge_t = [v >= t for v in tau]
    jump = [Gt[w] > G[w] for w in range(n)]
    chk.truth("ineq(a)", holds(eq_t, eq_t), holds(jump, jump), t)
    chk.truth("ineq(b)", holds(gt_t, gt_t), holds([g > 0 for g in G], [g > 0 for g in G]), t)
    chk.truth("ineq(c)", holds(ge_t, ge_t), holds([g > 0 for g in Gt], [g > 0 for g in Gt]), t)
    rhs = tuple(K[w] if Gt[w] > G[w] == 0 else (pos(K[w]) if Gt[w] > G[w] > 0 else ZERO) for w in range(n))
    chk.truth("ineq(d)", holds(ge_t, eq_t), holds([g > 0 for g in Gt], [True] * n, X, rhs), t)


__all__ = ["Failure", "Checker", "EsssupInstance", "esssup_instance", "counterexample_instance",
           "check_counterexample", "check_calculus", "check_change_of_measure", "check_horizon_laws",
           "random_partition", "coarsen", "measurable_var", "measurable_family"]
