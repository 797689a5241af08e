"""Seeded random generator of finite models with a random horizon.

Filtrations are grown as event trees with mostly binary/ternary branching;
each leaf (an F_T block) holds one or more outcomes that differ only in tau.
The tau regime controls how tau relates to the tree:

- independent: every leaf carries the same tau law (tau independent of F_T);
- correlated: tau drawn per outcome;
- z_identity: dead subtrees always start with a default at the branching
  time, so {G_{t-1}=0} = {Gtilde_t=0} for all t;
- with_deadzone: some subtree dies strictly before its branching time while
  its parent is still alive, so P(Gtilde_t = 0 < G_{t-1}) > 0.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .extended import POS_INF
from .horizon import azema
from .lp import hull_contains_zero
from .model import Claim, Model
from .pricing import CLASSES
from .prob import FilteredSpace, Partition

REGIMES = ("independent", "correlated", "with_deadzone", "z_identity")


class GenerationError(RuntimeError):
    """The requested regime could not be produced within the retry budget."""


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_outcomes: int = 16
    max_T: int = 3
    max_d: int = 2
    denom_bound: int = 12
    regime: str = "correlated"
    aip_prices: bool = True       # grow S so that 0 is in each node's increment hull
    quiet_deadzone: bool = False  # freeze S on dead-zone children (no-jump condition)
    claim_class: Optional[str] = None
    nonneg_claim: bool = False
    retries: int = 200

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown tau regime {self.regime!r}")
        if min(self.max_outcomes, self.max_T, self.max_d, self.denom_bound) < 1:
            raise ValueError("generator bounds must be positive")


class _Node:
    __slots__ = ("t", "parent", "children", "outcomes", "S", "g", "K", "dead")

    def __init__(self, t, parent):
        self.t, self.parent = t, parent
        self.children, self.outcomes = [], []
        self.S = self.g = self.K = None
        self.dead = False


def _small(rng: random.Random, lo: int, hi: int, bound: int) -> Fraction:
    den = rng.choice([q for q in (1, 2, 3, 4) if q <= bound])
    return Fraction(rng.randint(lo * den, hi * den), den)


def _grow(rng, T, cap):
    """Event tree with a virtual root; returns (roots at t=0, nodes by time)."""
    top = _Node(-1, None)
    levels = [[] for _ in range(T + 1)]
    n0 = 2 if rng.random() < 0.15 else 1
    frontier = []
    for _ in range(n0):
        nd = _Node(0, top)
        top.children.append(nd)
        levels[0].append(nd)
        frontier.append(nd)
    for t in range(1, T + 1):
        nxt = []
        for nd in frontier:
            k = rng.choices((1, 2, 3), weights=(2, 5, 2))[0]
            for _ in range(k):
                ch = _Node(t, nd)
                nd.children.append(ch)
                levels[t].append(ch)
                nxt.append(ch)
        frontier = nxt
        if len(frontier) > cap:
            return None
    return top, levels


def _subtree_leaves(nd):
    if not nd.children:
        return [nd]
    out = []
    for c in nd.children:
        out.extend(_subtree_leaves(c))
    return out


def _assign_tau(rng, cfg, T, levels):
    """Attach outcome records (tau, weight) to leaves; returns False on failure."""
    leaves = levels[T]
    times = list(range(T + 1))
    if cfg.regime == "independent":
        k = rng.randint(1, max(1, min(3, cfg.max_outcomes // len(leaves))))
        vals = rng.sample(times + [POS_INF], k)
        q = [rng.randint(1, 3) for _ in vals]
        for lf in leaves:
            lf.outcomes = [(v, qq) for v, qq in zip(vals, q)]
        return True

    if cfg.regime == "correlated":
        for lf in leaves:
            m = rng.choice((1, 1, 2))
            lf.outcomes = [(POS_INF if rng.random() < 0.45 else rng.choice(times), rng.randint(1, 3))
                           for _ in range(m)]
        return True

    # z_identity / with_deadzone: choose dead subtrees
    def kill(nd, latest):
        """All outcomes below nd get tau <= latest; one of them gets exactly latest."""
        recs = []
        for lf in _subtree_leaves(nd):
            lf.outcomes = [(rng.randint(0, latest), rng.randint(1, 3)) for _ in range(rng.choice((1, 1, 2)))]
            recs.append(lf)
        return recs

    def alive_leaf(lf):
        m = rng.choice((1, 1, 2))
        recs = [(POS_INF, rng.randint(1, 3))]
        for _ in range(m - 1):
            recs.append((rng.choice(times + [POS_INF]), rng.randint(1, 3)))
        rng.shuffle(recs)
        lf.outcomes = recs

    forced = None
    if cfg.regime == "with_deadzone":
        cands = [nd for t in range(1, T + 1) for nd in levels[t] if len(nd.parent.children) >= 2]
        if not cands:
            return False
        forced = rng.choice(cands)

    def walk(nd):
        if nd is forced:
            kill(nd, nd.t - 1)
            nd.dead = True
            return
        if rng.random() < 0.2:
            leaves_ = kill(nd, nd.t)
            lf = rng.choice(leaves_)
            j = rng.randrange(len(lf.outcomes))
            lf.outcomes[j] = (nd.t, lf.outcomes[j][1])
            return
        if not nd.children:
            alive_leaf(nd)
            return
        for c in nd.children:
            walk(c)

    for r in levels[0]:
        walk(r)
    return True


def _grow_prices(rng, cfg, d, levels, T, top):
    for r in levels[0]:
        r.S = tuple(Fraction(rng.randint(2, 6)) for _ in range(d))
    for t in range(T):
        for nd in levels[t]:
            k = len(nd.children)
            quiet = [cfg.quiet_deadzone and c.dead for c in nd.children]
            free = [i for i in range(k) if not quiet[i]]
            inc = [tuple(Fraction(0) for _ in range(d)) for _ in range(k)]
            if cfg.aip_prices:
                if len(free) >= 2:
                    for i in free[:-1]:
                        inc[i] = tuple(_small(rng, -2, 2, cfg.denom_bound) for _ in range(d))
                    w = [Fraction(rng.randint(1, 3)) for _ in free]
                    last = free[-1]
                    inc[last] = tuple(-sum(w[j] * inc[i][c] for j, i in enumerate(free[:-1])) / w[-1]
                                      for c in range(d))
            else:
                for i in free:
                    inc[i] = tuple(_small(rng, -2, 2, cfg.denom_bound) for _ in range(d))
            scale = Fraction(1)
            while any(nd.S[c] + scale * inc[i][c] < 0 for i in range(k) for c in range(d)):
                scale /= 2
                if scale < Fraction(1, 8):
                    scale = Fraction(0)
            for i, ch in enumerate(nd.children):
                ch.S = tuple(nd.S[c] + scale * inc[i][c] for c in range(d))


def _claim_values(rng, cfg, levels, T):
    lo = 0 if cfg.nonneg_claim else -2
    for t in range(T + 1):
        for nd in levels[t]:
            nd.g = _small(rng, lo, 3, cfg.denom_bound)
            nd.K = _small(rng, lo, 3, cfg.denom_bound)


def _build(rng, cfg):
    T = rng.randint(1, cfg.max_T)
    d = rng.randint(1, cfg.max_d)
    grown = _grow(rng, T, cfg.max_outcomes)
    if grown is None:
        return None
    top, levels = grown
    if not _assign_tau(rng, cfg, T, levels):
        return None
    leaves = levels[T]
    n = sum(len(lf.outcomes) for lf in leaves)
    if n > cfg.max_outcomes:
        return None
    _grow_prices(rng, cfg, d, levels, T, top)
    _claim_values(rng, cfg, levels, T)

    # outcome order: leaves left to right
    outcome_leaf, taus, weights = [], [], []
    leaf_w = {id(lf): rng.randint(1, 3) for lf in leaves}
    for lf in leaves:
        tot = sum(q for _, q in lf.outcomes)
        for v, q in lf.outcomes:
            outcome_leaf.append(lf)
            taus.append(v)
            weights.append(Fraction(leaf_w[id(lf)] * q, tot))
    Z = sum(weights)
    probs = tuple(wt / Z for wt in weights)
    ids = tuple(f"w{i}" for i in range(n))

    def ancestor(lf, t):
        nd = lf
        while nd.t > t:
            nd = nd.parent
        return nd

    parts, S, g, K = [], [], [], []
    for t in range(T + 1):
        groups = {}
        for i, lf in enumerate(outcome_leaf):
            groups.setdefault(id(ancestor(lf, t)), []).append(i)
        parts.append(Partition.from_blocks(list(groups.values()), n))
        S.append(tuple(ancestor(lf, t).S for lf in outcome_leaf))
        g.append(tuple(ancestor(lf, t).g for lf in outcome_leaf))
        K.append(tuple(ancestor(lf, t).K for lf in outcome_leaf))
    space = FilteredSpace(ids, probs, T, tuple(parts))
    cls = cfg.claim_class or rng.choice(CLASSES)
    return Model(space, tuple(taus), tuple(S), Claim(cls, tuple(g), tuple(K)), f"gen-{cfg.regime}-{cfg.seed}")


def deadzone_times(model: Model) -> list:
    """Times t >= 1 with P(Gtilde_t = 0 < G_{t-1}) > 0."""
    az = azema(model.space, model.tau)
    return [t for t in range(1, model.T + 1)
            if any(az.Gt[t][w] == 0 < az.G[t - 1][w] for w in range(model.n))]


def regime_holds(model: Model, regime: str) -> bool:
    if regime == "with_deadzone":
        return bool(deadzone_times(model))
    if regime == "z_identity":
        return not deadzone_times(model)
    if regime == "independent":
        az = azema(model.space, model.tau)
        return all(len(set(az.Gt[t])) == 1 and len(set(az.G[t])) == 1 for t in range(model.T + 1))
    return True


def gen(cfg: GenConfig) -> Model:
    rng = random.Random(cfg.seed)
    for _ in range(cfg.retries):
        m = _build(rng, cfg)
        if m is not None and regime_holds(m, cfg.regime):
            return m
    raise GenerationError(f"regime {cfg.regime!r} not reached within {cfg.retries} attempts")


def random_aip_process(model: Model, rng: random.Random, d: int = 1, parts=None) -> tuple:
    """A process adapted to ``parts`` (default F) with 0 in every node's increment hull under P."""
    parts = parts or model.space.filtration
    n, T = model.n, model.T
    X = [[None] * n for _ in range(T + 1)]
    for b in parts[0].blocks:
        v = tuple(_small(rng, -3, 3, 4) for _ in range(d))
        for w in b:
            X[0][w] = v
    for t in range(1, T + 1):
        for b in parts[t - 1].blocks:
            kids = sorted({parts[t].block_of[w] for w in b})
            k = len(kids)
            inc = [tuple(Fraction(0) for _ in range(d)) for _ in range(k)]
            if k >= 2:
                for i in range(k - 1):
                    inc[i] = tuple(_small(rng, -2, 2, 4) for _ in range(d))
                wts = [Fraction(rng.randint(1, 3)) for _ in range(k)]
                inc[-1] = tuple(-sum(wts[i] * inc[i][c] for i in range(k - 1)) / wts[-1] for c in range(d))
                order = list(range(k))
                rng.shuffle(order)
                inc = [inc[i] for i in order]
            for i, kb in enumerate(kids):
                for w in parts[t].blocks[kb]:
                    X[t][w] = tuple(a + c for a, c in zip(X[t - 1][w], inc[i]))
    out = tuple(tuple(r) for r in X)
    assert all(hull_contains_zero([tuple(a - c for a, c in zip(out[t][w], out[t - 1][w])) for w in b]).contains
               for t in range(1, T + 1) for b in parts[t - 1].blocks)
    return out


__all__ = ["REGIMES", "GenConfig", "GenerationError", "gen", "deadzone_times", "regime_holds",
           "random_aip_process"]
