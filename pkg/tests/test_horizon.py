import random
from fractions import Fraction as Fr

import pytest

from randhorizon.extended import POS_INF
from randhorizon.generator import REGIMES, GenConfig, gen
from randhorizon.horizon import (azema, check_tau, deflator, enlarge, hazard, is_martingale, reduce,
                                 transform_T)
from randhorizon.laws import measurable_var
from randhorizon.prob import ONE, ZERO, DomainError, E, Partition


def _blocks(model, part):
    return sorted(tuple(model.space.outcomes[w] for w in b) for b in part.blocks)


def test_never_and_immediate_horizon(M2):
    sp = M2.space
    az = azema(sp, (POS_INF,) * 4)
    assert all(v == 1 for row in az.G + az.Gt for v in row)
    az = azema(sp, (0,) * 4)
    assert az.Gt[0] == (1,) * 4 and az.G[0] == (0,) * 4
    assert az.G[1] == az.Gt[1] == (0,) * 4
    assert all(z == 1 for row in deflator(sp, az).ZF for z in row)


def test_M2_azema(M2):
    az = azema(M2.space, M2.tau)
    assert az.G[0] == az.Gt[0] == (1,) * 4
    assert az.G[1] == (Fr(1, 2),) * 4 and az.Gt[1] == (1,) * 4


def test_enlargement(M2, M3):
    G = enlarge(M3.space, M3.tau)
    assert _blocks(M3, G[0]) == [("a",), ("b",)]
    G = enlarge(M2.space, M2.tau)
    assert _blocks(M2, G[1]) == [("dD",), ("dS",), ("uD",), ("uS",)]
    G = enlarge(M2.space, (POS_INF,) * 4)
    assert all(g.blocks == f.blocks for g, f in zip(G, M2.space.filtration))


def test_reduce(M3):
    G = enlarge(M3.space, M3.tau)
    assert reduce((Fr(5), Fr(7)), 1, M3.space, M3.tau, G) == (5, 5)
    assert reduce((Fr(3), Fr(3)), 1, M3.space, M3.tau, G) == (3, 3)
    ind = tuple(ONE if v <= 0 else ZERO for v in M3.tau)
    assert reduce(ind, 1, M3.space, M3.tau, G) == (0, 0)
    with pytest.raises(DomainError):
        reduce((Fr(1), Fr(2)), 1, M3.space, M3.tau, (Partition.trivial(2),) * 2)


def test_deflator_M3(M3):
    d = deflator(M3.space, azema(M3.space, M3.tau))
    assert d.ZF[1] == (2, 0)
    assert d.Qtilde.weights == (1, 0)


def test_hazard_M2(M2):
    h = hazard(M2.space, M2.tau, azema(M2.space, M2.tau))
    assert h.DoF[1] == (Fr(1, 2),) * 4
    assert h.m[0] == (1,) * 4


def test_hazard_never(M2):
    tau = (POS_INF,) * 4
    h = hazard(M2.space, tau, azema(M2.space, tau))
    assert all(v == 0 for row in h.NG + h.DoF for v in row)


def test_check_tau(M2):
    with pytest.raises(DomainError):
        check_tau(M2.space, (0, 1, 2, 0))
    with pytest.raises(DomainError):
        check_tau(M2.space, (0, 1))


def test_transform_of_constant_is_zero(M2):
    az = azema(M2.space, M2.tau)
    assert all(v == 0 for row in transform_T(((Fr(3),) * 4,) * 2, M2.space, M2.tau, az) for v in row)


def test_transform_identity_when_no_horizon(M2):
    tau = (POS_INF,) * 4
    az = azema(M2.space, tau)
    M = ((Fr(1),) * 4, (Fr(2), Fr(2), Fr(0), Fr(0)))
    assert transform_T(M, M2.space, tau, az)[1] == (1, 1, -1, -1)


def _models(k=40):
    return [gen(GenConfig(seed=s, regime=REGIMES[s % 4])) for s in range(k)]


def test_martingales_and_reconstruction():
    rng = random.Random(7)
    for m in _models():
        sp, tau = m.space, m.tau
        az = azema(sp, tau)
        G = enlarge(sp, tau)
        h = hazard(sp, tau, az)
        d = deflator(sp, az)
        assert is_martingale(h.m, sp.filtration, sp.P)
        assert is_martingale(d.ZF, sp.filtration, sp.P)
        assert is_martingale(h.NG, G, sp.P)
        assert all(h.DoF[t][w] >= h.DoF[t - 1][w] for t in range(1, m.T + 1) for w in range(m.n))
        xi = measurable_var(rng, sp.filtration[m.T])
        M = tuple(E(xi, sp.filtration[t], sp.P) for t in range(m.T + 1))
        assert is_martingale(transform_T(M, sp, tau, az), G, sp.P)
        for t in range(m.T + 1):
            for w in range(m.n):
                s = sum((h.DoF[u][w] - h.DoF[u - 1][w]) / az.Gt[u][w] for u in range(1, t + 1) if tau[w] >= u)
                assert (1 if tau[w] <= t else 0) == h.NG[t][w] + s


def test_set_identity_and_independent_tau():
    for m in _models():
        sp = m.space
        az = azema(sp, m.tau)
        for t in range(1, m.T + 1):
            p = E(tuple(ONE if g > 0 else ZERO for g in az.Gt[t]), sp.filtration[t - 1], sp.P)
            assert [x > 0 for x in p] == [g > 0 for g in az.G[t - 1]]
        if m.name.startswith("gen-independent"):
            assert all(v == 1 for row in hazard(sp, m.tau, az).m for v in row)


def test_deflator_regimes():
    for s in range(12):
        z = gen(GenConfig(seed=s, regime="z_identity"))
        assert all(v == 1 for row in deflator(z.space, azema(z.space, z.tau)).ZF for v in row)
        w = gen(GenConfig(seed=s, regime="with_deadzone"))
        assert any(v != 1 for row in deflator(w.space, azema(w.space, w.tau)).ZF for v in row)
