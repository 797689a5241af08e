import random

import pytest

from randhorizon.generator import (REGIMES, GenConfig, GenerationError, deadzone_times, gen,
                                   random_aip_process, regime_holds)
from randhorizon.horizon import azema, deflator
from randhorizon.modelfile import dumps
from randhorizon.pricing import aip


def test_deterministic():
    for regime in REGIMES:
        assert dumps(gen(GenConfig(seed=5, regime=regime))) == dumps(gen(GenConfig(seed=5, regime=regime)))
    assert dumps(gen(GenConfig(seed=5))) != dumps(gen(GenConfig(seed=6)))


def test_bounds_and_regimes():
    for s in range(40):
        cfg = GenConfig(seed=s, regime=REGIMES[s % 4], max_outcomes=9, max_T=2, max_d=2, denom_bound=6)
        m = gen(cfg)
        assert m.n <= 9 and 1 <= m.T <= 2 and m.d <= 2
        assert regime_holds(m, cfg.regime)
        assert all(p.denominator <= 6 * m.n * 64 for p in m.space.base_prob)


def test_deadzone_regimes_and_deflator():
    for s in range(15):
        z = gen(GenConfig(seed=s, regime="z_identity"))
        assert deadzone_times(z) == []
        assert all(v == 1 for row in deflator(z.space, azema(z.space, z.tau)).ZF for v in row)
        w = gen(GenConfig(seed=s, regime="with_deadzone"))
        assert deadzone_times(w)
        assert any(v != 1 for row in deflator(w.space, azema(w.space, w.tau)).ZF for v in row)


def test_aip_prices_flag():
    for s in range(20):
        m = gen(GenConfig(seed=s, regime=REGIMES[s % 4], aip_prices=True))
        assert aip(m.S, m.space.filtration, m.space.P).overall


def test_nonneg_claims_and_class():
    for s in range(10):
        m = gen(GenConfig(seed=s, nonneg_claim=True, claim_class="at_default"))
        assert m.claim.cls == "at_default"
        assert all(v >= 0 for proc in (m.claim.g, m.claim.K) for row in proc for v in row)


def test_random_aip_process():
    rng = random.Random(2)
    for s in range(20):
        m = gen(GenConfig(seed=s, regime=REGIMES[s % 4]))
        for d in (1, 2):
            X = random_aip_process(m, rng, d=d)
            assert len(X[0][0]) == d
            assert aip(X, m.space.filtration, m.space.P).overall


def test_bad_config():
    with pytest.raises(ValueError):
        GenConfig(regime="poisson")
    with pytest.raises(ValueError):
        GenConfig(max_T=0)


def test_unreachable_regime_raises():
    with pytest.raises(GenerationError):
        gen(GenConfig(seed=0, regime="with_deadzone", max_outcomes=1, retries=5))
