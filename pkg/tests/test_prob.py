from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from randhorizon.extended import NEG_INF, POS_INF, ExtendedArithmeticError, fmt, parse_ext
from randhorizon.horizon import azema
from randhorizon.prob import (DomainError, FilteredSpace, Measure, Partition, cond_essinf, cond_esssup,
                              cond_expect, finest_measurable, indicator, measurable)

U4 = Measure((Fr(1, 4),) * 4)


def test_cond_expect_block_means():
    part = Partition.from_blocks([[0, 1], [2, 3]], 4)
    val, mask = cond_expect((1, 2, 3, 4), part, U4)
    assert val == (Fr(3, 2), Fr(3, 2), Fr(7, 2), Fr(7, 2))
    assert mask == (False,) * 4


def test_cond_expect_null_block_is_masked_zero():
    mu = Measure((Fr(0), Fr(0), Fr(1, 2), Fr(1, 2)))
    val, mask = cond_expect((5, 6, 1, 3), Partition.from_blocks([[0, 1], [2, 3]], 4), mu)
    assert val == (0, 0, 2, 2)
    assert mask == (True, True, False, False)


def test_cond_expect_rejects_infinite_values():
    with pytest.raises(DomainError):
        cond_expect((POS_INF, 1), Partition.trivial(2), Measure((Fr(1, 2), Fr(1, 2))))


def test_M2_survival_probability(M2):
    az = azema(M2.space, M2.tau)
    assert az.G[1] == (Fr(1, 2),) * 4


def test_esssup_examples():
    third = Measure((Fr(1, 3),) * 3)
    assert cond_esssup([(1, 2, 3)], Partition.trivial(3), third) == (3, 3, 3)
    half = Measure((Fr(1, 2),) * 2)
    assert cond_esssup([(1, -1), (-1, 1)], Partition.discrete(2), half) == (1, 1)
    assert cond_esssup([(5, 0)], Partition.trivial(2), Measure((Fr(0), Fr(1)))) == (0, 0)


def test_esssup_null_block_masked():
    mu = Measure((Fr(0), Fr(1)))
    assert cond_esssup([(5, 0)], Partition.discrete(2), mu) == (None, 0)


def test_essinf_examples():
    third = Measure((Fr(1, 3),) * 3)
    assert cond_essinf([(1, 2, 3)], Partition.trivial(3), third) == (1, 1, 1)
    part = Partition.from_blocks([[0, 1], [2, 3]], 4)
    H = indicator([True, False, True, True])
    assert cond_essinf([H], part, U4) == (0, 0, 1, 1)
    assert cond_esssup([H], part, U4) == (1, 1, 1, 1)


def test_empty_family_rejected():
    with pytest.raises(DomainError):
        cond_esssup([], Partition.trivial(1), Measure((Fr(1),)))
    with pytest.raises(DomainError):
        cond_essinf([], Partition.trivial(1), Measure((Fr(1),)))


def test_space_invariants():
    t0 = Partition.from_blocks([[0, 1]], 2)
    with pytest.raises(DomainError):
        FilteredSpace(("a", "b"), (Fr(1), Fr(0)), 0, (t0,))
    with pytest.raises(DomainError):
        FilteredSpace(("a", "b"), (Fr(1, 3), Fr(1, 3)), 0, (t0,))
    fine = Partition.discrete(3)
    coarse = Partition.from_blocks([[0, 1], [2]], 3)
    other = Partition.from_blocks([[0], [1, 2]], 3)
    with pytest.raises(DomainError):
        FilteredSpace(("a", "b", "c"), (Fr(1, 3),) * 3, 1, (coarse, other))
    FilteredSpace(("a", "b", "c"), (Fr(1, 3),) * 3, 1, (coarse, fine))


def test_partition_errors():
    with pytest.raises(DomainError):
        Partition.from_blocks([[0], [0, 1]], 2)
    with pytest.raises(DomainError):
        Partition.from_blocks([[0]], 2)
    with pytest.raises(DomainError):
        Partition.from_blocks([[0, 1], []], 2)


def test_finest_measurable():
    parts = (Partition.trivial(4), Partition.from_blocks([[0, 1], [2, 3]], 4), Partition.discrete(4))
    assert finest_measurable((1, 1, 1, 1), parts) == 0
    assert finest_measurable((1, 1, 2, 2), parts) == 1
    assert finest_measurable((1, 2, 2, 2), parts) == 2
    assert not measurable((1, 2, 2, 2), parts[1])


def test_extended_arithmetic():
    assert NEG_INF < Fr(-10**9) < POS_INF
    assert POS_INF + 3 == POS_INF and -POS_INF == NEG_INF
    with pytest.raises(ExtendedArithmeticError):
        POS_INF + NEG_INF
    with pytest.raises(ExtendedArithmeticError):
        POS_INF * 0
    assert parse_ext("-inf") == NEG_INF and parse_ext("3/6") == Fr(1, 2)
    assert fmt(Fr(2, 4)) == "1/2" and fmt(NEG_INF) == "-inf" and fmt(None) == "masked"
    with pytest.raises(ValueError):
        parse_ext("1/0")


# --- properties ------------------------------------------------------------------

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def instances(draw):
    n = draw(st.integers(1, 8))
    raw = draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    if sum(raw) == 0:
        raw[0] = 1
    mu = Measure(tuple(Fr(r, sum(raw)) for r in raw))
    fine_labels = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    fine = Partition.from_blocks(_groups(fine_labels), n)
    merge = draw(st.lists(st.integers(0, 1), min_size=len(fine.blocks), max_size=len(fine.blocks)))
    coarse_groups = {}
    for b, lab in zip(fine.blocks, merge):
        coarse_groups.setdefault(lab, []).extend(b)
    coarse = Partition.from_blocks(list(coarse_groups.values()), n)
    fam = draw(st.lists(st.lists(rationals, min_size=n, max_size=n).map(tuple), min_size=1, max_size=3))
    return mu, coarse, fine, fam


def _groups(labels):
    g = {}
    for w, lab in enumerate(labels):
        g.setdefault(lab, []).append(w)
    return list(g.values())


def _live(mu, part):
    return [w for w in range(part.n) if mu.mass(part.block(w)) > 0]


@settings(max_examples=150, deadline=None)
@given(instances())
def test_duality(inst):
    mu, _, fine, fam = inst
    inf = cond_essinf(fam, fine, mu)
    sup = cond_esssup([tuple(-x for x in X) for X in fam], fine, mu)
    assert inf == tuple(None if v is None else -v for v in sup)


@settings(max_examples=150, deadline=None)
@given(instances())
def test_tower_and_monotonicity(inst):
    mu, coarse, fine, fam = inst
    s_fine = cond_esssup(fam, fine, mu)
    s_coarse = cond_esssup(fam, coarse, mu)
    filled = tuple(NEG_INF if v is None else v for v in s_fine)
    assert cond_esssup([filled], coarse, mu) == s_coarse
    for w in _live(mu, fine):
        assert s_fine[w] <= s_coarse[w]


@settings(max_examples=150, deadline=None)
@given(instances())
def test_positive_and_negative_parts(inst):
    mu, _, fine, fam = inst
    sup = cond_esssup(fam, fine, mu)
    sup_pos = cond_esssup([tuple(max(x, 0) for x in X) for X in fam], fine, mu)
    inf_neg = cond_essinf([tuple(max(-x, 0) for x in X) for X in fam], fine, mu)
    for w in _live(mu, fine):
        assert max(sup[w], 0) == sup_pos[w]
        assert max(-sup[w], 0) == inf_neg[w]


@settings(max_examples=150, deadline=None)
@given(instances(), st.lists(st.booleans(), min_size=8, max_size=8))
def test_indicator_hulls(inst, bits):
    mu, _, fine, _ = inst
    H = bits[:fine.n]
    sup = cond_esssup([indicator(H)], fine, mu)
    inf = cond_essinf([indicator(H)], fine, mu)
    for w in _live(mu, fine):
        live = [v for v in fine.block(w) if mu.weights[v] > 0]
        assert sup[w] == (1 if any(H[v] for v in live) else 0)
        assert inf[w] == (1 if all(H[v] for v in live) else 0)
