from fractions import Fraction as Fr
from itertools import combinations

from hypothesis import given, settings, strategies as st

from randhorizon.extended import NEG_INF, POS_INF
from randhorizon.lp import dot, hull_contains_zero, minimax


def test_minimax_examples():
    out = minimax([(Fr(1), (Fr(1),)), (Fr(0), (Fr(-1, 2),))])
    assert out.value == Fr(1, 3) and out.argmin == (Fr(2, 3),)
    out = minimax([(0, (1,)), (0, (-1,))])
    assert out.value == 0 and out.argmin == (0,)
    out = minimax([(0, (1,)), (0, (2,))])
    assert out.value == NEG_INF and out.certificate == (1,)


def test_minimax_infinite_payoffs():
    assert minimax([(POS_INF, (1,)), (0, (-1,))]).value == POS_INF
    assert minimax([(NEG_INF, (1,))]).value == NEG_INF
    assert minimax([(NEG_INF, (1,)), (Fr(2), (0,))]).value == 2


def test_minimax_no_exposure_is_plain_max():
    assert minimax([(Fr(3), (0, 0)), (Fr(-1), (0, 0))]).value == 3


def test_hull_examples():
    h = hull_contains_zero([(1,), (-1,)])
    assert h.contains and h.weights == (Fr(1, 2), Fr(1, 2))
    h = hull_contains_zero([(1,), (2,)])
    assert not h.contains and h.separator == (-1,)
    h = hull_contains_zero([(0,)])
    assert h.contains and h.weights == (1,)


# --- brute-force oracles ---------------------------------------------------------

def _solve(cols, rhs):
    """Unique solution of sum_j x_j cols[j] = rhs, or None (inconsistent or rank-deficient)."""
    m, k = len(rhs), len(cols)
    M = [[cols[j][i] for j in range(k)] + [rhs[i]] for i in range(m)]
    r = 0
    piv = []
    for c in range(k):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            return None
        M[r], M[p] = M[p], M[r]
        M[r] = [v / M[r][c] for v in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    if any(M[i][k] != 0 for i in range(r, m)):
        return None
    return [M[i][k] for i in range(k)]


def dual_value(rows):
    """max sum lambda_j c_j over lambda >= 0, sum lambda = 1, sum lambda a_j = 0, by vertex enumeration."""
    d = len(rows[0][1])
    best = None
    for size in range(1, d + 2):
        for S in combinations(range(len(rows)), size):
            cols = [(Fr(1),) + tuple(rows[j][1]) for j in S]
            lam = _solve(cols, (Fr(1),) + (Fr(0),) * d)
            if lam is None or any(v < 0 for v in lam):
                continue
            val = sum(l * rows[j][0] for l, j in zip(lam, S))
            best = val if best is None else max(best, val)
    return NEG_INF if best is None else best


small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def minimax_rows(draw, dmax=2):
    d = draw(st.integers(1, dmax))
    k = draw(st.integers(1, 5))
    return [(draw(small), tuple(draw(small) for _ in range(d))) for _ in range(k)]


@settings(max_examples=300, deadline=None)
@given(minimax_rows())
def test_minimax_matches_dual_enumeration(rows):
    out = minimax(rows)
    assert out.value == dual_value(rows)
    if out.value == NEG_INF:
        assert all(dot(out.certificate, a) >= 1 for _, a in rows)
    else:
        assert max(c - dot(out.argmin, a) for c, a in rows) == out.value


@settings(max_examples=300, deadline=None)
@given(minimax_rows(dmax=3))
def test_hull_matches_zero_claim_minimax(rows):
    vecs = [a for _, a in rows]
    h = hull_contains_zero(vecs)
    v = minimax([(Fr(0), a) for a in vecs]).value
    assert (v == 0) == h.contains and (v == NEG_INF) == (not h.contains)
    if h.contains:
        assert sum(h.weights) == 1 and all(w >= 0 for w in h.weights)
        assert all(sum(w * a[i] for w, a in zip(h.weights, vecs)) == 0 for i in range(len(vecs[0])))
    else:
        assert max(dot(h.separator, a) for a in vecs) == -1


@settings(max_examples=200, deadline=None)
@given(st.lists(small, min_size=1, max_size=6))
def test_scalar_hull_agrees_with_simplex(vals):
    vecs = [(v,) for v in vals]
    a = hull_contains_zero(vecs)
    b = hull_contains_zero(vecs, method="simplex")
    assert a.contains == b.contains
    if not a.contains:
        assert max(dot(b.separator, v) for v in vecs) < 0
