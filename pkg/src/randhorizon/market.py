"""Price processes S, S-bar, S-tilde, S^tau and discrete stochastic calculus.

A vector process is indexed [t][w] -> d-tuple.  A scalar process is indexed
[t][w] -> value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .horizon import AzemaPair
from .prob import ZERO, DomainError, FilteredSpace, Measure, Partition, E, measurable


@dataclass(frozen=True)
class PriceSystem:
    S: tuple
    Sbar: tuple
    Stilde: tuple
    Stau: tuple

    @property
    def d(self) -> int:
        return len(self.S[0][0])


@dataclass(frozen=True)
class Strategy:
    theta: tuple  # theta[t][w] -> d-tuple, held over (t, t+1]


def increments(X: Sequence, t: int) -> tuple:
    """Delta X_t per outcome, as d-tuples."""
    return tuple(tuple(a - b for a, b in zip(X[t][w], X[t - 1][w])) for w in range(len(X[t])))


def vec_adapted(X: Sequence, parts: Sequence[Partition]) -> bool:
    return all(measurable(X[t], parts[t]) for t in range(len(parts)))


def stop(X: Sequence, tau: Sequence) -> tuple:
    """X^tau_t = X_{t ^ tau} outcome-wise (works for scalar and vector processes)."""
    T = len(X) - 1
    return tuple(tuple(X[min(t, tau[w]) if tau[w] <= T else t][w] for w in range(len(X[t])))
                 for t in range(T + 1))


def build_derived(space: FilteredSpace, az: AzemaPair, S: Sequence, tau: Sequence) -> PriceSystem:
    T, n = space.horizon, space.n
    if len(S) != T + 1 or any(len(S[t]) != n for t in range(T + 1)):
        raise DomainError("price array must have shape (T+1) x outcomes x assets")
    d = len(S[0][0])
    for t in range(T + 1):
        for w in range(n):
            if len(S[t][w]) != d:
                raise DomainError("inconsistent asset count")
            if any(v < 0 for v in S[t][w]):
                raise DomainError(f"negative price at t={t}, outcome {space.outcomes[w]!r}")
        if not measurable(S[t], space.filtration[t]):
            raise DomainError(f"prices at time {t} are not F_{t}-measurable")
    S = tuple(tuple(tuple(Fraction(v) for v in S[t][w]) for w in range(n)) for t in range(T + 1))
    Sbar, Stilde = [S[0]], [S[0]]
    for t in range(1, T + 1):
        dS = increments(S, t)
        Sbar.append(tuple(tuple(a + (x if az.Gt[t][w] > 0 else ZERO) for a, x in zip(Sbar[-1][w], dS[w]))
                          for w in range(n)))
        Stilde.append(tuple(tuple(a + (x if az.G[t - 1][w] > 0 else ZERO) for a, x in zip(Stilde[-1][w], dS[w]))
                            for w in range(n)))
    return PriceSystem(S, tuple(Sbar), tuple(Stilde), stop(S, tau))


def sint(H: Sequence, X: Sequence) -> tuple:
    """(H.X)_t = sum_{1<=s<=t} H_s dX_s for scalar processes; (H.X)_0 = 0."""
    if len(H) != len(X):
        raise DomainError("length mismatch in stochastic integral")
    n = len(X[0])
    out = [(ZERO,) * n]
    for s in range(1, len(X)):
        out.append(tuple(out[-1][w] + H[s][w] * (X[s][w] - X[s - 1][w]) for w in range(n)))
    return tuple(out)


def bracket(X: Sequence, Y: Sequence) -> tuple:
    if len(X) != len(Y):
        raise DomainError("length mismatch in bracket")
    n = len(X[0])
    out = [(ZERO,) * n]
    for s in range(1, len(X)):
        out.append(tuple(out[-1][w] + (X[s][w] - X[s - 1][w]) * (Y[s][w] - Y[s - 1][w]) for w in range(n)))
    return tuple(out)


def angle(X: Sequence, Y: Sequence, parts: Sequence[Partition], mu: Measure) -> tuple:
    """<X,Y>_t = sum_{s<=t} E[dX_s dY_s | parts[s-1]]."""
    if len(X) != len(Y):
        raise DomainError("length mismatch in angle bracket")
    n = len(X[0])
    out = [(ZERO,) * n]
    for s in range(1, len(X)):
        prod = tuple((X[s][w] - X[s - 1][w]) * (Y[s][w] - Y[s - 1][w]) for w in range(n))
        ce = E(prod, parts[s - 1], mu)
        out.append(tuple(a + b for a, b in zip(out[-1], ce)))
    return tuple(out)


def pred_proj(X: Sequence, parts: Sequence[Partition], mu: Measure) -> tuple:
    """(p X)_t = E[X_t | parts[t-1]] for t >= 1; (p X)_0 = X_0."""
    return (tuple(X[0]),) + tuple(E(X[t], parts[t - 1], mu) for t in range(1, len(X)))


def delta(X: Sequence, t: int) -> tuple:
    return tuple(a - b for a, b in zip(X[t], X[t - 1]))


__all__ = [
    "PriceSystem", "Strategy", "increments", "vec_adapted", "stop", "build_derived",
    "sint", "bracket", "angle", "pred_proj", "delta",
]
