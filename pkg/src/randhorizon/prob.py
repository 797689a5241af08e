"""Finite filtered probability spaces and the conditional esssup calculus.

Outcomes are indexed 0..n-1.  A random variable is a tuple with one
extended rational per outcome.  Partitions are tuples of blocks, each block
a sorted tuple of outcome indices.  Values computed on mu-null blocks are
reported as ``None`` (masked) by esssup/essinf; conditional expectations
return 0 there and flag the block in a separate mask.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .extended import NEG_INF, POS_INF, is_inf

ZERO = Fraction(0)
ONE = Fraction(1)

RandVar = tuple


class DomainError(ValueError):
    """Invalid input to a probability operation."""


class ConsistencyError(RuntimeError):
    """An identity that must hold by construction was violated."""


@dataclass(frozen=True)
class Partition:
    blocks: tuple
    block_of: tuple = field(repr=False, compare=False)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], n: int) -> "Partition":
        norm = tuple(sorted(tuple(sorted(b)) for b in blocks))
        owner = [-1] * n
        for k, b in enumerate(norm):
            if not b:
                raise DomainError("empty block in partition")
            for w in b:
                if not 0 <= w < n:
                    raise DomainError(f"outcome index {w} out of range")
                if owner[w] != -1:
                    raise DomainError(f"outcome {w} appears in two blocks")
                owner[w] = k
        missing = [w for w in range(n) if owner[w] == -1]
        if missing:
            raise DomainError(f"outcomes {missing} not covered by partition")
        return cls(norm, tuple(owner))

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        return cls.from_blocks([range(n)], n)

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls.from_blocks([[w] for w in range(n)], n)

    @property
    def n(self) -> int:
        return len(self.block_of)

    def refines(self, coarser: "Partition") -> bool:
        return all(len({coarser.block_of[w] for w in b}) == 1 for b in self.blocks)

    def block(self, w: int) -> tuple:
        return self.blocks[self.block_of[w]]

    def intersect(self, labels: Sequence) -> "Partition":
        """Split every block by the value of ``labels`` (one label per outcome)."""
        groups = {}
        for k, b in enumerate(self.blocks):
            for w in b:
                groups.setdefault((k, labels[w]), []).append(w)
        return Partition.from_blocks(list(groups.values()), self.n)


@dataclass(frozen=True)
class Measure:
    weights: tuple
    density: Optional[tuple] = None

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise DomainError("negative measure weight")
        if sum(self.weights) != 1:
            raise DomainError("measure weights do not sum to 1")

    def mass(self, block) -> Fraction:
        return sum((self.weights[w] for w in block), ZERO)

    def support(self) -> tuple:
        return tuple(w for w, p in enumerate(self.weights) if p > 0)

    def with_density(self, Z: Sequence[Fraction]) -> "Measure":
        """Q = Z * self; Z must be nonnegative with E[Z] = 1."""
        if any(z < 0 for z in Z):
            raise DomainError("density has negative values")
        return Measure(tuple(z * p for z, p in zip(Z, self.weights)), tuple(Z))


@dataclass(frozen=True)
class FilteredSpace:
    outcomes: tuple
    base_prob: tuple
    horizon: int
    filtration: tuple

    def __post_init__(self):
        n = len(self.outcomes)
        if len(set(self.outcomes)) != n:
            raise DomainError("duplicate outcome identifiers")
        if len(self.base_prob) != n:
            raise DomainError("one probability per outcome is required")
        for o, p in zip(self.outcomes, self.base_prob):
            if p <= 0:
                raise DomainError(f"outcome {o!r} has non-positive probability {p}")
        if sum(self.base_prob) != 1:
            raise DomainError("probabilities do not sum to 1")
        if len(self.filtration) != self.horizon + 1:
            raise DomainError("filtration must list T+1 partitions")
        for t in range(1, self.horizon + 1):
            if not self.filtration[t].refines(self.filtration[t - 1]):
                raise DomainError(f"partition at time {t} does not refine time {t - 1}")

    @property
    def n(self) -> int:
        return len(self.outcomes)

    @property
    def P(self) -> Measure:
        return Measure(self.base_prob)


def const(c, n: int) -> RandVar:
    return (c,) * n


def indicator(pred: Sequence[bool]) -> RandVar:
    return tuple(ONE if b else ZERO for b in pred)


def measurable(X: RandVar, part: Partition) -> bool:
    return all(len({X[w] for w in b}) == 1 for b in part.blocks)


def finest_measurable(X: RandVar, filtration: Sequence[Partition]) -> Optional[int]:
    """Smallest time index t such that X is measurable w.r.t. filtration[t]."""
    for t, part in enumerate(filtration):
        if measurable(X, part):
            return t
    return None


def cond_expect(X: RandVar, part: Partition, mu: Measure):
    """Return (E_mu[X | part], mask); mask[w] is True on mu-null blocks."""
    out = [ZERO] * part.n
    mask = [False] * part.n
    for b in part.blocks:
        m = mu.mass(b)
        if m == 0:
            for w in b:
                mask[w] = True
            continue
        s = ZERO
        for w in b:
            if is_inf(X[w]):
                raise DomainError("conditional expectation of a non-finite value")
            if mu.weights[w]:
                s += mu.weights[w] * X[w]
        v = s / m
        for w in b:
            out[w] = v
    return tuple(out), tuple(mask)


def E(X: RandVar, part: Partition, mu: Measure) -> RandVar:
    """Conditional expectation without the mask (0 on null blocks)."""
    return cond_expect(X, part, mu)[0]


def cond_esssup(family: Sequence[RandVar], part: Partition, mu: Measure) -> RandVar:
    if not family:
        raise DomainError("esssup of an empty family")
    out = [None] * part.n
    for b in part.blocks:
        live = [w for w in b if mu.weights[w] > 0]
        if not live:
            continue
        v = max(X[w] for X in family for w in live)
        for w in b:
            out[w] = v
    return tuple(out)


def cond_essinf(family: Sequence[RandVar], part: Partition, mu: Measure) -> RandVar:
    if not family:
        raise DomainError("essinf of an empty family")
    neg_sup = cond_esssup([tuple(-x for x in X) for X in family], part, mu)
    return tuple(None if v is None else -v for v in neg_sup)


def vmul(X: RandVar, Y: RandVar) -> RandVar:
    return tuple(x * y for x, y in zip(X, Y))


def vadd(X: RandVar, Y: RandVar) -> RandVar:
    return tuple(x + y for x, y in zip(X, Y))


def vsub(X: RandVar, Y: RandVar) -> RandVar:
    return tuple(x - y for x, y in zip(X, Y))


def select(cond: Sequence[bool], X: RandVar) -> RandVar:
    """X * 1{cond}, with 1{cond}=0 killing infinities too."""
    return tuple(x if c else ZERO for c, x in zip(cond, X))


__all__ = [
    "ZERO", "ONE", "POS_INF", "NEG_INF", "RandVar", "DomainError", "ConsistencyError",
    "Partition", "Measure", "FilteredSpace", "const", "indicator", "measurable",
    "finest_measurable", "cond_expect", "E", "cond_esssup", "cond_essinf",
    "vmul", "vadd", "vsub", "select",
]
