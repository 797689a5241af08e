"""A market model with random horizon, and the objects derived from it."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .horizon import azema, check_tau, deflator, enlarge, hazard
from .market import build_derived
from .pricing import claim_kit
from .prob import FilteredSpace


@dataclass(frozen=True)
class Claim:
    cls: str
    g: tuple   # g[t][w]
    K: tuple   # K[t][w]


@dataclass(frozen=True)
class Model:
    space: FilteredSpace
    tau: tuple
    S: tuple                      # S[t][w] -> d-tuple
    claim: Optional[Claim] = None
    name: str = ""

    @property
    def T(self) -> int:
        return self.space.horizon

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def d(self) -> int:
        return len(self.S[0][0])

    def analyze(self) -> "Analysis":
        return Analysis(self)


class Analysis:
    """Lazily computed Azema pair, enlarged filtration, deflator, prices, hazard."""

    def __init__(self, model: Model):
        self.model = model
        self.space = model.space
        self.tau = check_tau(model.space, model.tau)

    @cached_property
    def az(self):
        return azema(self.space, self.tau)

    @cached_property
    def Gfilt(self):
        return enlarge(self.space, self.tau)

    @cached_property
    def defl(self):
        return deflator(self.space, self.az)

    @cached_property
    def ps(self):
        return build_derived(self.space, self.az, self.model.S, self.tau)

    @cached_property
    def haz(self):
        return hazard(self.space, self.tau, self.az)

    def kit(self, cls: Optional[str] = None, g=None, K=None):
        c = self.model.claim
        if cls is None:
            if c is None:
                raise ValueError("model has no claim section")
            cls, g, K = c.cls, c.g, c.K
        return claim_kit(cls, g if g is not None else c.g, K if K is not None else c.K, self.az)
