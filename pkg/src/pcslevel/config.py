from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Config:
    """Knobs shared by the order, prime and level computations.

    ``orbit_budget`` bounds every orbit of a mod-p stabilizer chain (points of
    (Z/p)^n); ``factor_effort`` is the trial-division bound used before the
    general-purpose factoring step. The seed only affects the order in which
    random elements warm up a chain, never a result.
    """

    orbit_budget: int = 10**7
    seed: int = 0
    verbosity: int = 0
    factor_effort: int = 10**6
    ecm_curves: int = 200
    random_warmup: int = 10

    def with_(self, **kw) -> "Config":
        return replace(self, **kw)


DEFAULT = Config()
