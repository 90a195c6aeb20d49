"""The level M of a dense group (LevelMaxPCS), the full analysis pipeline,
and membership testing modulo the level."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import prod

from sympy import factorint

from .config import DEFAULT, Config
from .density import NOT_FOUND, algebra_basis, check_density_scope, find_transvection
from .errors import InvariantViolation, NotDense, NotInAmbient, NoTransvectionFound
from .gammas import GroupSpec, ambient_contains
from .intmat import IntMatrix
from .modgroup import DeltaCache
from .primeset import PrimeReport, pi_tilde

ARITHMETIC_ASSUMED = "arithmetic-assumed"
MINIMAL_OVERGROUP = "minimal-overgroup"


@dataclass
class LevelReport:
    name: str
    dense: bool
    transvection: object
    prime_report: PrimeReport
    level: int
    exponents: dict
    index: int
    interpretation: str = MINIMAL_OVERGROUP
    timings: dict = field(default_factory=dict)
    deltas: dict = field(default_factory=dict)

    @property
    def trivial_level(self) -> bool:
        return self.level == 1

    def as_dict(self) -> dict:
        t = self.transvection
        return {
            "name": self.name,
            "dense": self.dense,
            "transvection": list(t) if isinstance(t, tuple) else (t.rows() if t is not None else None),
            "primes": self.prime_report.as_dict(),
            "level": self.level,
            "level_factored": factored(self.level),
            "exponents": {str(p): e for p, e in sorted(self.exponents.items())},
            "index": str(self.index),
            "index_factored": factored(self.index),
            "interpretation": self.interpretation,
            "deltas": {str(m): str(v) for m, v in sorted(self.deltas.items())},
        }


def factored(x: int) -> list:
    return [[p, e] for p, e in sorted(factorint(x).items())]


def level_max_pcs(spec: GroupSpec, sigma, cache: DeltaCache | None = None,
                  config: Config = DEFAULT) -> tuple[int, dict]:
    """LevelMaxPCS: raise mu_p while delta grows, rescanning primes in order."""
    cache = cache or DeltaCache(spec, config)
    sigma = sorted(set(sigma))
    if not sigma:
        return 1, {}
    mu = {p: 1 for p in sigma}
    z = {p: prod(q for q in sigma if q != p) for p in sigma}
    grew = True
    while grew:
        grew = False
        for p in sigma:
            lo = p ** mu[p] * z[p]
            if cache(lo * p) > cache(lo):
                mu[p] += 1
                grew = True
                break
    return prod(p ** e for p, e in mu.items()), mu


def check_level(cache: DeltaCache, M: int, sigma) -> None:
    """Loop postcondition and maximality of M; raises InvariantViolation."""
    dM = cache(M)
    for p in sorted(set(sigma)):
        if cache(M * p) != dM:
            raise InvariantViolation(f"delta({M * p}) != delta({M})")
    for p in factorint(M):
        if cache(M // p) >= dM:
            raise InvariantViolation(f"delta({M // p}) is not below delta({M})")


def delta_law_violations(values: dict) -> list[str]:
    """Divisibility and p-power stabilization checks over memoized deltas."""
    out = []
    ms = sorted(values)
    for a in ms:
        for b in ms:
            if b % a == 0 and values[b] % values[a]:
                out.append(f"delta({a}) does not divide delta({b})")
    for m in ms:
        for p in factorint(m):
            if m * p in values and values[m * p] == values[m]:
                x = m * p * p
                while x in values or x <= max(ms):
                    if x in values and values[x] != values[m]:
                        out.append(f"delta stabilized at {m} along {p} but delta({x}) differs")
                    x *= p
    return out


def resolve_transvection(spec: GroupSpec, search_depth: int | None = None):
    if spec.transvection is not None:
        return spec.transvection
    if search_depth:
        w = find_transvection(spec.generators, search_depth)
        if w is not NOT_FOUND:
            return w
    raise NoTransvectionFound("no transvection supplied and none found")


def analyze(spec: GroupSpec, config: Config = DEFAULT, search_depth: int | None = None,
            cache: DeltaCache | None = None) -> LevelReport:
    """Density, exceptional primes, level M and index delta(M) of a group."""
    check_density_scope(spec.ambient)
    timings = {}
    t0 = time.perf_counter()
    t = resolve_transvection(spec, search_depth)
    basis = algebra_basis(spec.generators, t)
    timings["density"] = time.perf_counter() - t0
    if not basis.is_full():
        raise NotDense(f"{spec.name or 'group'}: algebra rank {basis.rank} < {spec.n ** 2}")
    cache = cache or DeltaCache(spec, config)
    t0 = time.perf_counter()
    pr = pi_tilde(spec, t, cache, config)
    timings["primes"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    sigma = list(pr.pi_tilde)
    M, mu = level_max_pcs(spec, sigma, cache, config)
    # an undecided prime outside pi(M) leaves mu_p = 1 with no effect on delta
    for p in list(pr.undecided):
        if mu.get(p) == 1 and cache(M // p) == cache(M):
            M //= p
            del mu[p]
            sigma.remove(p)
    check_level(cache, M, sigma)
    index = cache(M)
    timings["level"] = time.perf_counter() - t0
    viol = delta_law_violations(cache.values)
    if viol:
        raise InvariantViolation("; ".join(viol))
    return LevelReport(spec.name, True, t, pr, M, mu, index, MINIMAL_OVERGROUP, timings,
                       dict(cache.values))


def is_member(spec: GroupSpec, M: int, g: IntMatrix, cache: DeltaCache | None = None,
              config: Config = DEFAULT) -> bool:
    """Whether g lies in H, assuming H is arithmetic of level M."""
    if not ambient_contains(spec.ambient, g):
        raise NotInAmbient("matrix is not in the ambient group")
    if M == 1:
        return True
    cache = cache or DeltaCache(spec, config)
    c = cache.chain(M)
    if c is None:
        return True
    return c.contains(g.mod(c.modulus))
