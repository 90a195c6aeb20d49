"""Exceptional primes: the candidate set Pi_1, the set Pi(H) of primes where
H does not surject, and Pi~(H) = pi(M) after the even-level test."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

from sympy import factorint, isprime
from sympy.ntheory import ecm

from .config import DEFAULT, Config
from .density import _letters, algebra_basis, algebra_rank_mod_p
from .errors import FactorizationTooHard, InvariantViolation, SingularGram, Undecided
from .gammas import GroupSpec
from .intmat import (IntLattice, IntMatrix, eval_word, gram_trace_det, identity_flat, invert_unimodular,
                     is_transvection_mod, mul)
from .modgroup import DeltaCache

AUTO, CHAIN, ALGEBRA = "auto", "chain", "algebra"


@dataclass
class PrimeReport:
    gram_det: int
    lattice_disc: int
    candidates: list
    exceptional: list
    pi_tilde: list
    even_test_used: bool
    q: int
    undecided: list = field(default_factory=list)
    strategies: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "gram_det": str(self.gram_det),
            "lattice_disc": str(self.lattice_disc),
            "candidates": self.candidates,
            "exceptional": self.exceptional,
            "pi_tilde": self.pi_tilde,
            "even_test_used": self.even_test_used,
            "q": str(self.q),
            "undecided": self.undecided,
            "strategies": {str(p): s for p, s in sorted(self.strategies.items())},
        }


def factor_exact(d: int, config: Config = DEFAULT) -> dict[int, int]:
    """Complete factorization of |d|; FactorizationTooHard if effort runs out."""
    d = abs(d)
    if d == 0:
        raise ValueError("cannot factor 0")
    partial = factorint(d, limit=config.factor_effort, use_ecm=False, use_rho=True)
    out: dict[int, int] = {}
    stack = list(partial.items())
    while stack:
        f, e = stack.pop()
        if f == 1:
            continue
        if isprime(f):
            out[f] = out.get(f, 0) + e
            continue
        try:
            parts = ecm(f, max_curve=config.ecm_curves, seed=config.seed)
        except ValueError as exc:
            raise FactorizationTooHard(f"could not split a {f.bit_length()}-bit cofactor") from exc
        for q in parts:
            k = 0
            while f % q == 0:
                f //= q
                k += 1
            stack.append((q, k * e))
        if f > 1:
            stack.append((f, e))
    return out


def enveloping_lattice(gens, t: IntMatrix) -> IntLattice:
    """The ring Z[N] for N the normal closure of t in <gens>, as an HNF lattice."""
    n = t.n
    mats = {}
    for i, g in enumerate(gens, 1):
        mats[i] = g.entries
        mats[-i] = invert_unimodular(g).entries
    letters = _letters(len(gens))
    L = IntLattice(n * n)
    L.insert(identity_flat(n))
    L.insert(t.entries)
    changed = True
    while changed:
        changed = False
        for b in L.basis():
            for s in letters:
                if L.insert(mul(mul(mats[-s], b, n), mats[s], n)):
                    changed = True
    W = L.basis()
    changed = True
    while changed:
        changed = False
        for b in L.basis():
            for w in W:
                if L.insert(mul(b, w, n)):
                    changed = True
    return L


def _offdiag_primes(t: IntMatrix) -> set[int]:
    n = t.n
    out = set()
    for i in range(n):
        for j in range(n):
            x = t.entries[i * n + j]
            if i != j and x:
                out |= set(factorint(abs(x)))
    return out


def candidate_primes(spec: GroupSpec, t=None, config: Config = DEFAULT):
    """(d, d_L, Pi_1).

    d is the trace-Gram determinant of the algebra basis. Candidates come from
    d_L, the discriminant of Z[N], which divides d and is usually far smaller;
    p not dividing d_L means N mod p spans Mat(n, F_p). The prime 2 is always a
    candidate, since absolute irreducibility mod 2 does not force surjectivity.
    """
    t = spec.transvection if t is None else t
    basis = algebra_basis(spec.generators, t)
    n = spec.n
    if not basis.is_full():
        raise SingularGram(f"algebra rank {basis.rank} < {n * n}")
    d = gram_trace_det([e.entries for e in basis.elements], n)
    if d == 0:
        raise SingularGram("trace form degenerate")
    tm = basis.elements[1]
    L = enveloping_lattice(spec.generators, tm)
    dL = gram_trace_det(L.basis(), n)
    if dL == 0 or d % dL:
        raise InvariantViolation(f"lattice discriminant {dL} does not divide {d}")
    primes = set(factor_exact(dL, config)) | _offdiag_primes(tm) | {2}
    return d, dL, sorted(primes)


def surjective_mod_p(spec: GroupSpec, p: int, t=None, cache: DeltaCache | None = None,
                     config: Config = DEFAULT, strategy: str = AUTO) -> tuple[bool, str]:
    """Whether phi_p(H) is all of phi_p(Gamma_n); returns (answer, strategy used).

    ``algebra``: p odd and t still a transvection mod p; the F_p-algebra of the
    conjugates of t has dimension n^2 iff H surjects. ``chain``: compare the
    mod-p chain order with the ambient order. ``auto`` tries algebra first.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    r = spec.pcs_level
    if r and r % p:
        return True, "pcs"
    n = spec.n
    t = spec.transvection if t is None else t
    tm = _resolve(spec, t)
    algebra_ok = p > 2 and tm is not None and is_transvection_mod(tm.mod(p), n, p)
    chain_ok = p ** n <= config.orbit_budget
    if strategy == ALGEBRA or (strategy == AUTO and algebra_ok):
        if not algebra_ok:
            raise Undecided(p, "transvection degenerates mod p or p = 2")
        return algebra_rank_mod_p(spec.generators, tm, p) == n * n, ALGEBRA
    if strategy in (CHAIN, AUTO):
        if not chain_ok and strategy == AUTO:
            raise Undecided(p, "orbit budget too small and transvection degenerates mod p")
        cache = cache or DeltaCache(spec, config)
        return cache(p) == 1, CHAIN
    raise ValueError(f"unknown strategy {strategy!r}")


def _resolve(spec, t) -> IntMatrix | None:
    if t is None or isinstance(t, IntMatrix):
        return t
    return eval_word(t, spec.generators)


def pi_tilde(spec: GroupSpec, t=None, cache: DeltaCache | None = None,
             config: Config = DEFAULT) -> PrimeReport:
    cache = cache or DeltaCache(spec, config)
    d, dL, cands = candidate_primes(spec, t, config)
    exceptional, undecided, used = [], [], {}
    for p in cands:
        try:
            ok, how = surjective_mod_p(spec, p, t, cache, config)
        except Undecided:
            undecided.append(p)
            continue
        used[p] = how
        if not ok:
            exceptional.append(p)
    odd = [p for p in exceptional + undecided if p != 2]
    q = prod(odd)
    pt = sorted(set(exceptional) | set(undecided))
    even_test = False
    if spec.n <= 4 and 2 not in pt:
        even_test = True
        if cache(4 * q) > cache(q):
            pt = sorted(set(pt) | {2})
    return PrimeReport(d, dL, cands, exceptional, pt, even_test, q, undecided, used)
