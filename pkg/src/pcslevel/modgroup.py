"""Finite matrix groups over Z/mZ.

The order of <S> mod m is computed one prime-power component p^a of m at a
time. For each component:

* a deterministic Schreier-Sims chain for the image mod p, acting on row
  vectors of (Z/p)^n, with every element kept at the *full* modulus m;
* for each kernel layer i = 1..a-1 (elements = 1 + p^i x mod p^(i+1)) an
  echelon basis over F_p of the relics x that occur, each row backed by an
  actual group element.

Schreier generators that are trivial mod p feed the layers; the layer
structure is closed under p-th powers, commutators and conjugation by the
group generators. Whatever sifts to the identity at the component (but maybe
not mod m) generates, as a normal subgroup, the kernel of the projection onto
that component, and seeds the next component. The group order is the product
of the component orders.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from sympy import factorint

from .config import DEFAULT, Config
from .errors import ModulusMismatch, NonInvertibleGenerator, OrbitBudgetExceeded
from .gammas import GroupSpec, ambient_order
from .intmat import IntMatrix, bareiss_det, identity_flat, mul_mod, power_mod, vec_mul_mod

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidueMatrix:
    modulus: int
    n: int
    entries: tuple

    def __mul__(self, other: "ResidueMatrix") -> "ResidueMatrix":
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")
        return ResidueMatrix(self.modulus, self.n,
                             mul_mod(self.entries, other.entries, self.n, self.modulus))

    def is_identity(self) -> bool:
        return self.entries == reduce_flat(identity_flat(self.n), self.modulus)

    def det(self) -> int:
        n = self.n
        return bareiss_det([self.entries[i * n:(i + 1) * n] for i in range(n)]) % self.modulus

    def rows(self):
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]


def reduce_flat(a: Sequence[int], m: int) -> tuple:
    return tuple(x % m for x in a)


def reduce_mod(g: IntMatrix, m: int) -> ResidueMatrix:
    if m < 2:
        raise ValueError("modulus must be at least 2")
    return ResidueMatrix(m, g.n, g.mod(m))


def inverse_mod(a: Sequence[int], n: int, m: int) -> tuple:
    """Inverse over Z/m via the adjugate; raises if det is not a unit."""
    rows = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    d = bareiss_det(rows) % m
    if gcd(d, m) != 1:
        raise NonInvertibleGenerator(f"determinant {d} is not a unit mod {m}")
    dinv = pow(d, -1, m)
    if n == 1:
        return (dinv % m,)
    adj = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            c = bareiss_det(minor)
            if (i + j) % 2:
                c = -c
            adj[j * n + i] = c * dinv % m
    return tuple(adj)


def _is_identity_mod(g: Sequence[int], n: int, q: int) -> bool:
    step = n + 1
    for k, e in enumerate(g):
        if (e - (1 if k % step == 0 else 0)) % q:
            return False
    return True


class _Level:
    __slots__ = ("base", "gens", "points", "index", "trans", "trans_inv", "done", "edge")

    def __init__(self, base: tuple):
        self.base = base
        self.gens: list[tuple] = []      # (full, full_inv, mod p)
        self.points: list[tuple] = [base]
        self.index: dict[tuple, int] = {base: 0}
        self.trans: list[tuple] = []
        self.trans_inv: list[tuple] = []
        self.done: list[int] = []
        self.edge: list[tuple] = [(-1, -1)]  # (parent point, generator) that reached each point


class _Component:
    """Order/sifting data for the image of a normal subgroup at one p^a."""

    def __init__(self, p: int, a: int, m: int, n: int, config: Config):
        self.p, self.a, self.m, self.n = p, a, m, n
        self.q = p ** a
        self.config = config
        self.identity = reduce_flat(identity_flat(n), m)
        self.levels: list[_Level] = []
        self.strong: list[tuple] = []
        # layer i (1-based) -> list of (relic row, pivot, element, cache of inverse powers)
        self.layers: dict[int, list[list]] = {i: [] for i in range(1, a)}
        self.kernel_out: list[tuple] = []
        self._out_seen: set[tuple] = set()
        self._kernel_queue: list[tuple] = []

    # ---- mod-p chain -------------------------------------------------

    def chain_order(self) -> int:
        o = 1
        for lev in self.levels:
            o *= len(lev.points)
        return o

    def layer_dims(self) -> list[int]:
        return [len(self.layers[i]) for i in range(1, self.a)]

    def order(self) -> int:
        return self.chain_order() * self.p ** sum(self.layer_dims())

    def _act(self, v: tuple, gp: tuple) -> tuple:
        return vec_mul_mod(v, gp, self.n, self.p)

    def sift_chain(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        """Strip g through the mod-p levels from ``start``; return (residue, depth reached)."""
        n, p, m = self.n, self.p, self.m
        for depth in range(start, len(self.levels)):
            lev = self.levels[depth]
            k = lev.base.index(1)
            pt = tuple(x % p for x in g[k * n:(k + 1) * n])
            idx = lev.index.get(pt)
            if idx is None:
                return g, depth
            if idx:
                g = mul_mod(g, lev.trans_inv[idx], n, m)
        return g, len(self.levels)

    def _new_level(self, h: tuple) -> _Level:
        n, p = self.n, self.p
        for k in range(n):
            row = tuple(x % p for x in h[k * n:(k + 1) * n])
            e = tuple(1 if j == k else 0 for j in range(n))
            if row != e:
                lev = _Level(e)
                lev.trans.append(self.identity)
                lev.trans_inv.append(self.identity)
                return lev
        raise AssertionError("element is trivial mod p")

    def _extend(self, h: tuple, lo: int, hi: int) -> None:
        """Add h as strong generator to levels lo..hi (creating level hi if new)."""
        n, m, p = self.n, self.m, self.p
        if hi == len(self.levels):
            self.levels.append(self._new_level(h))
        entry = (h, inverse_mod(h, n, m), reduce_flat(h, p))
        self.strong.append(entry)
        for li in range(lo, hi + 1):
            lev = self.levels[li]
            lev.gens.append(entry)
            lev.done.append(0)
            self._close_orbit(lev, len(lev.gens) - 1)

    def _close_orbit(self, lev: _Level, first_new: int) -> None:
        n, m = self.n, self.m
        budget = self.config.orbit_budget
        pts, index = lev.points, lev.index
        old_len = len(pts)
        ng = len(lev.gens)
        i = 0
        while i < len(pts):
            rng = range(first_new, ng) if i < old_len else range(ng)
            v = pts[i]
            for gi in rng:
                full, inv, gp = lev.gens[gi]
                w = self._act(v, gp)
                if w not in index:
                    index[w] = len(pts)
                    pts.append(w)
                    lev.edge.append((i, gi))
                    lev.trans.append(mul_mod(lev.trans[i], full, n, m))
                    lev.trans_inv.append(mul_mod(inv, lev.trans_inv[i], n, m))
                    if len(pts) > budget:
                        raise OrbitBudgetExceeded(
                            f"orbit mod {self.p} exceeds budget {budget}")
            i += 1

    def add_element(self, g: tuple) -> None:
        """Sift g into the chain; extend if needed, else queue its kernel residue."""
        h, depth = self.sift_chain(g)
        if depth < len(self.levels) or not _is_identity_mod(h, self.n, self.p):
            self._extend(h, 0, depth)
            self._schreier_sims(depth)
        else:
            self._kernel_queue.append(h)

    def _schreier_sims(self, start: int) -> None:
        n, m, p = self.n, self.m, self.p
        i = min(start, len(self.levels) - 1)
        while i >= 0:
            lev = self.levels[i]
            jumped = False
            gi = 0
            while gi < len(lev.gens):
                full, _, gp = lev.gens[gi]
                while lev.done[gi] < len(lev.points):
                    bi = lev.done[gi]
                    lev.done[gi] += 1
                    img = lev.index[self._act(lev.points[bi], gp)]
                    if lev.edge[img] == (bi, gi):
                        continue  # tree edge: the Schreier generator is trivial
                    sg = mul_mod(mul_mod(lev.trans[bi], full, n, m), lev.trans_inv[img], n, m)
                    h, j = self.sift_chain(sg, i + 1)
                    if j < len(self.levels) or not _is_identity_mod(h, n, p):
                        self._extend(h, i + 1, j)
                        i = j
                        jumped = True
                        break
                    if h != self.identity:
                        self._kernel_queue.append(h)
                if jumped:
                    break
                gi += 1
            if not jumped:
                i -= 1

    # ---- kernel layers -------------------------------------------------

    def relic(self, g: tuple, i: int) -> list[int]:
        n, p = self.n, self.p
        pi = p ** i
        step = n + 1
        return [((e - (1 if k % step == 0 else 0)) // pi) % p for k, e in enumerate(g)]

    def _inv_power(self, row: list, c: int) -> tuple:
        cache = row[3]
        got = cache.get(c)
        if got is None:
            got = power_mod(cache[-1], c, self.n, self.m)
            cache[c] = got
        return got

    def sift_layers(self, g: tuple, start: int = 1):
        """Strip g (trivial mod p) through the layers.

        Returns (residue, layer, remaining relic); layer == a means the residue
        is trivial at this component.
        """
        n, m, p = self.n, self.m, self.p
        for i in range(start, self.a):
            x = self.relic(g, i)
            if not any(x):
                continue
            for row in self.layers[i]:
                vec, piv = row[0], row[1]
                c = x[piv]
                if c:
                    x = [(u - c * w) % p for u, w in zip(x, vec)]
                    g = mul_mod(g, self._inv_power(row, c), n, m)
            if any(x):
                return g, i, x
        return g, self.a, None

    def _insert_layer(self, g: tuple, i: int, x: list[int]) -> tuple:
        n, m, p = self.n, self.m, self.p
        piv = next(k for k, v in enumerate(x) if v)
        scale = pow(x[piv], -1, p)
        if scale != 1:
            g = power_mod(g, scale, n, m)
            x = [(v * scale) % p for v in x]
        ginv = inverse_mod(g, n, m)
        rows = self.layers[i]
        pos = 0
        while pos < len(rows) and rows[pos][1] < piv:
            pos += 1
        row = [x, piv, g, {-1: ginv}]
        rows.insert(pos, row)
        return row

    def close_layers(self, normalizers: Sequence[tuple[tuple, tuple]]) -> None:
        """Process queued kernel elements until the layer structure is closed."""
        n, m, p = self.n, self.m, self.p
        queue = self._kernel_queue
        while queue:
            g = queue.pop()
            h, i, x = self.sift_layers(g)
            if i == self.a:
                if h != self.identity and h not in self._out_seen:
                    self._out_seen.add(h)
                    self.kernel_out.append(h)
                continue
            new = self._insert_layer(h, i, x)
            e, einv = new[2], new[3][-1]
            queue.append(power_mod(e, p, n, m))
            for j in range(1, self.a):
                for row in self.layers[j]:
                    if row is new:
                        continue
                    f = row[2]
                    finv = row[3][-1]
                    comm = mul_mod(mul_mod(einv, finv, n, m), mul_mod(e, f, n, m), n, m)
                    queue.append(comm)
            for x_full, x_inv in normalizers:
                queue.append(mul_mod(mul_mod(x_inv, e, n, m), x_full, n, m))

    def sift(self, g: tuple) -> tuple[tuple, bool]:
        """Full sift; returns (residue, ok) where ok means trivial at this component."""
        h, depth = self.sift_chain(g)
        if depth < len(self.levels) or not _is_identity_mod(h, self.n, self.p):
            return h, False
        h, i, _ = self.sift_layers(h)
        return h, i == self.a


class LayeredChain:
    """Order and membership structure for a subgroup of SL/Sp(n, Z/m)."""

    def __init__(self, n: int, modulus: int, generators: Sequence[tuple], config: Config = DEFAULT):
        self.n = n
        self.modulus = modulus
        self.generators = [reduce_flat(g, modulus) for g in generators]
        self.config = config
        self.components: list[_Component] = []
        self._build()

    def _build(self) -> None:
        n, m = self.n, self.modulus
        if m == 1:
            return
        gens = [g for g in self.generators if not _is_identity_mod(g, n, m)]
        normalizers = [(g, inverse_mod(g, n, m)) for g in gens]
        rng = random.Random(self.config.seed)
        seeds = list(gens)
        top = True
        # largest prime first: its big orbits then carry only the few top-level generators
        for p, a in sorted(factorint(m).items(), reverse=True):
            comp = _Component(p, a, m, n, self.config)
            if top and gens:
                for _ in range(self.config.random_warmup):
                    r = comp.identity
                    for g in gens:
                        if rng.random() < 0.5:
                            r = mul_mod(r, g, n, m)
                    if r != comp.identity:
                        comp.add_element(r)
            for g in seeds:
                comp.add_element(g)
            if not top:
                self._close_normal(comp, normalizers)
            comp.close_layers(normalizers)
            log.debug("component %d^%d: chain %d, layers %s", p, a,
                      comp.chain_order(), comp.layer_dims())
            self.components.append(comp)
            seeds = comp.kernel_out
            top = False
        if any(s != reduce_flat(identity_flat(n), m) for s in seeds):
            raise AssertionError("kernel residues survived every component")

    @staticmethod
    def _close_normal(comp: _Component, normalizers) -> None:
        n, m = comp.n, comp.m
        checked = 0
        while checked < len(comp.strong):
            s = comp.strong[checked][0]
            checked += 1
            for x_full, x_inv in normalizers:
                comp.add_element(mul_mod(mul_mod(x_inv, s, n, m), x_full, n, m))

    def order(self) -> int:
        o = 1
        for c in self.components:
            o *= c.order()
        return o

    def sift(self, g) -> tuple:
        """Residue of g after stripping through every component (identity iff member)."""
        g = _as_flat(g, self.modulus, self.n)
        for c in self.components:
            g, ok = c.sift(g)
            if not ok:
                return g
        return g

    def contains(self, g) -> bool:
        g = _as_flat(g, self.modulus, self.n)
        if self.modulus == 1:
            return True
        return self.sift(g) == reduce_flat(identity_flat(self.n), self.modulus)

    def summary(self) -> list[dict]:
        return [{"p": c.p, "a": c.a, "chain_order": c.chain_order(),
                 "orbits": [len(l.points) for l in c.levels], "layer_dims": c.layer_dims()}
                for c in self.components]


def _as_flat(g, m: int, n: int) -> tuple:
    if isinstance(g, ResidueMatrix):
        if g.modulus != m:
            raise ModulusMismatch(f"element mod {g.modulus}, chain mod {m}")
        return g.entries
    if isinstance(g, IntMatrix):
        return g.mod(m)
    g = tuple(g)
    if len(g) != n * n:
        raise ModulusMismatch("wrong number of entries")
    return reduce_flat(g, m)


def build_chain(S: Iterable, modulus: int | None = None, extra_normal: Iterable = (),
                config: Config = DEFAULT) -> LayeredChain:
    """Chain for <S u extra_normal> mod m.

    ``S`` may hold ResidueMatrix values (modulus taken from them) or IntMatrix
    values together with an explicit ``modulus``.
    """
    items = list(S) + list(extra_normal)
    if not items:
        raise ValueError("need at least one generator to fix the degree")
    mods = {x.modulus for x in items if isinstance(x, ResidueMatrix)}
    if modulus is None:
        if len(mods) != 1:
            raise ModulusMismatch("generators disagree on the modulus")
        modulus = mods.pop()
    elif mods and mods != {modulus}:
        raise ModulusMismatch("generator modulus differs from requested modulus")
    n = items[0].n
    flats = [_as_flat(x, modulus, n) for x in items]
    for f in flats:
        rows = [list(f[i * n:(i + 1) * n]) for i in range(n)]
        if gcd(bareiss_det(rows) % modulus, modulus) != 1:
            raise NonInvertibleGenerator(f"generator not invertible mod {modulus}")
    return LayeredChain(n, modulus, flats, config)


def order(c: LayeredChain) -> int:
    return c.order()


def sift(c: LayeredChain, g) -> tuple:
    return c.sift(g)


# --------------------------------------------------------------------------
# delta

class DeltaCache:
    """Memoized delta values for one group spec."""

    def __init__(self, spec: GroupSpec, config: Config = DEFAULT):
        self.spec = spec
        self.config = config
        self.values: dict[int, int] = {}
        self.chains: dict[int, LayeredChain] = {}

    def effective_modulus(self, m: int) -> int:
        r = self.spec.pcs_level
        return gcd(m, r) if r else m

    def chain(self, m: int) -> LayeredChain | None:
        """Chain mod gcd(m, pcs_level), kept for later sifting (None if trivial)."""
        g = self.effective_modulus(m)
        if g not in self.chains:
            self.chains[g] = self._build(g) if g > 1 else None
        return self.chains[g]

    def _build(self, g: int) -> LayeredChain:
        return build_chain(self.spec.generators, g, config=self.config)

    def __call__(self, m: int) -> int:
        if m < 1:
            raise ValueError("modulus must be positive")
        if m in self.values:
            return self.values[m]
        g = self.effective_modulus(m)
        if g == 1:
            val = 1
        elif g in self.values:
            val = self.values[g]
        else:
            # chains are large; only those requested through chain() are kept
            c = self.chains.get(g) or self._build(g)
            amb = ambient_order(self.spec.ambient, g)
            o = c.order()
            if amb % o:
                raise AssertionError(f"chain order {o} does not divide |Sigma(Z/{g})| = {amb}")
            val = amb // o
            self.values[g] = val
        self.values[m] = val
        return val


def delta(spec: GroupSpec, m: int, config: Config = DEFAULT,
          cache: DeltaCache | None = None) -> int:
    """|phi_m(Gamma_n) : phi_m(H)|, with delta(H, 1) = 1."""
    if cache is None:
        cache = DeltaCache(spec, config)
    return cache(m)
