"""Brute-force oracles, independent of the layered chain."""
from itertools import product

from pcslevel.intmat import bareiss_det, mul_mod


def bfs_closure(gens, n, m, limit=10**7):
    """Enumerate <gens> mod m by breadth-first closure under right multiplication."""
    ident = tuple((1 if i == j else 0) % m for i in range(n) for j in range(n))
    gens = [tuple(x % m for x in g) for g in gens]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = mul_mod(h, g, n, m)
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
                    if len(seen) > limit:
                        raise RuntimeError("BFS limit exceeded")
        frontier = nxt
    return seen


def brute_force_group(n, m, symplectic=False):
    """All n x n matrices over Z/m with det 1 (and preserving J if symplectic)."""
    s = n // 2
    J = [0] * (n * n)
    for i in range(s):
        J[i * n + s + i] = 1
        J[(s + i) * n + i] = -1
    J = tuple(x % m for x in J)
    out = []
    for e in product(range(m), repeat=n * n):
        if symplectic:
            t = tuple(e[j * n + i] for i in range(n) for j in range(n))
            if mul_mod(mul_mod(e, J, n, m), t, n, m) != J:
                continue
        elif bareiss_det([e[i * n:(i + 1) * n] for i in range(n)]) % m != 1:
            continue
        out.append(e)
    return out


MODULI = (4, 8, 9, 12, 15, 25, 27, 45)


def _random_word(rng, gens, length):
    from pcslevel.intmat import IntMatrix
    g = IntMatrix.identity(gens[0].n)
    for _ in range(length):
        g = g @ (rng.choice(gens) ** rng.choice((1, -1)))
    return g


def random_subgroups(rng, count, limit=2 * 10**5):
    """Yield (kind, n, m, generators, bfs_order) for random subgroups whose
    closure mod m stays within ``limit`` elements. Mixes SL(2), SL(3), Sp(4)
    and thins the generators with powers so that proper subgroups occur."""
    from pcslevel.gammas import SL, Sp, AmbientKind, elementary_generators
    from pcslevel.intmat import IntMatrix
    sl2 = [IntMatrix.from_rows([[1, 1], [0, 1]]), IntMatrix.from_rows([[1, 0], [1, 1]])]
    pools = {("SL", 2): sl2,
             ("SL", 3): elementary_generators(AmbientKind(SL, 3)),
             ("Sp", 4): elementary_generators(AmbientKind(Sp, 4))}
    made = 0
    while made < count:
        kind, n = rng.choice(sorted(pools))
        m = rng.choice(MODULI)
        gens = [_random_word(rng, pools[kind, n], rng.randint(1, 6))
                for _ in range(rng.choice((1, 2, 2, 3)))]
        if rng.random() < 0.5:
            gens = [g ** rng.choice((2, 3, 4, 5, 6)) for g in gens]
        try:
            size = len(bfs_closure([g.entries for g in gens], n, m, limit))
        except RuntimeError:
            continue
        made += 1
        yield kind, n, m, gens, size


def kernel_elements(n, r, m):
    """All I + rA mod m of determinant 1 (the kernel of SL(n, Z/m) -> SL(n, Z/r), r | m)."""
    steps = range(0, m, r)
    out = []
    for e in product(steps, repeat=n * n):
        g = tuple((x + (1 if i % (n + 1) == 0 else 0)) % m for i, x in enumerate(e))
        if bareiss_det([g[i * n:(i + 1) * n] for i in range(n)]) % m == 1:
            out.append(g)
    return out
