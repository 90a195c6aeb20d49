"""Explicit groups: the beta_T and rho_k images of the Long-Reid group, the
hypergeometric groups G(d, k) in Sp(4, Z), Humphries' free groups, the
assembled test groups, and published reference values."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import primefactors

from .errors import InvariantViolation, NonDivisor
from .gammas import SL, Sp, AmbientKind, GroupSpec, elementary_generators
from .intmat import IntMatrix

R = IntMatrix.from_rows

# b_1 = X^-1 Y^3 X Y^2 X Y^-1 X, generators numbered X = 1, Y = 2
B1_WORD = (-1, 2, 2, 2, 1, 2, 2, 1, -2, 1)

DEFAULT_ASSEMBLY_SEED = 20180101


@dataclass(frozen=True)
class FamilyParams:
    tag: str
    params: tuple = ()
    options: dict = field(default_factory=dict, compare=False, hash=False)


def beta_matrices(T: int) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    X = R([[-1 + T ** 3, -T, T * T], [0, -1, 2 * T], [-T, 0, 1]])
    Y = R([[-1, 0, 0], [-T * T, 1, -T], [T, 0, -1]])
    Z = R([[0, 0, 1], [1, 0, T * T], [0, 1, 0]])
    return X, Y, Z


def beta_family(T: int, with_z: bool = False) -> GroupSpec:
    """beta_T(F) = <X_T, Y_T>, or beta_T(G) = <X_T, Y_T, Z_T> with ``with_z``."""
    X, Y, Z = beta_matrices(T)
    gens = (X, Y, Z) if with_z else (X, Y)
    name = f"beta_{T}({'G' if with_z else 'F'})"
    return GroupSpec(AmbientKind(SL, 3), gens, transvection=B1_WORD, name=name,
                     meta={"family": FamilyParams("beta", (T,), {"with_z": with_z})})


def rho_matrices(k: int) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    x = R([[1, -2, 3], [0, k, -1 - 2 * k], [0, 1, -2]])
    y = R([[-2 - k, -1, 1], [-2 - k, -2, 3], [-1, -1, 2]])
    z = R([[0, 0, 1], [1, 0, -k], [0, 1, -1 - k]])
    return x, y, z


# Transvection words in rho_k(x) = 1, rho_k(y) = 2, found by find_transvection
# and frozen here. They lie in rho_k(F), so they serve F and G alike.
RHO_TRANSVECTION_WORDS: dict[int, tuple] = {
    0: (1, 1),
    3: (1, 1, -2, -2, 1, 1, -2, -2),
    5: (1, 1, 1, -2, -2, 1, 1, 1, -2, -2),
}


def rho_family(k: int, with_z: bool = False, transvection=None) -> GroupSpec:
    """rho_k(F) = <x, y>, or rho_k(G) = <x, y, z> with ``with_z``.

    The designated transvection is the b_1-shaped word in rho_k(x), rho_k(y)
    when that is a transvection, else a frozen word from RHO_TRANSVECTION_WORDS,
    else None (search with density.find_transvection).
    """
    x, y, z = rho_matrices(k)
    gens = (x, y, z) if with_z else (x, y)
    if transvection is None:
        transvection = _rho_transvection(k, gens)
    name = f"rho_{k}({'G' if with_z else 'F'})"
    return GroupSpec(AmbientKind(SL, 3), gens, transvection=transvection, name=name,
                     meta={"family": FamilyParams("rho", (k,), {"with_z": with_z})})


def _rho_transvection(k, gens):
    from .intmat import eval_word, is_transvection
    if is_transvection(eval_word(B1_WORD, gens[:2])):
        return B1_WORD
    return RHO_TRANSVECTION_WORDS.get(k)


def hypergeometric_matrices(d: int, k: int) -> tuple[IntMatrix, IntMatrix]:
    U = R([[1, 1, 0, 0], [0, 1, 0, 0], [d, d, 1, 0], [0, -k, -1, 1]])
    T = R([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]])
    return U, T


def hypergeometric_family(d: int, k: int) -> GroupSpec:
    """G(d, k) = <U, T> in Sp(4, Z); T is the designated transvection."""
    U, T = hypergeometric_matrices(d, k)
    return GroupSpec(AmbientKind(Sp, 4), (U, T), transvection=(2,), name=f"G({d},{k})",
                     meta={"family": FamilyParams("hypergeometric", (d, k))})


def hatG_index(d1: int, d2: int) -> int:
    """|Sp(4, Z) : hatG(d1, d2)|, exactly."""
    if d1 < 1 or d2 < 1:
        raise ValueError("d1 and d2 must be positive")
    if d1 % d2:
        raise NonDivisor(f"{d2} does not divide {d1}")
    v = Fraction(d1 ** 4 * d2 ** 2)
    for p in primefactors(d1):
        v *= 1 - Fraction(1, p ** 4)
    for p in primefactors(d2):
        v *= 1 - Fraction(1, p ** 2)
    if v.denominator != 1:
        raise InvariantViolation(f"non-integral index {v}")
    return v.numerator


def humphries_matrices(x: int) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    T1 = R([[1, x * x + 1, x], [0, 1, 0], [0, 0, 1]])
    T2 = R([[1, 0, 0], [x, 1, x + 1], [0, 0, 1]])
    T3 = R([[1, 0, 0], [0, 1, 0], [-x + 1, x * x, 1]])
    return T1, T2, T3


def humphries_family(x: int) -> GroupSpec:
    return GroupSpec(AmbientKind(SL, 3), humphries_matrices(x), transvection=(1,),
                     name=f"humphries_{x}", meta={"family": FamilyParams("humphries", (x,))})


def unitriangular_generators(n: int) -> list[IntMatrix]:
    return [IntMatrix.elementary(n, i, j, 1)
            for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def block_diag(*blocks: IntMatrix) -> IntMatrix:
    return IntMatrix.block_diag(*blocks)


def _eye(n):
    return IntMatrix.identity(n)


def _sl_generators(n: int) -> list[IntMatrix]:
    """A four-element generating set of SL(n, Z): t_12, t_21, a signed n-cycle
    and diag(-1, -1, 1, ...)."""
    c = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        c[i][i + 1] = 1
    c[n - 1][0] = (-1) ** (n - 1)
    d = [[int(i == j) * (-1 if i < 2 else 1) for j in range(n)] for i in range(n)]
    return [IntMatrix.elementary(n, 1, 2, 1), IntMatrix.elementary(n, 2, 1, 1), R(c), R(d)]


def random_unitriangular(n: int, rng: random.Random, bound: int = 5) -> IntMatrix:
    rows = [[int(i == j) if j <= i else rng.randint(-bound, bound) for j in range(n)]
            for i in range(n)]
    return R(rows)


def assembled_groups(tag: str, seed: int = DEFAULT_ASSEMBLY_SEED) -> GroupSpec:
    """The test groups G3, G7, G8, G9 assembled from their recipes."""
    tag = tag.upper()
    if tag == "G3":
        m = 3 ** 4 * 5 * 7 ** 2
        k = AmbientKind(SL, 7)
        gens = list(elementary_generators(k, m))
        gens += [block_diag(h, _eye(4)) for h in beta_matrices(2)]
        gens += [block_diag(_eye(3), h, _eye(1)) for h in rho_matrices(4)]
        return GroupSpec(k, gens, transvection=(1,), name="G3",
                         meta={"family": FamilyParams("blockdiag", ("G3",))})
    if tag == "G7":
        gens = [block_diag(h, _eye(2)) for h in beta_matrices(5)]
        gens += [block_diag(_eye(3), h) for h in (R([[1, 1], [0, 1]]), R([[0, -1], [1, 0]]))]
        gens += unitriangular_generators(5)
        t = len(gens) - 9  # t_12
        return GroupSpec(AmbientKind(SL, 5), gens, transvection=(t,), name="G7",
                         meta={"family": FamilyParams("blockdiag", ("G7",))})
    if tag == "G8":
        return GroupSpec(AmbientKind(SL, 5), unitriangular_generators(5), transvection=(1,),
                         name="G8", meta={"family": FamilyParams("unitriangular", (5,))})
    if tag == "G9":
        rng = random.Random(seed)
        gens = [block_diag(h, _eye(5)) for h in _sl_generators(6)]
        gens += [block_diag(_eye(6), h) for h in _sl_generators(5)]
        gens += [random_unitriangular(11, rng) for _ in range(5)]
        return GroupSpec(AmbientKind(SL, 11), gens, transvection=(1,), name="G9",
                         meta={"family": FamilyParams("blockdiag", ("G9",), {"seed": seed})})
    raise ValueError(f"unknown assembled group {tag!r}")


def level45_group() -> GroupSpec:
    """Eight explicit generators plus the principal congruence subgroup of level 45."""
    gens = [
        R([[1, 30, 0], [0, 1, 0], [0, 0, 1]]),
        R([[-29, 0, -30], [0, 1, 0], [30, 0, 31]]),
        R([[-29, -45, 15], [30, 1, 30], [30, 0, 31]]),
        R([[1, 0, 0], [15, -29, -30], [30, 30, 31]]),
        R([[16, 15, 0], [-255, -239, 0], [0, 0, 1]]),
        R([[16, 15, 30], [-255, -239, 15], [0, 0, 1]]),
        R([[1, 0, 30], [0, 1, 30], [0, 0, 1]]),
        R([[10, 0, 9], [36, -137, 66], [-99, -453, 22]]),
    ]
    return GroupSpec(AmbientKind(SL, 3), gens, transvection=(1,), pcs_level=45, name="level45")


# ---------------------------------------------------------------------------
# Published values. Factored integers are {prime: exponent}.

def fz(f: dict) -> int:
    v = 1
    for p, e in f.items():
        v *= p ** e
    return v


TABLE1 = {  # T: (level, index of beta_T)
    -1: ({11: 1}, {7: 1, 19: 1}),
    -2: ({2: 6}, {2: 19, 7: 1}),
    1: ({5: 1}, {31: 1}),
    2: ({2: 5}, {2: 17, 7: 1}),
    3: ({3: 3, 73: 1}, {2: 3, 3: 11, 13: 1, 1801: 1}),
    4: ({2: 7, 23: 1}, {2: 31, 7: 2, 79: 1}),
    5: ({5: 3, 367: 1}, {2: 4, 3: 2, 5: 10, 13: 1, 31: 1, 3463: 1}),
    6: ({2: 8, 3: 3, 5: 1}, {2: 29, 3: 10, 7: 1, 13: 1, 31: 1}),
    7: ({7: 3, 1021: 1}, {2: 5, 3: 4, 5: 1, 7: 10, 19: 1, 347821: 1}),
    8: ({2: 10, 191: 1}, {2: 46, 7: 2, 13: 2, 31: 1}),
    9: ({3: 6, 2179: 1}, {2: 3, 3: 27, 7: 1, 13: 1, 226201: 1}),
    10: ({2: 5, 5: 3, 11: 1, 17: 1}, {2: 26, 3: 1, 5: 10, 7: 2, 19: 1, 31: 1, 307: 1}),
    11: ({5: 1, 11: 3, 797: 1}, {2: 4, 5: 2, 7: 1, 11: 10, 19: 1, 31: 1, 157: 1, 4051: 1}),
    12: ({2: 7, 3: 3, 647: 1}, {2: 35, 3: 10, 7: 1, 13: 1, 211: 1, 1987: 1}),
    13: ({13: 3, 29: 1, 227: 1}, {2: 4, 3: 2, 7: 1, 13: 11, 61: 1, 67: 1, 73: 1, 709: 1}),
    14: ({2: 6, 7: 3, 257: 1}, {2: 28, 3: 3, 7: 11, 19: 1, 61: 1, 1087: 1}),
    15: ({3: 3, 5: 3, 67: 1, 151: 1}, {2: 9, 3: 14, 5: 10, 7: 3, 13: 1, 31: 2, 1093: 1}),
    16: ({2: 13, 5: 1, 307: 1}, {2: 63, 3: 3, 7: 1, 31: 1, 43: 1, 733: 1}),
    18: ({2: 5, 3: 6, 1093: 1}, {2: 23, 3: 27, 7: 1, 13: 2, 398581: 1}),
    19: ({19: 3, 67: 1, 307: 1},
         {2: 4, 3: 9, 5: 1, 7: 2, 19: 10, 31: 1, 43: 1, 127: 1, 733: 1}),
    20: ({2: 7, 5: 3, 2999: 1}, {2: 36, 3: 1, 5: 10, 7: 1, 13: 1, 31: 1, 613: 1, 1129: 1}),
    50: ({2: 5, 5: 6, 23: 1, 1019: 1}, {2: 24, 3: 1, 5: 25, 7: 3, 31: 1, 79: 1, 148483: 1}),
    100: ({2: 7, 5: 6, 29: 1, 67: 1, 193: 1},
          {2: 42, 3: 5, 5: 25, 7: 4, 13: 1, 31: 2, 67: 1, 1783: 1}),
}

TABLE2 = {  # k: (level, index of rho_k(G), index of rho_k(F))
    0: ({11: 1}, {7: 1, 19: 1}, {2: 1, 5: 1, 7: 1, 19: 1}),
    2: ({2: 2, 5: 1, 7: 1}, {2: 12, 3: 2, 5: 1, 7: 2, 19: 1, 31: 1},
        {2: 12, 3: 3, 5: 1, 7: 2, 19: 1, 31: 1}),
    3: ({13: 1}, {2: 2, 3: 1, 13: 2, 61: 1}, {2: 3, 3: 2, 13: 2, 61: 1}),
    4: ({3: 3, 7: 1}, {2: 4, 3: 11, 7: 2, 13: 1, 19: 1}, {2: 6, 3: 13, 7: 2, 13: 1, 19: 1}),
    5: ({2: 2, 19: 1, 31: 1}, {2: 10, 3: 3, 5: 1, 31: 2, 127: 1, 331: 1},
        {2: 11, 3: 5, 5: 1, 31: 2, 127: 1, 331: 1}),
}

TABLE3 = {  # (d, k): (level, index of G(d,k), index of hatG(d, gcd(d,k)))
    (1, 3): ({2: 1}, {2: 1, 3: 1}, {}),
    (1, 2): ({2: 1}, {2: 1, 5: 1}, {}),
    (2, 3): ({2: 3}, {2: 6, 3: 1, 5: 1}, {3: 1, 5: 1}),
    (3, 4): ({2: 2, 3: 2}, {2: 9, 3: 5, 5: 2}, {2: 4, 5: 1}),
    (4, 4): ({2: 6}, {2: 20, 3: 2, 5: 1}, {2: 6, 3: 2, 5: 1}),
    (6, 5): ({2: 3, 3: 2}, {2: 10, 3: 6, 5: 2}, {2: 4, 3: 1, 5: 2}),
    (9, 6): ({2: 1, 3: 5}, {2: 8, 3: 14, 5: 2}, {2: 7, 3: 4, 5: 1}),
    (5, 5): ({2: 1, 5: 3}, {2: 8, 3: 3, 5: 8, 13: 1}, {2: 7, 3: 2, 13: 1}),
    (2, 4): ({2: 4}, {2: 11, 3: 2, 5: 1}, {3: 2, 5: 1}),
    (1, 4): ({2: 2}, {2: 5, 5: 1}, {}),
    (16, 8): ({2: 10}, {2: 40, 3: 2, 5: 1}, {2: 16, 3: 2, 5: 1}),
    (12, 7): ({2: 5, 3: 2}, {2: 17, 3: 6, 5: 2}, {2: 8, 3: 1, 5: 2}),
    (8, 6): ({2: 7}, {2: 24, 3: 2, 5: 1}, {2: 8, 3: 2, 5: 1}),
    (4, 5): ({2: 5}, {2: 13, 3: 1, 5: 1}, {2: 4, 3: 1, 5: 1}),
}
