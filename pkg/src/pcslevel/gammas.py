"""Ambient groups SL(n, Z) and Sp(n, Z): membership, elementary generators,
and the orders of their congruence images SL(n, Z/m) and Sp(n, Z/m)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from sympy import factorint

from .errors import UnsupportedDegree
from .intmat import GroupWord, IntMatrix, identity_flat, mul, transpose

SL = "SL"
Sp = "Sp"


@dataclass(frozen=True)
class AmbientKind:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (SL, Sp):
            raise ValueError(f"unknown ambient kind {self.kind!r}")
        if self.n <= 2:
            raise UnsupportedDegree(f"degree must exceed 2, got {self.n}")
        if self.kind == Sp and self.n % 2:
            raise UnsupportedDegree(f"symplectic degree must be even, got {self.n}")

    @property
    def s(self) -> int:
        return self.n // 2

    @property
    def J(self) -> IntMatrix:
        """The form [[0, 1_s], [-1_s, 0]]."""
        n, s = self.n, self.n // 2
        e = [0] * (n * n)
        for i in range(s):
            e[i * n + s + i] = 1
            e[(s + i) * n + i] = -1
        return IntMatrix(n, e)

    @property
    def layer_dim(self) -> int:
        """Dimension over F_p of each congruence kernel layer."""
        if self.kind == SL:
            return self.n * self.n - 1
        s = self.s
        return s * (2 * s + 1)

    def __str__(self):
        return f"{self.kind}({self.n})"


def ambient_contains(k: AmbientKind, g: IntMatrix) -> bool:
    if not isinstance(g, IntMatrix) or g.n != k.n:
        return False
    if k.kind == Sp:
        J = k.J.entries
        return mul(mul(g.entries, J, k.n), transpose(g.entries, k.n), k.n) == J
    return g.det() == 1


def preserves_form_mod(k: AmbientKind, g: Sequence[int], m: int) -> bool:
    n = k.n
    if k.kind == SL:
        return True
    J = k.J.entries
    lhs = mul(mul(tuple(g), J, n), transpose(tuple(g), n), n)
    return all((a - b) % m == 0 for a, b in zip(lhs, J))


def elementary_generators(k: AmbientKind, m: int = 1) -> list[IntMatrix]:
    """The elementary generating set of level m."""
    if m < 1:
        raise ValueError("level must be positive")
    n = k.n
    t = IntMatrix.elementary
    if k.kind == SL:
        return [t(n, i, j, m) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    s = k.s
    gens = []
    for i in range(1, s + 1):
        for j in range(i + 1, s + 1):
            gens.append(t(n, i, s + j, m) @ t(n, j, s + i, m))
            gens.append(t(n, s + i, j, m) @ t(n, s + j, i, m))
    for i in range(1, s + 1):
        gens.append(t(n, i, s + i, m))
        gens.append(t(n, s + i, i, m))
    return gens


def _prime_field_order(kind: str, n: int, p: int) -> int:
    if kind == SL:
        o = p ** (n * (n - 1) // 2)
        for i in range(2, n + 1):
            o *= p ** i - 1
        return o
    s = n // 2
    o = p ** (s * s)
    for i in range(1, s + 1):
        o *= p ** (2 * i) - 1
    return o


def prime_power_order(kind: str, n: int, p: int, a: int) -> int:
    """|Sigma(n, Z/p^a)| for a >= 1."""
    if kind == SL:
        d = n * n - 1
    else:
        s = n // 2
        d = s * (2 * s + 1)
    return p ** ((a - 1) * d) * _prime_field_order(kind, n, p)


def ambient_order(k: AmbientKind, m: int) -> int:
    """|SL(n, Z/m)| or |Sp(n, Z/m)|; 1 for m = 1."""
    if m < 1:
        raise ValueError("modulus must be positive")
    order = 1
    for p, a in factorint(m).items():
        order *= prime_power_order(k.kind, k.n, p, a)
    return order


Transvection = Union[IntMatrix, GroupWord, None]


@dataclass(frozen=True)
class GroupSpec:
    """A finitely generated subgroup of SL(n, Z) or Sp(n, Z).

    ``transvection`` is either an explicit matrix in the group or a word in the
    generators (signed, 1-based). ``pcs_level`` r adds the principal congruence
    subgroup of level r to the generators.
    """

    ambient: AmbientKind
    generators: tuple
    transvection: Transvection = None
    pcs_level: int | None = None
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for idx, g in enumerate(self.generators):
            if not ambient_contains(self.ambient, g):
                raise ValueError(f"generator {idx + 1} is not in {self.ambient}")

    @property
    def n(self) -> int:
        return self.ambient.n

    def transvection_matrix(self) -> IntMatrix | None:
        from .intmat import eval_word
        t = self.transvection
        if t is None or isinstance(t, IntMatrix):
            return t
        return eval_word(t, self.generators)

    def identity(self) -> IntMatrix:
        return IntMatrix(self.n, identity_flat(self.n))
