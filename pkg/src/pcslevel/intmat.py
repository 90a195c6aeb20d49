"""Exact integer and rational matrix arithmetic.

Matrices are stored row-major as flat tuples of Python ints, so there is no
overflow and no floating point anywhere. The low-level helpers (``mul``,
``mul_mod``, ...) work on bare tuples and are what the hot loops in
:mod:`pcslevel.modgroup` use; :class:`IntMatrix` wraps them for the public API.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NonUnimodular, WordNotInGroup

Flat = tuple  # n*n ints, row-major


# --------------------------------------------------------------------------
# flat-tuple kernels

def identity_flat(n: int) -> Flat:
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


_UNROLL_MAX = 8
_kernels: dict[tuple[str, int], object] = {}


def _kernel(kind: str, n: int):
    """Unrolled straight-line code for small n, generated once per (kind, n)."""
    key = (kind, n)
    fn = _kernels.get(key)
    if fn is None:
        if kind == "vec":
            terms = [" + ".join(f"v[{k}]*b[{k * n + j}]" for k in range(n)) for j in range(n)]
            src = f"lambda v, b, m: ({', '.join(f'({t}) % m' for t in terms)},)"
        else:
            terms = [" + ".join(f"a[{i * n + k}]*b[{k * n + j}]" for k in range(n))
                     for i in range(n) for j in range(n)]
            if kind == "mod":
                src = f"lambda a, b, m: ({', '.join(f'({t}) % m' for t in terms)},)"
            else:
                src = f"lambda a, b: ({', '.join(terms)},)"
        fn = eval(src)  # noqa: S307 - generated from integers only
        _kernels[key] = fn
    return fn


def mul(a: Flat, b: Flat, n: int) -> Flat:
    if n <= _UNROLL_MAX:
        return _kernel("int", n)(a, b)
    out = []
    for i in range(0, n * n, n):
        row = a[i:i + n]
        for j in range(n):
            s = 0
            for k in range(n):
                s += row[k] * b[k * n + j]
            out.append(s)
    return tuple(out)


def mul_mod(a: Flat, b: Flat, n: int, m: int) -> Flat:
    if n <= _UNROLL_MAX:
        return _kernel("mod", n)(a, b, m)
    out = []
    for i in range(0, n * n, n):
        row = a[i:i + n]
        for j in range(n):
            s = 0
            for k in range(n):
                s += row[k] * b[k * n + j]
            out.append(s % m)
    return tuple(out)


def vec_mul_mod(v: Sequence[int], b: Flat, n: int, m: int) -> tuple:
    """Row vector v times matrix b, mod m."""
    if n <= _UNROLL_MAX:
        return _kernel("vec", n)(v, b, m)
    return tuple(sum(v[k] * b[k * n + j] for k in range(n) if v[k]) % m for j in range(n))


def power_mod(a: Flat, e: int, n: int, m: int) -> Flat:
    """``a**e`` mod m for e >= 0."""
    result = identity_flat(n)
    base = a
    while e:
        if e & 1:
            result = mul_mod(result, base, n, m)
        e >>= 1
        if e:
            base = mul_mod(base, base, n, m)
    return tuple(x % m for x in result)


def transpose(a: Flat, n: int) -> Flat:
    return tuple(a[j * n + i] for i in range(n) for j in range(n))


def trace_product(a: Flat, b: Flat, n: int) -> int:
    """tr(a @ b) without forming the product."""
    s = 0
    for k in range(n):
        for l in range(n):
            s += a[k * n + l] * b[l * n + k]
    return s


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    size = len(a)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, size):
            aik = a[i][k]
            rowi = a[i]
            rowk = a[k]
            for j in range(k + 1, size):
                rowi[j] = (rowi[j] * pivot - aik * rowk[j]) // prev
        prev = pivot
    return sign * a[-1][-1]


def _inverse_rational(a: Flat, n: int) -> list[Fraction]:
    m = [[Fraction(a[i * n + j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise NonUnimodular("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n + j] for i in range(n) for j in range(n)]


# --------------------------------------------------------------------------
# IntMatrix

class IntMatrix:
    """Immutable square integer matrix."""

    __slots__ = ("n", "entries", "_hash")

    def __init__(self, n: int, entries: Iterable[int]):
        entries = tuple(int(x) for x in entries)
        if len(entries) != n * n:
            raise DimensionMismatch(f"expected {n * n} entries, got {len(entries)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square")
        return cls(n, (x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, identity_flat(n))

    @classmethod
    def elementary(cls, n: int, i: int, j: int, m: int = 1) -> "IntMatrix":
        """t_ij(m) = 1 + m e_ij, with 1-based i != j."""
        if i == j:
            raise ValueError("elementary matrix needs i != j")
        e = list(identity_flat(n))
        e[(i - 1) * n + (j - 1)] = m
        return cls(n, e)

    @classmethod
    def block_diag(cls, *blocks: "IntMatrix") -> "IntMatrix":
        n = sum(b.n for b in blocks)
        e = [0] * (n * n)
        off = 0
        for b in blocks:
            for i in range(b.n):
                for j in range(b.n):
                    e[(off + i) * n + off + j] = b.entries[i * b.n + j]
            off += b.n
        return cls(n, e)

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n + j]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.n == other.n and self.entries == other.entries

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.n, self.entries))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"IntMatrix({self.rows()})"

    def _check(self, other: "IntMatrix"):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"degree {self.n} vs {other.n}")
        return None

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        bad = self._check(other)
        if bad is NotImplemented:
            return bad
        return IntMatrix(self.n, mul(self.entries, other.entries, self.n))

    __mul__ = __matmul__

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check(other)
        return IntMatrix(self.n, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check(other)
        return IntMatrix(self.n, (a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.n, (c * a for a in self.entries))

    def __pow__(self, e: int) -> "IntMatrix":
        base = self if e >= 0 else invert_unimodular(self)
        e = abs(e)
        result = identity_flat(self.n)
        b = base.entries
        while e:
            if e & 1:
                result = mul(result, b, self.n)
            e >>= 1
            if e:
                b = mul(b, b, self.n)
        return IntMatrix(self.n, result)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.n, transpose(self.entries, self.n))

    def trace(self) -> int:
        return sum(self.entries[i * self.n + i] for i in range(self.n))

    def det(self) -> int:
        return bareiss_det(self.rows())

    def is_identity(self) -> bool:
        return self.entries == identity_flat(self.n)

    def inverse(self) -> "IntMatrix":
        return invert_unimodular(self)

    def conj(self, h: "IntMatrix") -> "IntMatrix":
        """h^-1 self h."""
        return invert_unimodular(h) @ self @ h

    def mod(self, m: int) -> Flat:
        return tuple(x % m for x in self.entries)

    def max_abs(self) -> int:
        return max(abs(x) for x in self.entries)


def invert_unimodular(g: IntMatrix) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    d = g.det()
    if abs(d) != 1:
        raise NonUnimodular(f"determinant {d} is not +-1")
    n = g.n
    if n == 2:
        a, b, c, e = g.entries
        return IntMatrix(2, (d * e, -d * b, -d * c, d * a))
    if n == 3:
        a, b, c, e, f, h, i, j, k = g.entries
        adj = (f * k - h * j, c * j - b * k, b * h - c * f,
               h * i - e * k, a * k - c * i, c * e - a * h,
               e * j - f * i, b * i - a * j, a * f - b * e)
        return IntMatrix(3, (d * x for x in adj))
    inv = _inverse_rational(g.entries, n)
    return IntMatrix(n, (int(x) for x in inv))


def rank(vectors: Iterable[Sequence[int]]) -> int:
    sp = RationalSpan(None)
    for v in vectors:
        sp.insert(v)
    return sp.rank


def is_transvection(g: IntMatrix) -> bool:
    """True iff g - 1 has rank 1 and (g - 1)^2 = 0."""
    n = g.n
    x = tuple(e - (1 if i % (n + 1) == 0 else 0) for i, e in enumerate(g.entries))
    if not any(x):
        return False
    if any(mul(x, x, n)):
        return False
    return rank(x[i * n:(i + 1) * n] for i in range(n)) == 1


def is_transvection_mod(g: Flat, n: int, p: int) -> bool:
    """Transvection test for the reduction of g modulo a prime p."""
    x = tuple((e - (1 if i % (n + 1) == 0 else 0)) % p for i, e in enumerate(g))
    if not any(x):
        return False
    if any(mul_mod(x, x, n, p)):
        return False
    sp = ModSpan(p, None)
    for i in range(n):
        sp.insert(x[i * n:(i + 1) * n])
    return sp.rank == 1


# --------------------------------------------------------------------------
# words

GroupWord = tuple  # signed 1-based generator indices; -k is the inverse of generator k


def check_word(word: Sequence[int], ngens: int) -> None:
    for k in word:
        if k == 0 or abs(k) > ngens:
            raise WordNotInGroup(f"letter {k} out of range for {ngens} generators")


def word_inverse(word: Sequence[int]) -> GroupWord:
    return tuple(-k for k in reversed(word))


def word_reduce(word: Sequence[int]) -> GroupWord:
    out: list[int] = []
    for k in word:
        if out and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


def eval_word(word: Sequence[int], gens: Sequence[IntMatrix],
              inverses: Sequence[IntMatrix] | None = None) -> IntMatrix:
    """Evaluate a word over Z."""
    if not gens:
        raise WordNotInGroup("no generators")
    check_word(word, len(gens))
    n = gens[0].n
    if inverses is None:
        used = {abs(k) for k in word if k < 0}
        inverses = [invert_unimodular(g) if i + 1 in used else None for i, g in enumerate(gens)]
    acc = identity_flat(n)
    for k in word:
        m = gens[k - 1] if k > 0 else inverses[-k - 1]
        acc = mul(acc, m.entries, n)
    return IntMatrix(n, acc)


def eval_word_mod(word: Sequence[int], gens: Sequence[Flat], inverses: Sequence[Flat],
                  n: int, m: int) -> Flat:
    """Evaluate a word over Z/mZ given reduced generators and inverses."""
    check_word(word, len(gens))
    acc = tuple(x % m for x in identity_flat(n))
    for k in word:
        acc = mul_mod(acc, gens[k - 1] if k > 0 else inverses[-k - 1], n, m)
    return acc


# --------------------------------------------------------------------------
# spans

def _content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
        if g == 1:
            break
    return g


def _primitive(v: Sequence[int]) -> tuple:
    g = _content(v)
    if g > 1:
        v = [x // g for x in v]
    lead = next((x for x in v if x), 0)
    if lead < 0:
        v = [-x for x in v]
    return tuple(v)


class RationalSpan:
    """Q-span of integer vectors, kept as a reduced echelon basis.

    Rows are primitive integer vectors with positive pivots; every pivot
    column is zero in all other rows. Elimination is fraction-free.
    """

    def __init__(self, dim: int | None, rows=(), pivots=()):
        self.dim = dim
        self.rows: list[tuple] = list(rows)
        self.pivots: list[int] = list(pivots)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "RationalSpan":
        return RationalSpan(self.dim, self.rows, self.pivots)

    def _reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        if self.dim is None:
            self.dim = len(v)
        elif len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in span of dimension {self.dim}")
        for row, c in zip(self.rows, self.pivots):
            x = v[c]
            if x:
                r = row[c]
                v = [r * a - x * b for a, b in zip(v, row)]
                g = _content(v)
                if g > 1:
                    v = [a // g for a in v]
        return v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self._reduce(v))

    def insert(self, v: Sequence[int]) -> bool:
        """Add v in place; return True iff the rank grew."""
        w = self._reduce(v)
        if not any(w):
            return False
        w = _primitive(w)
        c = next(i for i, x in enumerate(w) if x)
        p = w[c]
        for idx, row in enumerate(self.rows):
            x = row[c]
            if x:
                self.rows[idx] = _primitive([p * a - x * b for a, b in zip(row, w)])
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < c:
            pos += 1
        self.rows.insert(pos, w)
        self.pivots.insert(pos, c)
        return True


def span_insert(sp: RationalSpan, v: Sequence[int]) -> tuple[RationalSpan, bool]:
    """Functional insertion: returns a new span and whether it grew."""
    new = sp.copy()
    grew = new.insert(v)
    return new, grew


class ModSpan:
    """F_p-span of vectors in reduced echelon form with unit pivots."""

    def __init__(self, p: int, dim: int | None):
        self.p = p
        self.dim = dim
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> list[int]:
        p = self.p
        v = [x % p for x in v]
        if self.dim is None:
            self.dim = len(v)
        elif len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in span of dimension {self.dim}")
        for row, c in zip(self.rows, self.pivots):
            x = v[c]
            if x:
                v = [(a - x * b) % p for a, b in zip(v, row)]
        return v

    def coefficients(self, v: Sequence[int]) -> tuple[list[int], list[int]]:
        """Return (coeffs per row, remainder) with v = sum c_i row_i + remainder."""
        p = self.p
        v = [x % p for x in v]
        coeffs = []
        for row, c in zip(self.rows, self.pivots):
            x = v[c]
            coeffs.append(x)
            if x:
                v = [(a - x * b) % p for a, b in zip(v, row)]
        return coeffs, v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def insert(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        if not any(w):
            return False
        p = self.p
        c = next(i for i, x in enumerate(w) if x)
        inv = pow(w[c], -1, p)
        w = [(x * inv) % p for x in w]
        for idx, row in enumerate(self.rows):
            x = row[c]
            if x:
                self.rows[idx] = [(a - x * b) % p for a, b in zip(row, w)]
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < c:
            pos += 1
        self.rows.insert(pos, w)
        self.pivots.insert(pos, c)
        return True


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class IntLattice:
    """Z-span of integer vectors in Hermite normal form (incremental)."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> list[tuple]:
        return [tuple(r) for r in self.rows]

    def insert(self, v: Sequence[int]) -> bool:
        """Add v; return True iff the lattice changed."""
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in lattice of dimension {self.dim}")
        v = list(v)
        changed = False
        while any(v):
            c = next(i for i, x in enumerate(v) if x)
            try:
                idx = self.pivots.index(c)
            except ValueError:
                if v[c] < 0:
                    v = [-x for x in v]
                pos = 0
                while pos < len(self.pivots) and self.pivots[pos] < c:
                    pos += 1
                self.rows.insert(pos, v)
                self.pivots.insert(pos, c)
                changed = True
                break
            row = self.rows[idx]
            r, x = row[c], v[c]
            if x % r == 0:
                q = x // r
                v = [a - q * b for a, b in zip(v, row)]
                continue
            g, s, t = _xgcd(r, x)
            self.rows[idx] = [s * a + t * b for a, b in zip(row, v)]
            rg, xg = r // g, x // g
            v = [rg * b - xg * a for a, b in zip(row, v)]
            changed = True
        if changed:
            self._normalize()
        return changed

    def _normalize(self) -> None:
        rows, piv = self.rows, self.pivots
        for j in range(len(rows)):
            c = piv[j]
            pj = rows[j][c]
            for i in range(j):
                x = rows[i][c]
                if x < 0 or x >= pj:
                    q = x // pj
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[j])]


def gram_trace_det(basis: Sequence[Sequence[int]], n: int) -> int:
    """det [tr(A_i A_j)] for flattened n x n matrices A_i."""
    k = len(basis)
    gram = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            t = trace_product(basis[i], basis[j], n)
            gram[i][j] = t
            gram[j][i] = t
    return bareiss_det(gram)
