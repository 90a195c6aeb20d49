"""Density testing with a known transvection.

H = <S> containing a transvection t is dense iff the normal closure <t>^H is
absolutely irreducible, i.e. iff the Q-span of <t>^H is all of Mat(n, Q).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotATransvection, UnsupportedDegreeParity
from .gammas import SL, AmbientKind, GroupSpec
from .intmat import (GroupWord, IntMatrix, ModSpan, RationalSpan, check_word, eval_word,
                     identity_flat, invert_unimodular, is_transvection, is_transvection_mod,
                     mul, mul_mod, word_reduce)
from .modgroup import inverse_mod


@dataclass
class AlgebraBasis:
    """Group elements spanning the enveloping algebra of <t>^H, with words."""

    n: int
    elements: list = field(default_factory=list)   # IntMatrix
    words: list = field(default_factory=list)      # GroupWord
    span: RationalSpan | None = None
    conjugates: list = field(default_factory=list)  # indices of elements that are conjugates of t

    @property
    def rank(self) -> int:
        return len(self.elements)

    def is_full(self) -> bool:
        return self.rank == self.n * self.n


def _letters(k: int) -> list[int]:
    out = []
    for i in range(1, k + 1):
        out += [i, -i]
    return out


def resolve_transvection(gens: Sequence[IntMatrix], t) -> tuple[IntMatrix, GroupWord | None]:
    if isinstance(t, IntMatrix):
        return t, None
    word = tuple(t)
    check_word(word, len(gens))
    return eval_word(word, gens), word


def algebra_basis(gens: Sequence[IntMatrix], t, require_transvection: bool = True) -> AlgebraBasis:
    """Basis of the Q-algebra spanned by <t>^H, H = <gens>.

    Conjugation closure of {1, t} under gens and their inverses comes first,
    then closure under right multiplication by the conjugates found. Every
    basis element is a product of conjugates of t, hence lies in H.
    """
    tm, tword = resolve_transvection(gens, t)
    if require_transvection and not is_transvection(tm):
        raise NotATransvection("designated element is not a transvection")
    n = tm.n
    letters = _letters(len(gens))
    mats = {}
    for i, g in enumerate(gens, 1):
        mats[i] = g.entries
        mats[-i] = invert_unimodular(g).entries

    basis = AlgebraBasis(n=n, span=RationalSpan(n * n))
    full = n * n

    def add(entries, word):
        if basis.span.insert(entries):
            basis.elements.append(IntMatrix(n, entries))
            basis.words.append(word)
            return True
        return False

    add(identity_flat(n), ())
    # without a word, t enters the stored words as the token "t"
    add(tm.entries, tword if tword is not None else ("t",))
    basis.conjugates.append(1)

    queue = deque([1])
    while queue and basis.rank < full:
        idx = queue.popleft()
        a = basis.elements[idx].entries
        wa = basis.words[idx]
        for s in letters:
            c = mul(mul(mats[-s], a, n), mats[s], n)
            w = _conj_word(wa, s)
            if add(c, w):
                basis.conjugates.append(basis.rank - 1)
                queue.append(basis.rank - 1)

    conj = [(basis.elements[i].entries, basis.words[i]) for i in basis.conjugates]
    queue = deque(range(basis.rank))
    while queue and basis.rank < full:
        idx = queue.popleft()
        a = basis.elements[idx].entries
        wa = basis.words[idx]
        for c, wc in conj:
            if add(mul(a, c, n), _join(wa, wc)):
                queue.append(basis.rank - 1)
    return basis


def _reduce(word) -> tuple:
    # "t" marks a transvection given only as a matrix; it never cancels
    out: list = []
    for k in word:
        if out and k != "t" and out[-1] != "t" and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


def _conj_word(w, s):
    return _reduce((-s,) + tuple(w) + (s,))


def _join(u, v):
    return _reduce(tuple(u) + tuple(v))


def check_density_scope(k: AmbientKind) -> None:
    if k.kind == SL and k.n % 2 == 0:
        raise UnsupportedDegreeParity(
            f"density of subgroups of SL({k.n}, Z) is only decided for odd degree")


def is_dense(spec: GroupSpec, t=None) -> bool:
    """True iff <spec.generators> is Zariski dense (given a transvection)."""
    check_density_scope(spec.ambient)
    if t is None:
        t = spec.transvection
    if t is None:
        raise NotATransvection("no transvection supplied")
    return algebra_basis(spec.generators, t).is_full()


def algebra_rank_mod_p(gens: Sequence[IntMatrix], t: IntMatrix, p: int) -> int:
    """F_p-dimension of the algebra spanned by the normal closure of t mod p."""
    n = t.n
    mats = {}
    for i, g in enumerate(gens, 1):
        gp = g.mod(p)
        mats[i] = gp
        mats[-i] = inverse_mod(gp, n, p)
    letters = _letters(len(gens))
    span = ModSpan(p, n * n)
    elems = []
    full = n * n

    def add(e):
        if span.insert(e):
            elems.append(e)
            return True
        return False

    add(tuple(x % p for x in identity_flat(n)))
    if not add(t.mod(p)):
        return span.rank
    conj_idx = [1]
    queue = deque([1])
    while queue and span.rank < full:
        a = elems[queue.popleft()]
        for s in letters:
            if add(mul_mod(mul_mod(mats[-s], a, n, p), mats[s], n, p)):
                conj_idx.append(len(elems) - 1)
                queue.append(len(elems) - 1)
    conj = [elems[i] for i in conj_idx]
    queue = deque(range(len(elems)))
    while queue and span.rank < full:
        a = elems[queue.popleft()]
        for c in conj:
            if add(mul_mod(a, c, n, p)):
                queue.append(len(elems) - 1)
    return span.rank


def group_algebra_rank(gens: Sequence[IntMatrix]) -> int:
    """Q-dimension of the enveloping algebra of <gens> itself."""
    n = gens[0].n
    mats = [g.entries for g in gens] + [invert_unimodular(g).entries for g in gens]
    span = RationalSpan(n * n)
    elems = [identity_flat(n)]
    span.insert(elems[0])
    queue = deque([0])
    while queue and span.rank < n * n:
        a = elems[queue.popleft()]
        for g in mats:
            e = mul(a, g, n)
            if span.insert(e):
                elems.append(e)
                queue.append(len(elems) - 1)
    return span.rank


class NotFound:
    """Sentinel returned by find_transvection when the search is exhausted."""

    def __repr__(self):
        return "NotFound"

    def __bool__(self):
        return False


NOT_FOUND = NotFound()


def find_transvection(gens: Sequence[IntMatrix], depth: int):
    """Breadth-first search for a word evaluating to a transvection.

    Words are freely reduced, enumerated by length with letters ordered
    1, -1, 2, -2, ...; at each length the commutators [g, w] of a generator
    with the words one shorter are also tried. Returns a word or NOT_FOUND.
    """
    if depth < 1 or not gens:
        return NOT_FOUND
    n = gens[0].n
    letters = _letters(len(gens))
    mats = {}
    for i, g in enumerate(gens, 1):
        mats[i] = g.entries
        mats[-i] = invert_unimodular(g).entries
    frontier = [((), identity_flat(n))]
    for length in range(1, depth + 1):
        nxt = []
        for w, e in frontier:
            for s in letters:
                if w and w[-1] == -s:
                    continue
                we = mul(e, mats[s], n)
                nw = w + (s,)
                if is_transvection(IntMatrix(n, we)):
                    return nw
                nxt.append((nw, we))
        if length >= 2:
            for w, e in frontier:
                if not w:
                    continue
                einv = invert_unimodular(IntMatrix(n, e)).entries
                for s in letters:
                    comm = mul(mul(mats[-s], einv, n), mul(mats[s], e, n), n)
                    if is_transvection(IntMatrix(n, comm)):
                        winv = tuple(-x for x in reversed(w))
                        return word_reduce((-s,) + winv + (s,) + w)
        frontier = nxt
    return NOT_FOUND
