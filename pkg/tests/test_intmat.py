import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given, strategies as st

from pcslevel import intmat
from pcslevel.errors import DimensionMismatch, NonUnimodular, WordNotInGroup
from pcslevel.intmat import (IntLattice, IntMatrix, ModSpan, RationalSpan, bareiss_det,
                             eval_word, eval_word_mod, invert_unimodular, is_transvection,
                             is_transvection_mod, mul, mul_mod, power_mod, rank, vec_mul_mod,
                             word_inverse, word_reduce)

from strategies import SL3, SP4, ambient_elements


def square(n, lo=-9, hi=9):
    return st.lists(st.integers(lo, hi), min_size=n * n, max_size=n * n).map(tuple)


def naive_mul(a, b, n):
    return tuple(sum(a[i * n + k] * b[k * n + j] for k in range(n))
                 for i in range(n) for j in range(n))


@pytest.mark.parametrize("n", [2, 3, 5, 8, 9])
@given(data=st.data())
def test_mul_matches_naive(n, data):
    a, b = data.draw(square(n)), data.draw(square(n))
    assert mul(a, b, n) == naive_mul(a, b, n)
    m = data.draw(st.integers(2, 50))
    assert mul_mod(a, b, n, m) == tuple(x % m for x in naive_mul(a, b, n))
    v = a[:n]
    expect = tuple(sum(v[k] * b[k * n + j] for k in range(n)) % m for j in range(n))
    assert vec_mul_mod(v, b, n, m) == expect


def test_unrolled_and_generic_agree(monkeypatch):
    a = tuple(range(-30, 19))
    b = tuple((7 * i) % 11 - 5 for i in range(49))
    fast = mul(a, b, 7), mul_mod(a, b, 7, 13)
    monkeypatch.setattr(intmat, "_UNROLL_MAX", 0)
    assert (mul(a, b, 7), mul_mod(a, b, 7, 13)) == fast


@given(square(4, -20, 20))
def test_det_matches_sympy(e):
    rows = [list(e[i * 4:(i + 1) * 4]) for i in range(4)]
    assert bareiss_det(rows) == sympy.Matrix(rows).det()


@given(ambient_elements(SL3))
def test_inverse_sl3(g):
    assert (g @ invert_unimodular(g)).is_identity()
    assert (g ** -1) == g.inverse()


@given(ambient_elements(SP4, 6))
def test_inverse_sp4(g):
    assert (g.inverse() @ g).is_identity()


def test_inverse_rejects_non_unimodular():
    with pytest.raises(NonUnimodular):
        invert_unimodular(IntMatrix.from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        IntMatrix(3, range(8))
    with pytest.raises(DimensionMismatch):
        IntMatrix.identity(3) @ IntMatrix.identity(4)
    with pytest.raises(AttributeError):
        IntMatrix.identity(3).n = 4


@given(st.integers(-5, 5), st.integers(0, 12), st.integers(2, 30))
def test_power_mod(x, e, m):
    g = IntMatrix.from_rows([[1, x, 0], [0, 1, 0], [x, x * x + 1, 1]])
    assert power_mod(g.entries, e, 3, m) == (g ** e).mod(m)


def test_transvections():
    t = IntMatrix.elementary(3, 1, 2, 5)
    assert is_transvection(t)
    assert not is_transvection(IntMatrix.identity(3))
    assert not is_transvection(t @ IntMatrix.elementary(3, 2, 3))
    assert not is_transvection_mod(t.entries, 3, 5)
    assert is_transvection_mod(t.entries, 3, 7)
    # rank one but not unipotent
    d = IntMatrix.from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert not is_transvection(d)


@given(ambient_elements(SL3), st.integers(-4, 4).filter(bool))
def test_transvection_conjugacy_invariant(g, k):
    assert is_transvection(IntMatrix.elementary(3, 2, 1, k).conj(g))


def test_words():
    x, y = IntMatrix.elementary(3, 1, 2), IntMatrix.elementary(3, 2, 3)
    w = (1, 2, -1, 2)
    assert eval_word(w, [x, y]) == x @ y @ x.inverse() @ y
    assert eval_word(word_inverse(w), [x, y]) == eval_word(w, [x, y]).inverse()
    assert word_reduce((1, 2, -2, -1, 1)) == (1,)
    inv = [g.inverse().mod(7) for g in (x, y)]
    assert eval_word_mod(w, [x.mod(7), y.mod(7)], inv, 3, 7) == eval_word(w, [x, y]).mod(7)
    with pytest.raises(WordNotInGroup):
        eval_word((3,), [x, y])
    with pytest.raises(WordNotInGroup):
        eval_word((0,), [x, y])


vectors = st.lists(st.lists(st.integers(-6, 6), min_size=5, max_size=5), max_size=7)


@given(vectors)
def test_rational_span_rank(vs):
    assert rank(vs) == (sympy.Matrix(vs).rank() if vs else 0)


@given(vectors, st.lists(st.integers(-3, 3), min_size=7, max_size=7))
def test_rational_span_contains_combinations(vs, cs):
    sp = RationalSpan(5)
    for v in vs:
        sp.insert(v)
    combo = [sum(c * v[i] for c, v in zip(cs, vs)) for i in range(5)]
    assert sp.contains(combo)
    # echelon invariant: pivot columns vanish in other rows
    for r, c in zip(sp.rows, sp.pivots):
        assert r[c] > 0
        assert all(other[c] == 0 for other in sp.rows if other is not r)


@given(vectors, st.sampled_from([2, 3, 5, 7]))
def test_mod_span_rank(vs, p):
    sp = ModSpan(p, 5)
    for v in vs:
        sp.insert(v)
    assert sp.rank == (_rank_mod_p(vs, p) if vs else 0)
    for v in vs:
        coeffs, rem = sp.coefficients(v)
        assert not any(rem)
        rebuilt = [sum(c * r[i] for c, r in zip(coeffs, sp.rows)) % p for i in range(5)]
        assert rebuilt == [x % p for x in v]


def _rank_mod_p(vs, p):
    rows = [[x % p for x in v] for v in vs]
    r = 0
    for c in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def _invariant_product(rows):
    S = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    out = 1
    for i in range(min(S.shape)):
        if S[i, i]:
            out *= abs(S[i, i])
    return out


@given(vectors)
def test_int_lattice_hnf(vs):
    lat = IntLattice(5)
    for v in vs:
        lat.insert(v)
    for v in vs:
        assert not lat.insert(v)
    # inputs lie in L(basis); equal rank and equal Smith invariant product force equality
    if vs:
        assert lat.rank == sympy.Matrix(vs).rank()
        if lat.rank:
            assert _invariant_product(lat.basis()) == _invariant_product(vs)
    for j, (r, c) in enumerate(zip(lat.rows, lat.pivots)):
        assert r[c] > 0 and not any(r[:c])
        for i in range(j):
            assert 0 <= lat.rows[i][c] < r[c]


def test_int_lattice_index_small():
    lat = IntLattice(2)
    lat.insert([4, 6])
    lat.insert([6, 4])
    assert abs(bareiss_det(lat.basis())) == 20
