from math import gcd

import pytest
from hypothesis import given, strategies as st

from pcslevel.errors import NonDivisor
from pcslevel.families import (B1_WORD, TABLE1, TABLE2, TABLE3, assembled_groups, beta_family,
                               beta_matrices, fz, hatG_index, humphries_family,
                               hypergeometric_family, hypergeometric_matrices, level45_group,
                               rho_family, rho_matrices)
from pcslevel.gammas import Sp, AmbientKind, ambient_contains
from pcslevel.intmat import eval_word, is_transvection

SP4 = AmbientKind(Sp, 4)


@pytest.mark.parametrize("T", [t for t in range(-2, 21) if t])
def test_b1_is_transvection(T):
    spec = beta_family(T, with_z=True)
    assert is_transvection(eval_word(B1_WORD, spec.generators))


def test_beta_relations():
    X, Y, Z = beta_matrices(1)
    Zi = Z.inverse()
    assert Z @ X @ Zi == X @ Y
    assert Z @ Y @ Zi == Y @ X @ Y


@pytest.mark.parametrize("k", [0, 2, 3, 4, 5])
def test_rho_members(k):
    for g in rho_matrices(k):
        assert g.det() == 1
    spec = rho_family(k)
    t = spec.transvection_matrix()
    assert t is None or is_transvection(t)
    if k in (0, 3, 5):
        assert t is not None


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_hypergeometric_symplectic(d, k):
    U, T = hypergeometric_matrices(d, k)
    J = SP4.J
    for g in (U, T):
        assert g @ J @ g.transpose() == J
        assert ambient_contains(SP4, g)
    assert is_transvection(T)


def test_humphries_members():
    for x in (11, 99, 998):
        spec = humphries_family(x)
        assert all(g.det() == 1 for g in spec.generators)
        assert is_transvection(spec.transvection_matrix())


def test_hatG_examples():
    assert hatG_index(1, 1) == 1
    assert hatG_index(6, 1) == 1200
    assert hatG_index(4, 2) == 720
    assert hatG_index(4, 4) == 2880
    with pytest.raises(NonDivisor):
        hatG_index(4, 3)
    with pytest.raises(ValueError):
        hatG_index(0, 1)


@pytest.mark.parametrize("row", sorted(TABLE3))
def test_hatG_table(row):
    d, k = row
    assert hatG_index(d, gcd(d, k)) == fz(TABLE3[row][2])


@given(st.integers(1, 200), st.integers(1, 30))
def test_hatG_integral_and_multiplicative(d1, j):
    divisors = [x for x in range(1, d1 + 1) if d1 % x == 0]
    d2 = divisors[j % len(divisors)]
    v = hatG_index(d1, d2)
    assert v >= 1
    # the formula factors over coprime parts
    for a in divisors:
        b = d1 // a
        if gcd(a, b) == 1:
            assert v == hatG_index(a, gcd(a, d2)) * hatG_index(b, gcd(b, d2))


@pytest.mark.parametrize("tag,count,n", [("G3", 48, 7), ("G7", 15, 5), ("G8", 10, 5),
                                         ("G9", 13, 11)])
def test_assembled_counts(tag, count, n):
    spec = assembled_groups(tag)
    assert len(spec.generators) == count and spec.n == n
    assert all(g.det() == 1 for g in spec.generators)
    assert is_transvection(spec.transvection_matrix())


def test_assembly_seed_is_deterministic():
    assert assembled_groups("G9").generators == assembled_groups("G9").generators
    assert assembled_groups("G9", seed=1).generators != assembled_groups("G9").generators


def test_level45_group():
    spec = level45_group()
    assert spec.pcs_level == 45 and len(spec.generators) == 8


def test_published_tables_consistent():
    assert fz(TABLE1[1][0]) == 5 and fz(TABLE1[1][1]) == 31
    assert fz(TABLE2[3][0]) == 13
    assert fz({}) == 1
    assert len(TABLE3) == 14
