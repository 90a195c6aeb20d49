import pytest
from sympy import nextprime

from pcslevel.config import Config
from pcslevel.errors import FactorizationTooHard, Undecided
from pcslevel.families import beta_family, humphries_family, hypergeometric_family, rho_family
from pcslevel.gammas import SL, AmbientKind, GroupSpec, elementary_generators
from pcslevel.intmat import IntMatrix
from pcslevel.modgroup import DeltaCache
from pcslevel.primeset import (ALGEBRA, CHAIN, candidate_primes, factor_exact, pi_tilde,
                               surjective_mod_p)

SL3 = AmbientKind(SL, 3)


def complement_group():
    """<a, b, Gamma_{3,4}>: a, b generate a complement of the kernel of SL(3, Z/4) -> SL(3, 2).

    It surjects mod 2 but has level 4, the situation the even-level test exists for.
    """
    a = IntMatrix.from_rows([[1, -1, 0], [0, -1, 0], [0, 0, -1]])
    b = IntMatrix.from_rows([[0, -1, 0], [-2, 0, 1], [-1, -2, 0]])
    return GroupSpec(SL3, [a, b, IntMatrix.elementary(3, 1, 2, 4)], transvection=(3,),
                     pcs_level=4, name="complement")


def test_factor_exact():
    assert factor_exact(-625) == {5: 4}
    p, q = nextprime(10**9), nextprime(10**10)
    assert factor_exact(p * q * 12) == {2: 2, 3: 1, p: 1, q: 1}
    with pytest.raises(ValueError):
        factor_exact(0)


def test_factorization_too_hard():
    p, q = nextprime(10**30), nextprime(3 * 10**30)
    cfg = Config(factor_effort=100, ecm_curves=1)
    with pytest.raises(FactorizationTooHard):
        factor_exact(p * q, cfg)


def test_full_group_has_no_exceptional_primes():
    spec = GroupSpec(SL3, elementary_generators(SL3), transvection=(1,))
    r = pi_tilde(spec)
    assert r.exceptional == [] and r.pi_tilde == [] and r.q == 1
    assert r.even_test_used


def test_candidates_beta1():
    d, dL, cands = candidate_primes(beta_family(1))
    assert 5 in cands and 2 in cands
    assert d % dL == 0


def test_humphries_unexceptional():
    assert pi_tilde(humphries_family(11)).pi_tilde == []


@pytest.mark.parametrize("spec,p,expect", [
    (beta_family(1), 5, False), (beta_family(1), 7, True),
    (hypergeometric_family(1, 3), 2, False), (hypergeometric_family(1, 3), 3, True),
], ids=str)
def test_surjective_mod_p(spec, p, expect):
    assert surjective_mod_p(spec, p)[0] is expect


@pytest.mark.parametrize("spec", [beta_family(1), beta_family(-1), rho_family(3),
                                  hypergeometric_family(2, 3)], ids=lambda s: s.name)
@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_strategies_agree(spec, p):
    cache = DeltaCache(spec)
    try:
        a, _ = surjective_mod_p(spec, p, strategy=ALGEBRA)
    except Undecided:
        pytest.skip("transvection trivial mod p")
    c, _ = surjective_mod_p(spec, p, cache=cache, strategy=CHAIN)
    assert a == c


def test_algebra_strategy_undecided_at_two():
    with pytest.raises(Undecided):
        surjective_mod_p(beta_family(1), 2, strategy=ALGEBRA)


def test_pcs_primes_shortcut():
    spec = complement_group()
    assert surjective_mod_p(spec, 3) == (True, "pcs")


def test_even_test_adds_two():
    r = pi_tilde(complement_group())
    assert r.exceptional == [] and r.even_test_used
    assert r.pi_tilde == [2]


def test_even_test_keeps_odd_level():
    r = pi_tilde(beta_family(1))
    assert r.even_test_used and r.q == 5
    assert r.pi_tilde == [5]


def test_even_test_skipped_when_two_exceptional():
    r = pi_tilde(hypergeometric_family(1, 3))
    assert not r.even_test_used and r.pi_tilde == [2]


def test_beta3_pi_tilde():
    r = pi_tilde(beta_family(3))
    assert r.pi_tilde == [3, 73]


def test_report_serializes():
    d = pi_tilde(beta_family(1)).as_dict()
    assert d["pi_tilde"] == [5] and isinstance(d["gram_det"], str)
