import random

import pytest
from hypothesis import given, settings, strategies as st

from pcslevel.errors import InvariantViolation, NotDense, NotInAmbient, NoTransvectionFound
from pcslevel.families import (assembled_groups, beta_family, humphries_family,
                               hypergeometric_family, level45_group, rho_family)
from pcslevel.gammas import SL, AmbientKind, GroupSpec, elementary_generators
from pcslevel.intmat import IntMatrix
from pcslevel.level import (analyze, check_level, delta_law_violations, is_member,
                            level_max_pcs)
from pcslevel.modgroup import DeltaCache

from oracles import bfs_closure
from test_primeset import complement_group


@pytest.mark.parametrize("spec,sigma,M", [
    (beta_family(1), {5}, 5),
    (level45_group(), {3, 5}, 45),
    (hypergeometric_family(1, 2), {2}, 2),
    (beta_family(1), set(), 1),
], ids=["beta1", "level45", "G(1,2)", "empty"])
def test_level_max_pcs(spec, sigma, M):
    assert level_max_pcs(spec, sigma)[0] == M


def test_analyze_beta1_G():
    r = analyze(beta_family(1, with_z=True))
    assert (r.level, r.index) == (5, 31)
    assert r.exponents == {5: 1}


def test_analyze_beta1_F():
    # <X_1, Y_1> alone has index 124 mod 5 (3000 elements by plain BFS)
    r = analyze(beta_family(1))
    assert (r.level, r.index) == (5, 124)
    X, Y = beta_family(1).generators
    assert 372000 // len(bfs_closure([X.entries, Y.entries], 3, 5)) == 124


def test_analyze_rho3():
    g, f = analyze(rho_family(3, with_z=True)), analyze(rho_family(3))
    assert (g.level, g.index) == (13, 123708)
    assert (f.level, f.index) == (13, 742248)


def test_analyze_humphries():
    r = analyze(humphries_family(11))
    assert r.level == 1 and r.index == 1 and r.trivial_level


def test_analyze_complement_level_four():
    r = analyze(complement_group())
    assert (r.level, r.index) == (4, 256)


def test_not_dense():
    with pytest.raises(NotDense):
        analyze(assembled_groups("G8"))


def test_no_transvection():
    spec = GroupSpec(AmbientKind(SL, 3), beta_family(1).generators)
    with pytest.raises(NoTransvectionFound):
        analyze(spec)
    assert analyze(spec, search_depth=9).level == 5


@pytest.mark.parametrize("spec", [beta_family(-1, True), hypergeometric_family(2, 3)],
                         ids=lambda s: s.name)
def test_generator_order_independence(spec):
    base = analyze(spec)
    k = len(spec.generators)
    perm = list(reversed(range(k)))
    where = {old: new for new, old in enumerate(perm)}
    word = tuple((where[abs(x) - 1] + 1) * (1 if x > 0 else -1) for x in spec.transvection)
    shuffled = GroupSpec(spec.ambient, [spec.generators[i] for i in perm], transvection=word)
    r = analyze(shuffled)
    assert (r.level, r.index) == (base.level, base.index)


def test_report_dict_stable():
    a = analyze(beta_family(1, True)).as_dict()
    b = analyze(beta_family(1, True)).as_dict()
    assert a == b
    assert a["index"] == "31" and a["level"] == 5


def test_check_level_detects_wrong_level():
    cache = DeltaCache(beta_family(1, True))
    check_level(cache, 5, [5])
    with pytest.raises(InvariantViolation):
        check_level(cache, 25, [5])
    with pytest.raises(InvariantViolation):
        check_level(cache, 1, [5])


def test_delta_law_violations():
    assert delta_law_violations({1: 1, 2: 3, 4: 6, 8: 6, 16: 6}) == []
    assert delta_law_violations({1: 1, 2: 3, 4: 4}) != []
    assert delta_law_violations({1: 1, 2: 2, 4: 2, 8: 4}) != []


def test_is_member_beta1():
    spec = beta_family(1)
    assert is_member(spec, 5, IntMatrix.identity(3))
    for g in spec.generators:
        assert is_member(spec, 5, g)
    elems = bfs_closure([g.entries for g in spec.generators], 3, 5)
    for g in elementary_generators(AmbientKind(SL, 3)):
        assert is_member(spec, 5, g) == (g.mod(5) in elems)
    assert not all(g.mod(5) in elems for g in elementary_generators(AmbientKind(SL, 3)))
    with pytest.raises(NotInAmbient):
        is_member(spec, 5, IntMatrix.from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_is_member_matches_bfs(seed):
    rng = random.Random(seed)
    spec = beta_family(1)
    elems = bfs_closure([g.entries for g in spec.generators], 3, 5)
    E = elementary_generators(AmbientKind(SL, 3))
    g = IntMatrix.identity(3)
    for _ in range(rng.randint(0, 8)):
        g = g @ rng.choice(E)
    assert is_member(spec, 5, g) == (g.mod(5) in elems)
