import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from soluble_tower.config import TowerConfig
from soluble_tower.oracle.stage import enumerate_tower_stage
from soluble_tower.tower import LevelVector, Tower, TowerError

seeds = st.integers(0, 2**32 - 1)


def bfs(tower, gens):
    seen = {tower.identity(gens[0].level)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tower.multiply(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def level2(tower, pairs, center=0):
    keyed = {tower.element(e1=k): xy for k, xy in pairs.items()}
    return tower.element(levels={2: (keyed, center)}, level=2)


def test_identity_and_level_one(tower23):
    one = tower23.identity(1)
    assert one.is_identity() and one.exponent == 0
    x = tower23.element(e1=1)
    assert tower23.multiply(x, x).is_identity()
    assert tower23.inverse(tower23.identity(2)) == tower23.identity(2)


def test_level_range_checked(tower23):
    with pytest.raises(TowerError):
        tower23.identity(3)
    with pytest.raises(TowerError):
        tower23.center_generator(0)


def test_commutator_example_against_oracle(tower23):
    v1 = level2(tower23, {0: (1, 0), 1: (2, 0)})
    v2 = level2(tower23, {0: (0, 1), 1: (0, 2)})
    c = tower23.commutator(v1, v2)
    assert tower23.is_central_in_level(c)
    assert c.level_vector(2).center != 0
    build = enumerate_tower_stage(TowerConfig((2, 3)), 2)
    A, B, iso = build.group, build.definition, build.iso
    a, b = A.index[v1], A.index[v2]
    assert iso[A.index[c]] == B.commutator(iso[a], iso[b])


def test_center_generator_is_a_commutator(tower23):
    v1 = level2(tower23, {0: (1, 0), 1: (2, 0)})
    v2 = level2(tower23, {0: (0, 1), 1: (0, 2)})
    c = tower23.commutator(v1, v2)
    r = tower23.center_generator(2)
    assert r in {c, tower23.inverse(c)}
    w = c if c == r else tower23.commutator(v2, v1)
    assert w == r


@pytest.mark.parametrize("primes", [(2, 3), (3, 2), (2, 3, 2)])
def test_center_generator_central_of_order_p(primes):
    tower = Tower(TowerConfig(primes))
    rng = random.Random(1)
    for i in range(1, len(primes) + 1):
        r = tower.center_generator(i)
        assert tower.order(r) == primes[i - 1]
        assert tower.power(r, primes[i - 1]).is_identity()
        for _ in range(500 if i < 3 else 100):
            g = tower.random_element(i, 4, rng)
            assert tower.commutator(tower.embed(r, i), g).is_identity()


def test_power_and_order_basics(tower232):
    a = tower232.random_element(3, 4, 5)
    assert tower232.power(a, 0).is_identity()
    assert tower232.order(tower232.identity(3)) == 1
    assert tower232.power(a, -1) == tower232.inverse(a)
    assert tower232.commutator(a, a).is_identity()
    assert tower232.commutator(a, tower232.identity(3)).is_identity()
    assert tower232.conjugate(a, tower232.identity(3)) == a


def test_conjugate_fixes_central(tower232):
    r = tower232.center_generator(3)
    for s in range(20):
        g = tower232.random_element(3, 4, s)
        assert tower232.conjugate(r, g) == r


def test_embed_and_project(tower232):
    assert tower232.embed(tower232.identity(1), 3) == tower232.identity(3)
    assert tower232.embed(tower232.identity(1), 3).level == 3
    a = tower232.random_element(2, 4, 3)
    assert tower232.project(a, 2) == tower232.element(e1=a.exponent)
    assert tower232.project(tower232.center_generator(3), 3).is_identity()
    with pytest.raises(TowerError):
        tower232.embed(tower232.random_element(3, 4, 3), 2)
    with pytest.raises(TowerError):
        tower232.project(a, 1)


def test_in_T(tower23):
    assert tower23.in_T(tower23.center_generator(2), 2)
    assert not tower23.in_T(tower23.element(e1=1), 2)
    with pytest.raises(TowerError):
        tower23.in_T(tower23.identity(1), 1)


def test_level_vector_validate(tower23):
    assert tower23.level_vector_validate(tower23.level_vector(2, {}, 2))
    single = tower23.level_vector(2, {tower23.identity(1): (1, 0)})
    assert not tower23.level_vector_validate(single)
    y = tower23.construct_noncentral(2)
    assert tower23.level_vector_validate(y.level_vector(2))
    with pytest.raises(TowerError, match="orbit sums"):
        tower23.element(levels={2: ({tower23.identity(1): (1, 0)}, 0)})


def test_malformed_key_raises(tower23):
    bad = LevelVector(2, 3, {"junk": (1, 0)}, 0)
    with pytest.raises(TowerError, match="malformed key"):
        tower23.level_vector_validate(bad)


def test_construct_noncentral_stage2(tower23):
    y = tower23.construct_noncentral(2)
    assert tower23.order(y) == 3
    assert tower23.power(y, 3).is_identity() and not y.is_identity()
    # the key support is the identity with the generator r of R_1
    keys = {k.exponent: xy for k, xy in y.level_vector(2).pairs.items()}
    assert set(keys) == {0, 1}
    assert keys[0][1] == 0 and keys[1][1] == 0
    assert {keys[0][0], keys[1][0]} == {1, 2}
    build = enumerate_tower_stage(TowerConfig((2, 3)), 2)
    G = build.group
    yi = G.index[y]
    assert any(G.mul(yi, g) != G.mul(g, yi) for g in range(G.n))


def test_construct_noncentral_stage3(tower232):
    y = tower232.construct_noncentral(3)
    v = y.level_vector(3)
    assert len(v.pairs) == 2 and all(b == 0 for _, b in v.pairs.values())
    assert tower232.multiply(y, y).is_identity()
    assert tower232.noncommuting_partner(y) is not None
    assert len(v.pairs) <= tower232.prime(2)


def test_construct_noncentral_range(tower23):
    with pytest.raises(TowerError):
        tower23.construct_noncentral(1)


def test_stage_order_by_closure():
    # independent count: close the obvious generators under multiplication
    for primes, expected in (((2, 3), 54), ((3, 2), 96)):
        tower = Tower(TowerConfig(primes))
        x = tower.embed(tower.element(e1=1), 2)
        one = tower.identity(1)
        r = tower.element(e1=1)
        gens = [x]
        for coord in ((1, 0), (0, 1)):
            neg = (-coord[0], -coord[1])
            gens.append(tower.element(levels={2: ({one: coord, r: neg}, 0)}))
        assert len(bfs(tower, gens)) == expected


def test_random_element_deterministic(tower232):
    assert tower232.random_element(3, 4, 11) == tower232.random_element(3, 4, 11)
    assert tower232.validate(tower232.random_element(3, 4, 11))


@given(seeds, seeds, seeds)
def test_group_axioms_level3(s1, s2, s3):
    tower = Tower(TowerConfig((2, 3, 2)))
    a, b, c = (tower.random_element(3, 4, s) for s in (s1, s2, s3))
    mul = tower.multiply
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, tower.inverse(a)).is_identity()
    assert tower.inverse(mul(a, b)) == mul(tower.inverse(b), tower.inverse(a))
    assert tower.validate(mul(a, b))
    for k in (2, 3):
        assert tower.project(mul(a, b), k) == mul(tower.project(a, k), tower.project(b, k))


@given(seeds, seeds)
def test_commutator_identities(s1, s2):
    tower = Tower(TowerConfig((3, 2, 3)))
    a, b = tower.random_element(3, 4, s1), tower.random_element(3, 4, s2)
    c = tower.commutator(a, b)
    assert c == tower.multiply(tower.multiply(tower.inverse(a), tower.inverse(b)), tower.multiply(a, b))
    assert tower.inverse(c) == tower.commutator(b, a)
    assert tower.conjugate(a, b) == tower.multiply(a, c)


@given(seeds)
def test_order_is_exact(s):
    tower = Tower(TowerConfig((2, 3, 2)))
    a = tower.random_element(3, 4, s)
    n = tower.order(a)
    assert tower.power(a, n).is_identity()
    assert all(not tower.power(a, d).is_identity() for d in range(1, n) if n % d == 0)


def test_mixed_towers_rejected(tower23, tower32):
    with pytest.raises(TowerError):
        tower23.multiply(tower23.identity(1), tower32.identity(1))
