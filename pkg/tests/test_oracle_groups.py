import itertools

import numpy as np
import pytest

from soluble_tower.oracle import families
from soluble_tower.oracle.groups import (
    AutomorphismMap,
    GuardExceeded,
    OracleError,
    OracleGroup,
    SubgroupMask,
    closure,
    table_from_generators,
)


def brute_normal_subgroups(G):
    """Every subset closed under products and conjugation."""
    out = set()
    others = [e for e in range(G.n) if e != G.identity]
    for r in range(len(others) + 1):
        for subset in itertools.combinations(others, r):
            s = set(subset) | {G.identity}
            if all(G.mul(a, b) in s for a in s for b in s) and all(
                G.mul(G.mul(G.inv(g), a), g) in s for a in s for g in range(G.n)
            ):
                out.add(frozenset(s))
    return out


@pytest.mark.parametrize(
    "G, count",
    [
        (families.cyclic(2), 2),
        (families.dihedral(3), 3),
        (families.dihedral(4), 6),
        (families.abelian((2, 2, 2)), 16),
        (families.abelian((2, 4)), 8),
    ],
)
def test_normal_subgroup_lattice_matches_subset_search(G, count):
    found = {frozenset(int(e) for e in N.elements) for N in G.normal_subgroups()}
    assert found == brute_normal_subgroups(G)
    assert len(found) == count


def test_abelian_all_subgroups_normal():
    G = families.abelian((2, 2, 2))
    assert all(G.is_normal(N) for N in G.normal_subgroups())


def test_cyclic_order_two_lattice():
    G = families.cyclic(2)
    assert [len(N) for N in G.normal_subgroups()] == [1, 2]


def test_table_axioms_checked():
    with pytest.raises(OracleError):
        OracleGroup([[0, 1], [1, 1]])
    with pytest.raises(OracleError):
        OracleGroup([[0, 1, 2], [1, 0, 2], [2, 2, 0]])


def test_non_associative_latin_square_rejected():
    # a loop of order 5 that is not a group
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(OracleError, match="associative"):
        OracleGroup(table)


def test_guard():
    with pytest.raises(GuardExceeded):
        families.abelian((101, 101))


def test_center_and_derived_dihedral():
    G = families.dihedral(4)
    assert len(G.center()) == 2
    assert len(G.derived_subgroup()) == 2
    assert not G.is_abelian()
    assert families.heisenberg(3).n == 27


def test_heisenberg_is_extraspecial():
    from soluble_tower.oracle.lemmas import is_extraspecial

    assert is_extraspecial(families.heisenberg(3))
    assert is_extraspecial(families.heisenberg_central_product(2, 2))
    assert not is_extraspecial(families.dihedral(3))


def test_automorphism_checked():
    G = families.cyclic(3)
    assert AutomorphismMap([0, 2, 1], G).order == 2
    with pytest.raises(OracleError):
        AutomorphismMap([1, 0, 2], G)


def test_mask_operations():
    a = SubgroupMask([True, True, False])
    b = SubgroupMask([True, False, False])
    assert b <= a and not a <= b
    assert len(a & b) == 1 and 1 in a


def test_closure_and_generator_table():
    mul = lambda a, b: (a + b) % 6
    elems, index = closure([2, 3], mul, 0)
    assert sorted(elems) == list(range(6)) and elems[0] == 0
    table = table_from_generators(elems, index, [2, 3], mul)
    direct = np.array([[index[mul(a, b)] for b in elems] for a in elems])
    assert np.array_equal(table, direct)
    with pytest.raises(OracleError):
        table_from_generators(elems, index, [2], mul)


def test_closure_guard():
    with pytest.raises(GuardExceeded):
        closure([1], lambda a, b: a + b, 0, guard=10)
