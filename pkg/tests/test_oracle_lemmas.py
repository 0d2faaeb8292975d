import pytest

from soluble_tower.oracle import families
from soluble_tower.oracle.groups import PreconditionError
from soluble_tower.oracle.lemmas import (
    check_coprime_identities,
    check_elem,
    check_extraelem,
    check_gran,
    check_zuzu,
    is_metabelian,
)


def plain_commutator_with(G, alpha):
    """[G, alpha] by a pure-python closure of the elements g^-1 g^alpha."""
    gens = {G.mul(G.inv(g), int(alpha.perm[g])) for g in range(G.n)}
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def test_zuzu_dihedral_eight():
    G = families.dihedral(4)
    B = G.generate([int(G.index_of((1, 0)))])
    a = int(G.index_of((0, 1)))
    res = check_zuzu(G, B, a)
    assert res and res.data["|B|"] == 4 and res.data["|[B,a]|"] == 2


def test_zuzu_trivial_cases():
    G = families.dihedral(4)
    B = G.generate([int(G.index_of((1, 0)))])
    central = int(G.center().elements[1])
    assert check_zuzu(G, B, central).data["|[B,a]|"] == 1
    inside = int(G.index_of((1, 0)))
    assert check_zuzu(G, B, inside).data["|[B,a]|"] == 1


def test_zuzu_preconditions():
    G = families.dihedral(4)
    with pytest.raises(PreconditionError, match="not abelian"):
        check_zuzu(G, G.whole(), 0)
    small = G.generate([int(G.index_of((0, 1)))])
    with pytest.raises(PreconditionError, match="G'"):
        check_zuzu(G, small, 0)
    assert is_metabelian(families.heisenberg(3))


def test_coprime_trivial_group_of_automorphisms():
    G = families.heisenberg(3)
    rep = check_coprime_identities(G, [families.identity_automorphism(G)])
    assert rep.passed


def test_coprime_cyclic_inversion():
    G = families.cyclic(3)
    inv = families.scale_first(G, 2, 3)
    rep = check_coprime_identities(G, [inv])
    assert rep.passed
    assert len(G.commutator_with(G.whole(), [inv])) == 3
    assert len(G.fixed_points([inv])) == 1


def test_coprime_extraspecial_instance():
    G = families.heisenberg_central_product(3, 2)
    alpha = families.factor_shift(G, 2, 3)
    rep = check_coprime_identities(G, [alpha])
    assert rep.passed
    assert rep.counts()["N/A"] == 1  # item (3) needs G abelian


def test_coprime_rejects_non_coprime():
    G = families.abelian((2, 2))
    swap = families.linear_automorphism(G, [[0, 1], [1, 0]], G.radices)
    with pytest.raises(PreconditionError):
        check_coprime_identities(G, [swap])


def test_gran_identity_and_swap():
    G = families.heisenberg_central_product(3, 2)
    res = check_gran(G, families.identity_automorphism(G))
    assert res and res.data["|[Z,a]|"] == 1
    swap = families.factor_shift(G, 2, 3)
    assert check_gran(G, swap)


def test_gran_preconditions():
    G = families.abelian((2, 2))
    swap = families.linear_automorphism(G, [[0, 1], [1, 0]], G.radices)
    with pytest.raises(PreconditionError):
        check_gran(G, swap)
    H = families.heisenberg(5)
    # x -> 2x, y -> 2y scales the center by 4, so G' is not centralised
    with pytest.raises(PreconditionError, match="centralised"):
        check_gran(H, families.similitude(H, 1, 5, 2, 2))


@pytest.mark.parametrize("p, m, base, index", [(3, 2, 3, 3), (2, 3, 2, 2), (5, 1, 5, 5), (2, 3, 4, 4)])
def test_elem(p, m, base, index):
    res = check_elem(p, m, base)
    assert res and res.data["index"] == index
    if m == 1:
        assert res.data["|[G,a]|"] == 1


def test_elem_cyclic_summand():
    res = check_elem(2, 3, 4, summand="cyclic")
    assert res and res.data["|G|"] == 64


def test_elem_preconditions():
    with pytest.raises(PreconditionError):
        check_elem(2, 2, 2)
    with pytest.raises(PreconditionError):
        check_elem(2, 0, 2)


def test_extraelem_examples():
    res = check_extraelem(3, 2)
    assert res and res.data["|G|"] == 243 and res.data["|[G,a]|"] == 27
    res = check_extraelem(2, 3)
    assert res and res.data["|G|"] == 2**7 and res.data["|[G,a]|"] == 2**5


def test_extraelem_against_plain_closure():
    G = families.heisenberg_central_product(3, 2)
    alpha = families.factor_shift(G, 2, 3)
    assert len(plain_commutator_with(G, alpha)) == 27
    G = families.heisenberg_central_product(2, 3)
    alpha = families.factor_shift(G, 3, 2)
    assert len(plain_commutator_with(G, alpha)) == 32


def test_extraelem_rejects_p3_m3():
    # the shift has order 3 on a 3-group, so it is not a coprime automorphism
    with pytest.raises(PreconditionError, match="not coprime"):
        check_extraelem(3, 3)


def test_extraelem_rejects_single_factor():
    with pytest.raises(PreconditionError):
        check_extraelem(3, 1)
