import pytest
from hypothesis import given
from hypothesis import strategies as st

from soluble_tower.algebra import AlgebraElement, AlgebraError, Certificate, expand_triples, group_minus_one, verify_certificate
from soluble_tower.collapse import (
    CollapseGuardExceeded,
    CollapseTrace,
    HypothesisError,
    choose_uv,
    finite_index_witness,
    ideal_collapse,
    normalize_support,
    reduce_to_abelian,
    wreath_collapse,
)
from soluble_tower.config import TowerConfig
from soluble_tower.fields import Field
from soluble_tower.tower import Tower, TowerError

TOWER = Tower(TowerConfig((2, 3, 2, 3, 2)))
F3, Q = Field(3), Field(0)
X = TOWER.element(e1=1)
ONE = TOWER.identity(1)


def one_plus_x(fld=F3):
    return AlgebraElement(fld, TOWER, [(ONE, 1), (X, 1)])


@pytest.fixture(scope="module")
def run():
    return ideal_collapse(one_plus_x())


def test_choose_uv():
    cfg = TowerConfig((2, 3, 2, 3, 2))
    assert choose_uv(1, cfg, 3) == (3, 5, 2)
    assert choose_uv(1, cfg, 0) == (3, 5, 2)
    with pytest.raises(HypothesisError, match="characteristic clash"):
        choose_uv(1, cfg, 2)
    with pytest.raises(HypothesisError, match="no levels"):
        choose_uv(1, TowerConfig((2, 3, 5, 7)), 0)
    with pytest.raises(HypothesisError):
        choose_uv(2, cfg, 0)


def test_normalize_support():
    alpha = one_plus_x()
    beta, k, xs, s0 = normalize_support(alpha)
    assert beta == alpha and s0 == ONE and xs[0] == ONE
    single = AlgebraElement(Field(5), TOWER, [(X, 2)])
    beta, k, xs, s0 = normalize_support(single)
    assert beta == AlgebraElement(Field(5), TOWER, [(ONE, 2)]) and s0 == X and k == [2]


def test_reduce_trivial_support():
    alpha = AlgebraElement(F3, TOWER, [(ONE, 2)])
    beta, triples = reduce_to_abelian(alpha, 3, 2)
    assert beta == alpha and expand_triples(alpha, triples) == alpha


def test_reduce_one_plus_x():
    trace = CollapseTrace()
    alpha = one_plus_x()
    beta, triples = reduce_to_abelian(alpha, 3, 2, trace)
    z1 = trace.z_list[1]
    assert not z1.is_identity() and TOWER.order(z1) == 2
    assert z1 == TOWER.commutator(trace.y_list[1], X)
    assert beta == group_minus_one(F3, z1).scale(trace.beta0_sign)
    assert expand_triples(alpha, triples) == beta


def test_reduce_support_of_size_three():
    tower = Tower(TowerConfig((3, 2, 3, 2, 3)))
    x = tower.element(e1=1)
    x2 = tower.element(e1=2)
    fld = Field(2)
    alpha = AlgebraElement(fld, tower, [(tower.identity(1), 1), (x, 1), (x2, 1)])
    trace = CollapseTrace()
    beta, triples = reduce_to_abelian(alpha, 3, 3, trace)
    z1, z2 = trace.z_list[1], trace.z_list[2]
    assert len(beta) == 4 and not beta.is_zero()
    assert tower.multiply(z1, z2) == tower.multiply(z2, z1)
    assert len({tower.identity(1), z1, z2, tower.multiply(z1, z2)}) == 4
    assert expand_triples(alpha, triples) == beta


def test_reduce_hypotheses():
    with pytest.raises(HypothesisError, match="u = 2"):
        reduce_to_abelian(one_plus_x(), 2, 3)
    with pytest.raises(HypothesisError, match="is not q"):
        reduce_to_abelian(one_plus_x(), 3, 3)
    with pytest.raises(AlgebraError, match="normalized"):
        reduce_to_abelian(AlgebraElement(F3, TOWER, [(X, 1)]), 3, 2)


def test_wreath_collapse_unit():
    trace = CollapseTrace()
    alpha0 = AlgebraElement(Q, TOWER, [(ONE, 1)])
    z, triples = wreath_collapse(alpha0, 5, 2, trace)
    assert trace.B_order == 2 and z == trace.b
    assert len(triples) == 4
    assert expand_triples(alpha0, triples) == group_minus_one(Q, z)


def test_wreath_collapse_z1_minus_one(run):
    _, _, trace = run
    alpha0 = trace.alpha0
    t2 = CollapseTrace()
    z, triples = wreath_collapse(alpha0, 5, 2, t2)
    assert len(t2.A) <= 4 and t2.B_order <= 16
    assert t2.direct_equals_analytic and t2.final_identity
    assert TOWER.order(z) == 2
    assert expand_triples(alpha0, triples) == group_minus_one(F3, z)


def test_wreath_collapse_char_clash():
    alpha0 = AlgebraElement(Field(2), TOWER, [(ONE, 1)])
    with pytest.raises(HypothesisError, match="characteristic clash"):
        wreath_collapse(alpha0, 5, 2)


def test_wreath_collapse_l0_zero():
    alpha0 = AlgebraElement(F3, TOWER, [(X, 1)])
    with pytest.raises(HypothesisError, match="l_0"):
        wreath_collapse(alpha0, 5, 2)


def test_tampered_b_breaks_centrality(run):
    _, _, trace = run
    A, b_list = trace.A, list(trace.b_list)
    z = trace.z
    assert all(TOWER.conjugate(z, a) == z for a in A)
    # move b_1 into a factor outside the A-orbit of b_0
    g = TOWER.embed(TOWER.random_element(4, 2, 3), 4)
    b_list[1] = TOWER.conjugate(b_list[1], TOWER.multiply(g, TOWER.center_generator(4)))
    bad = TOWER.multiply(b_list[0], b_list[1])
    assert bad != z
    assert any(TOWER.conjugate(bad, a) != bad for a in A)


def test_tampered_b_rejected_by_wreath_collapse(run):
    _, _, trace = run
    b = trace.b
    # conjugating by R_4 would stay inside the factor; a level-3 center moves it out
    spread = TOWER.multiply(b, TOWER.conjugate(b, TOWER.embed(TOWER.center_generator(3), 4)))
    with pytest.raises(HypothesisError, match="regularly"):
        wreath_collapse(trace.alpha0, 5, 2, b=spread)


def test_end_to_end(run):
    z, cert, trace = run
    assert (trace.t, trace.u, trace.v, trace.q) == (1, 3, 5, 2)
    assert z.depth == 5 and TOWER.order(z) == 2
    assert verify_certificate(one_plus_x(), cert)
    assert trace.direct_equals_analytic and trace.final_identity
    assert trace.path == "direct" and trace.certificate_size == len(cert)


def test_alpha_one_over_rationals():
    alpha = AlgebraElement(Q, TOWER, [(ONE, 1)])
    z, cert, trace = ideal_collapse(alpha)
    assert len(cert) == 4 and z == trace.b
    assert verify_certificate(alpha, cert)


def test_zero_element():
    with pytest.raises(AlgebraError, match="zero element"):
        ideal_collapse(AlgebraElement.zero(F3, TOWER))


def test_perturbed_scalar_fails(run):
    _, cert, _ = run
    lam, g, h = cert.triples[0]
    bad = Certificate(cert.target, [(lam + 1, g, h)] + cert.triples[1:])
    assert not verify_certificate(one_plus_x(), bad)
    for terms in ([(ONE, 2), (X, 1)], [(X, 1)]):
        assert not verify_certificate(AlgebraElement(F3, TOWER, terms), cert)


def test_guard_and_analytic_path():
    with pytest.raises(CollapseGuardExceeded):
        ideal_collapse(one_plus_x(), guard_expansion=2)
    z, cert, trace = ideal_collapse(one_plus_x(), guard_expansion=2, allow_analytic=True)
    assert cert is None and trace.path == "analytic" and trace.final_identity
    z_direct, _, _ = ideal_collapse(one_plus_x())
    assert z == z_direct


def test_characteristic_clash_end_to_end():
    with pytest.raises(HypothesisError, match="characteristic clash"):
        ideal_collapse(one_plus_x(Field(2)))


@given(st.sampled_from([0, 3, 5, 7]), st.integers(1, 6), st.integers(0, 6), st.booleans())
def test_collapse_level_one_property(char, a, b, swap):
    fld = Field(char)
    if not fld(a):
        return
    terms = [(X, a), (ONE, b)] if swap else [(ONE, a), (X, b)]
    alpha = AlgebraElement(fld, TOWER, terms)
    if alpha.is_zero():
        return
    z, cert, trace = ideal_collapse(alpha)
    assert verify_certificate(alpha, cert)
    assert not z.is_identity() and TOWER.order(z) == 2


def test_finite_index_witness(run):
    z, _, _ = run
    w = finite_index_witness(z, 5)
    assert w.exponent != 0 and w.w is not None
    assert w.commutator == TOWER.power(TOWER.embed(TOWER.center_generator(5), 5), w.exponent)
    assert w.index_bound is None and "|G_4|" in w.index_formula


def test_finite_index_witness_central():
    tower = Tower(TowerConfig((2, 3)))
    r = tower.center_generator(2)
    w = finite_index_witness(r, 2)
    assert w.w is None and w.exponent == 1 and w.index_bound == 54


def test_finite_index_witness_rejects_non_d_v():
    with pytest.raises(TowerError):
        finite_index_witness(X, 5)
