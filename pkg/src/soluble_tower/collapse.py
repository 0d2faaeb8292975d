"""Constructive collapse of a nonzero element of K[G] to a central z with z - 1 in its ideal.

Phase 1 (:func:`reduce_to_abelian`) kills the support of alpha one element at a
time with ``beta_{s-1} = z_s beta_s - y_s^-1 beta_s y_s`` and lands in K[A] for an
elementary abelian A.  Phase 2 (:func:`wreath_collapse`) sums alpha_0 over the
conjugation action of an elementary abelian B on which A acts regularly, so
that ``H = BA`` is C_q wr A; multiplying by ``z - 1`` for the central
``z = b_0 ... b_m`` leaves a nonzero multiple of ``z - 1``.

Every step carries two-sided triples, so the final certificate is checked by a
single sparse expansion against the original input.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from . import sizes
from .algebra import (
    AlgebraElement,
    AlgebraError,
    Certificate,
    compose_triples,
    expand_triples,
    group_minus_one,
    merge_triples,
    support_min_level,
)
from .tower import TowerError

GUARD_A = 256
GUARD_EXPANSION = 1 << 20


class CollapseError(ValueError):
    """A hypothesis of the collapse failed; ``condition`` names it."""

    def __init__(self, message, condition=""):
        super().__init__(message)
        self.condition = condition


class HypothesisError(CollapseError):
    pass


class CollapseGuardExceeded(CollapseError):
    pass


@dataclass
class CollapseTrace:
    t: int = 0
    u: int = 0
    v: int = 0
    q: int = 0
    char: int = 0
    translation: object = None
    support: list = field(default_factory=list)
    k: list = field(default_factory=list)
    y: object = None
    y_list: list = field(default_factory=list)
    z_list: list = field(default_factory=list)
    conjugate_factors: list = field(default_factory=list)
    beta_supports: list = field(default_factory=list)
    beta0_sign: int = 0
    alpha0: object = None
    A: list = field(default_factory=list)
    l: list = field(default_factory=list)
    b: object = None
    b_list: list = field(default_factory=list)
    B_order: int = 0
    centralizer_orders: list = field(default_factory=list)
    z: object = None
    scale: object = None
    path: str = ""
    direct_equals_analytic: object = None
    final_identity: object = None
    certificate_size: int = 0
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def choose_uv(t, config, char):
    """Smallest u > t + 1 and smallest v > u with p_u = p_v = q != char."""
    primes = tuple(config.primes) if hasattr(config, "primes") else tuple(config)
    top = getattr(config, "max_level", len(primes))
    clash = False
    for u in range(t + 2, top + 1):
        q = primes[u - 1]
        for v in range(u + 1, top + 1):
            if primes[v - 1] != q:
                continue
            if q == char:
                clash = True
                break
            return u, v, q
    if clash:
        raise HypothesisError(
            f"characteristic clash: every repeated prime p_u = p_v with u > {t + 1} equals char K = {char}",
            "p_u = p_v != char K",
        )
    raise HypothesisError(
        f"no levels v > u > {t + 1} with p_u = p_v in primes {primes}",
        "exist v > u > t + 1 with p_u = p_v",
    )


def normalize_support(alpha):
    """Left-translate so the identity is in the support.

    Returns ``(alpha', k_list, x_list, s0)`` with ``alpha' = s0^-1 alpha``,
    ``alpha' = sum k_i x_i^-1`` and ``x_0 = 1``.
    """
    if alpha.is_zero():
        raise AlgebraError("zero element")
    tower = alpha.tower
    ident = tower.identity(1)
    if ident in alpha.terms:
        s0 = ident
        beta = alpha
    else:
        s0 = alpha.support()[0]
        beta = alpha.left(tower.inverse(s0))
    support = [ident] + [g for g in beta.support() if g != ident]
    k_list = [beta.coefficient(g) for g in support]
    x_list = [tower.inverse(g) for g in support]
    return beta, k_list, x_list, s0


def _factor_of(tower, w, level):
    """Orbit representatives of the keys of the level-``level`` datum of w."""
    v = w.level_vector(level)
    if v is None or w.depth != level:
        return frozenset()
    return frozenset(tower.orbit_rep(key, level).encode() for key in v.pairs)


def _pair_vector(w, level):
    v = w.level_vector(level)
    if v is None:
        return {}
    out = {}
    for key, (x, y) in v.pairs.items():
        ek = key.encode()
        if x:
            out[(ek, 0)] = x
        if y:
            out[(ek, 1)] = y
    return out


def _rank_mod(vectors, q):
    """Rank over F_q of sparse dict vectors."""
    pivots = {}
    rank = 0
    for vec in vectors:
        vec = {k: c % q for k, c in vec.items() if c % q}
        while vec:
            lead = min(vec)
            if lead not in pivots:
                inv = pow(vec[lead], -1, q)
                pivots[lead] = {k: c * inv % q for k, c in vec.items()}
                rank += 1
                break
            f = vec[lead]
            for k, c in pivots[lead].items():
                vec[k] = (vec.get(k, 0) - f * c) % q
                if not vec[k]:
                    del vec[k]
    return rank


def reduce_to_abelian(alpha, u, q, trace=None, check_steps=True):
    """Phase 1.  ``alpha`` must already be normalized (identity in its support).

    Returns ``(alpha0, triples)`` with ``alpha0 = sum lam * g * alpha * h``.
    """
    tower = alpha.tower
    trace = trace if trace is not None else CollapseTrace()
    fld = alpha.field
    ident = tower.identity(1)
    if ident not in alpha.terms:
        raise AlgebraError("support is not normalized: the identity is missing")
    support = [ident] + [g for g in alpha.support() if g != ident]
    k_list = [alpha.coefficient(g) for g in support]
    x_list = [tower.inverse(g) for g in support]
    n = len(support) - 1
    t = max(g.depth for g in support)
    if not u > t + 1:
        raise HypothesisError(f"u = {u} must exceed t + 1 = {t + 1}", "u > t + 1")
    if tower.prime(u) != q:
        raise HypothesisError(f"p_{u} = {tower.prime(u)} is not q = {q}", "p_u = q")
    trace.support, trace.k = support, k_list
    # X <= G_t and R_{u-1} sits at level u - 1 > t, so they meet trivially
    trace.notes.append(f"X <= G_{t} meets R_{u - 1} trivially (levels below {u - 1})")

    y = tower.construct_noncentral(u)
    trace.y = y
    # y_i = x_i y x_i^-1, i.e. y conjugated by the support element x_i^-1, so that
    # z_i = [y_i, x_i] = y_i^-1 y straddles the identity factor and the factor of x_i^-1
    y_list = [tower.conjugate(y, g) for g in support]
    z_list = [tower.commutator(yi, xi) for yi, xi in zip(y_list, x_list)]
    trace.y_list, trace.z_list = y_list, z_list

    conjugates = {}
    for i in range(n + 1):
        for j in range(n + 1):
            w = tower.conjugate(y_list[i], x_list[j])
            conjugates.setdefault(w, (i, j))
    factors = {w: _factor_of(tower, w, u) for w in conjugates}
    trace.conjugate_factors = [(ij, sorted(factors[w])) for w, ij in sorted(conjugates.items(), key=lambda kv: kv[1])]
    for w, f in factors.items():
        if len(f) != 1:
            raise HypothesisError(f"y^(x_i x_j) for {conjugates[w]} is not inside one orbit factor", "y_i^{x_j} in single factors")
    seen = {}
    for w, f in factors.items():
        (rep,) = f
        if rep in seen:
            raise HypothesisError(
                f"conjugates {seen[rep]} and {conjugates[w]} lie in the same factor E_k",
                "no two y_i^{x_j} in the same factor",
            )
        seen[rep] = conjugates[w]

    rank = _rank_mod([_pair_vector(z, u) for z in z_list[1:]], q)
    if rank != n:
        raise HypothesisError(f"<z_1..z_n> has order {q}^{rank}, expected {q}^{n}", "<z_1,...,z_n> of order q^n")

    beta = alpha
    triples = [(fld.one, ident, ident)]
    trace.beta_supports = [(n, len(beta))]
    for s in range(n, 0, -1):
        zs, ys = z_list[s], y_list[s]
        ys_inv = tower.inverse(ys)
        beta = beta.left(zs) - beta.conjugate(ys)
        triples = [(lam, tower.multiply(zs, g), h) for lam, g, h in triples] + [
            (fld.neg(lam), tower.multiply(ys_inv, g), tower.multiply(h, ys)) for lam, g, h in triples
        ]
        if check_steps and expand_triples(alpha, triples) != beta:
            raise CollapseError(f"certificate for beta_{s - 1} does not re-expand", "beta_s certificate")
        trace.beta_supports.append((s - 1, len(beta)))

    expected = AlgebraElement.monomial(fld, ident, k_list[0])
    for zs in z_list[1:]:
        expected = expected * group_minus_one(fld, zs)
    if beta == expected:
        trace.beta0_sign = 1
    elif beta == -expected:
        trace.beta0_sign = -1
    else:
        raise CollapseError("beta_0 is not +-k_0 (z_n - 1)...(z_1 - 1)", "beta_0 product form")
    if beta.is_zero() or not beta.coefficient(ident):
        raise CollapseError("beta_0 has zero identity coefficient", "k_0 != 0")
    trace.alpha0 = beta
    return beta, triples


def _enumerate_abelian(tower, gens, guard):
    ident = tower.identity(1)
    elems = [ident]
    seen = {ident}
    for g in gens:
        if g in seen:
            continue
        new = []
        power = g
        while power not in seen:
            new.append(power)
            power = tower.multiply(power, g)
        block = [tower.multiply(a, c) for c in [ident] + new for a in elems]
        for e in block:
            if e not in seen:
                seen.add(e)
                elems.append(e)
                if len(elems) > guard:
                    raise CollapseGuardExceeded(f"|A| exceeds the guard {guard}", "|A| <= guard")
    return elems


def _row_basis(vectors, q):
    """Reduced echelon basis (dense tuples) of the span of sparse dict vectors."""
    rows = []
    for vec in vectors:
        vec = {k: c % q for k, c in vec.items() if c % q}
        for lead, row in rows:
            f = vec.get(lead, 0)
            if f:
                for k, c in row.items():
                    vec[k] = (vec.get(k, 0) - f * c) % q
                vec = {k: c for k, c in vec.items() if c}
        if vec:
            lead = min(vec)
            inv = pow(vec[lead], -1, q)
            row = {k: c * inv % q for k, c in vec.items()}
            for j, (l2, r2) in enumerate(rows):
                f = r2.get(lead, 0)
                if f:
                    merged = dict(r2)
                    for k, c in row.items():
                        merged[k] = (merged.get(k, 0) - f * c) % q
                    rows[j] = (l2, {k: c for k, c in merged.items() if c})
            rows.append((lead, row))
    return [row for _, row in rows]


def _span(basis, q, dim):
    """Every vector of the span, as dense exponent tuples."""
    for coeffs in itertools.product(range(q), repeat=len(basis)):
        out = [0] * dim
        for c, row in zip(coeffs, basis):
            if c:
                for k, v in row.items():
                    out[k] = (out[k] + c * v) % q
        yield tuple(out)


def _span_contains(vectors, target, q):
    return _rank_mod(vectors, q) == _rank_mod(vectors + [target], q)


def wreath_collapse(alpha0, v, q, trace=None, guard_a=GUARD_A, guard_expansion=GUARD_EXPANSION, full_A=None, allow_analytic=False, b=None):
    """Phase 2.  Returns ``(z, triples)`` with ``z - 1 = sum lam * g * alpha0 * h``.

    ``full_A`` (a list of generators) overrides A = <supp alpha0>.  When |B|
    exceeds ``guard_expansion`` only the analytic checks run and ``triples``
    is ``None`` (unless ``allow_analytic`` is false, which raises).
    """
    tower = alpha0.tower
    fld = alpha0.field
    trace = trace if trace is not None else CollapseTrace()
    ident = tower.identity(1)
    if fld.char == q:
        raise HypothesisError(f"characteristic clash: char K = {fld.char} = q", "char K != q")
    if tower.prime(v) != q:
        raise HypothesisError(f"p_{v} = {tower.prime(v)} is not q = {q}", "p_v = q")
    l0 = alpha0.coefficient(ident)
    if not l0:
        raise HypothesisError("identity coefficient l_0 of alpha_0 is zero", "l_0 != 0")
    if any(g.depth >= v for g in alpha0.terms):
        raise HypothesisError(f"support of alpha_0 must lie below level {v}", "A <= G_{v-1}")

    gens = full_A if full_A is not None else [g for g in alpha0.support() if g != ident]
    A = _enumerate_abelian(tower, gens, guard_a)
    A_index = {a: i for i, a in enumerate(A)}
    if not all(tower.multiply(g, h) == tower.multiply(h, g) for g in gens for h in gens):
        raise HypothesisError("A is not abelian", "A abelian")
    if any(g not in A_index for g in alpha0.terms):
        raise HypothesisError("supp alpha_0 is not inside A", "alpha_0 in K[A]")
    r = tower.embed(tower.center_generator(v - 1), v - 1)
    R = [tower.power(r, c) for c in range(1, tower.prime(v - 1))]
    if any(x in A_index for x in R):
        raise HypothesisError(f"A meets R_{v - 1} nontrivially", "A cap R_{v-1} = 1")
    trace.A = A
    trace.l = [alpha0.coefficient(tower.inverse(a)) for a in A]

    b = tower.construct_noncentral(v) if b is None else b
    b_list = [tower.conjugate(b, a) for a in A]
    trace.b, trace.b_list = b, b_list
    reps = [_factor_of(tower, bi, v) for bi in b_list]
    if any(len(f) != 1 for f in reps) or len(set(reps)) != len(reps):
        raise HypothesisError("A does not permute the level-v orbit factors regularly", "A regular on factors")

    m1 = len(A)
    B_order = q**m1
    trace.B_order = B_order
    z = ident
    for bi in b_list:
        z = tower.multiply(z, bi)
    trace.z = z
    if any(tower.conjugate(z, a) != z for a in gens) or tower.order(z) != q or z.is_identity():
        raise CollapseError("z = b_0...b_m is not a central element of order q in H", "z generates Z(H)")

    # B = F_q^A via b_j -> e_j; a_i acts by e_j -> e_{j * a_i}
    perm = [[A_index[tower.multiply(a, ai)] for a in A] for ai in A]
    cent_orders = []
    image_bases = [[]]
    analytic_ok = True
    z_vec = {j: 1 for j in range(m1)}
    for i in range(1, m1):
        comm_vecs = []
        for j in range(m1):
            vec = {perm[i][j]: 1}
            vec[j] = (vec.get(j, 0) - 1) % q
            comm_vecs.append({k: c for k, c in vec.items() if c})
        basis = _row_basis(comm_vecs, q)
        image_bases.append(basis)
        cent_orders.append(q ** (m1 - len(basis)))
        if not _span_contains(comm_vecs, z_vec, q):
            analytic_ok = False
    trace.centralizer_orders = [B_order] + cent_orders
    scale_raw = fld.mul(l0, fld(B_order))
    if not scale_raw:
        raise HypothesisError("l_0 |B| vanishes in K", "char K != q")
    trace.scale = fld.inv(scale_raw)

    if B_order > guard_expansion:
        trace.path = "analytic"
        trace.final_identity = analytic_ok
        trace.notes.append("|B| beyond the expansion guard: z in [B, a_i] for i > 0 checked by linear algebra")
        if not allow_analytic:
            raise CollapseGuardExceeded(f"|B| = {B_order} exceeds the expansion guard {guard_expansion}", "|B| <= guard")
        if not analytic_ok:
            raise CollapseError("z is not in every [B, a_i]", "(z - 1) beta = l_0 |B| (z - 1)")
        return z, None

    trace.path = "direct"
    B = {}
    for exps in itertools.product(range(q), repeat=m1):
        e = ident
        for bi, c in zip(b_list, exps):
            if c:
                e = tower.multiply(e, tower.power(bi, c))
        B[exps] = e
    if len(set(B.values())) != B_order:
        raise CollapseError(f"|B| = {len(set(B.values()))}, expected {B_order}", "B elementary abelian of order q^|A|")

    # direct: sum over b in B of b^-1 alpha0 b
    beta = AlgebraElement(fld, tower)
    for e in B.values():
        for g, c in alpha0.terms.items():
            beta._accumulate(tower.conjugate(g, e), c)
    # analytic: sum_i l_i |C_B(a_i)| hat(B_i) a_i^-1, with B_i = [B, a_i] the image
    # of e -> e (P_{a_i} - 1) in exponent coordinates
    analytic = AlgebraElement(fld, tower)
    for i, a in enumerate(A):
        li = trace.l[i]
        if not li:
            continue
        weight = fld.mul(li, fld(trace.centralizer_orders[i]))
        a_inv = tower.inverse(a)
        for w in _span(image_bases[i], q, m1):
            analytic._accumulate(tower.multiply(B[w], a_inv), weight)
    trace.direct_equals_analytic = analytic_ok and analytic == beta
    if not trace.direct_equals_analytic:
        raise CollapseError("direct and analytic beta disagree", "direct beta = analytic beta")
    zm1 = group_minus_one(fld, z)
    trace.final_identity = zm1 * beta == zm1.scale(scale_raw)
    if not trace.final_identity:
        raise CollapseError("(z - 1) beta != l_0 |B| (z - 1)", "(z - 1) beta = l_0 |B| (z - 1)")

    c = trace.scale
    triples = []
    for e in B.values():
        e_inv = tower.inverse(e)
        triples.append((c, tower.multiply(z, e_inv), e))
        triples.append((fld.neg(c), e_inv, e))
    return z, triples


def ideal_collapse(alpha, config=None, guard_a=GUARD_A, guard_expansion=GUARD_EXPANSION, allow_analytic=False, check_steps=True):
    """End-to-end: normalize, choose levels, phase 1, phase 2, certificate."""
    if alpha.is_zero():
        raise AlgebraError("zero element")
    tower = alpha.tower
    config = config if config is not None else tower.config
    fld = alpha.field
    trace = CollapseTrace(char=fld.char)
    clock = time.perf_counter()

    alpha_n, _, _, s0 = normalize_support(alpha)
    trace.translation = s0
    trace.t = support_min_level(alpha_n)
    trace.u, trace.v, trace.q = choose_uv(trace.t, config, fld.char)
    trace.timings["setup"] = time.perf_counter() - clock

    clock = time.perf_counter()
    alpha0, tri0 = reduce_to_abelian(alpha_n, trace.u, trace.q, trace, check_steps)
    trace.timings["reduce_to_abelian"] = time.perf_counter() - clock

    clock = time.perf_counter()
    z, tri1 = wreath_collapse(alpha0, trace.v, trace.q, trace, guard_a, guard_expansion, allow_analytic=allow_analytic)
    trace.timings["wreath_collapse"] = time.perf_counter() - clock

    if tri1 is None:
        return z, None, trace
    s0_inv = tower.inverse(s0)
    tri_n = [(lam, tower.multiply(g, s0_inv), h) for lam, g, h in tri0]
    triples = merge_triples(fld, compose_triples(fld, tri1, tri_n))
    cert = Certificate(z, triples)
    trace.certificate_size = len(triples)
    return z, cert, trace


@dataclass
class FiniteIndexWitness:
    level: int
    z: object
    w: object
    commutator: object
    exponent: int
    index_bound: int | None
    index_formula: str


def finite_index_witness(z, v):
    """w in D_v with [z, w] a nontrivial power of center_generator(v).

    The normal closure of <z> then contains R_v; the index bound reported is
    |G_v|.
    """
    tower = z.tower
    if z.is_identity() or z.depth != v or not tower.in_T(z, v):
        raise TowerError(f"z must be a nontrivial element of D_{v}")
    primes = tower.primes
    bound = sizes.group_order(primes, v)
    formula = sizes.order_formula(primes, v)
    center = tower.embed(tower.center_generator(v), v)
    if tower.is_central_in_level(z):
        c = z.level_vector(v).center
        return FiniteIndexWitness(v, z, None, z, c, bound, formula)
    w = tower.noncommuting_partner(z)
    if w is None:
        raise CollapseError("z commutes with the whole generator sweep", "z non-central in D_v")
    comm = tower.commutator(z, w)
    if not tower.is_central_in_level(comm) or comm.depth != v:
        raise CollapseError("[z, w] is not a power of center_generator(v)", "[z, w] in R_v")
    c = comm.level_vector(v).center
    if tower.power(center, c) != comm:
        raise CollapseError("[z, w] is not center_generator(v)^c", "[z, w] in R_v")
    return FiniteIndexWitness(v, z, w, comm, c, bound, formula)
