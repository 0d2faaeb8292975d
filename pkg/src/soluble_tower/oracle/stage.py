"""Enumerable stages G_1, G_2 built two independent ways and compared.

Route A closes tower-core generators under tower-core multiplication.
Route B follows the definitions literally: wreath-product tuples M ≀ G_{i-1},
the quotient by [B', H] found by linear algebra on the center coordinates,
D_i as the subgroup generated by all commutators [b, r], and G_i = D_i G_{i-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import sizes
from ..tower import Tower
from . import families
from .groups import (
    ENUMERATION_GUARD,
    ConstructionError,
    GuardExceeded,
    OracleError,
    OracleGroup,
    SubgroupMask,
    closure,
    table_from_generators,
)
from .lemmas import is_extraspecial
from .report import Report


def _tower_generators(tower, i):
    gens = [tower.embed(tower.center_generator(1), i)]
    if i >= 2:
        p1 = tower.primes[0]
        zero = tower.identity(1)
        for j in range(1, p1):
            key = tower.element(j, level=1)
            for coord in ((1, 0), (0, 1)):
                neg = (-coord[0], -coord[1])
                gens.append(tower.element(levels={2: ({zero: coord, key: neg}, 0)}, level=i))
    return gens


def build_from_tower(tower, i, guard=ENUMERATION_GUARD):
    """Route A: breadth-first closure of generators under tower multiplication."""
    gens = _tower_generators(tower, i)
    ident = tower.identity(i)
    elements, index = closure(gens, tower.multiply, ident, guard=guard)
    table = table_from_generators(elements, index, gens, tower.multiply)
    gen_idx = [index[g] for g in gens]
    group = OracleGroup(table, elements, f"G_{i}{tower.primes[:i]} (tower)", gen_idx)
    group.tower = tower
    group.index = index
    return group, gens


def _nullspace_mod_p(rows, ncols, p):
    """Basis of {v : r . v = 0 for every row r} over F_p."""
    mat = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, p)
        mat[rank] = [v * inv % p for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] % p:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-mat[r][fc]) % p
        basis.append(tuple(v))
    return rank, basis


class WreathQuotient:
    """(M ≀ K) / [B', H] with M extra-special of order p^3, K an OracleGroup.

    Wreath elements are ``(xs, ys, cs, g)`` with one Heisenberg triple per
    element of K and ``g`` a K index; K acts by ``(g.f)(j) = f(j g)``.
    Quotient elements replace ``cs`` by its image under a functional whose
    kernel is [B', H].
    """

    def __init__(self, K, p):
        self.K = K
        self.p = p
        self.n = K.n
        self.e = K.identity
        self.functional = None
        self.lift = None

    def wreath_mul(self, a, b):
        p, kt = self.p, self.K.table
        xs, ys, cs, g = a
        xs2, ys2, cs2, g2 = b
        perm = kt[:, g]
        tx = [xs2[perm[j]] for j in range(self.n)]
        ty = [ys2[perm[j]] for j in range(self.n)]
        tc = [cs2[perm[j]] for j in range(self.n)]
        nx = tuple((xs[j] + tx[j]) % p for j in range(self.n))
        ny = tuple((ys[j] + ty[j]) % p for j in range(self.n))
        nc = tuple((cs[j] + tc[j] + ys[j] * tx[j]) % p for j in range(self.n))
        return (nx, ny, nc, int(kt[g, g2]))

    def wreath_inv(self, a):
        # inverse by brute force over the Heisenberg inverse then K inverse
        p = self.p
        xs, ys, cs, g = a
        base = (
            tuple(-x % p for x in xs),
            tuple(-y % p for y in ys),
            tuple((x * y - c) % p for x, y, c in zip(xs, ys, cs)),
            self.e,
        )
        ginv = (self.zero_vec(), self.zero_vec(), self.zero_vec(), int(self.K.inverse[g]))
        return self.wreath_mul(ginv, base)

    def zero_vec(self):
        return (0,) * self.n

    def wreath_commutator(self, a, b):
        inv = self.wreath_inv
        return self.wreath_mul(self.wreath_mul(inv(a), inv(b)), self.wreath_mul(a, b))

    def derive_quotient(self, h_elements):
        """Compute [B', H] from commutators and fix the quotient functional."""
        p, n = self.p, self.n
        z = self.zero_vec()
        centers = []
        for k in range(n):
            for c in range(1, p):
                cs = tuple(c if j == k else 0 for j in range(n))
                centers.append((z, z, cs, self.e))
        comm_vectors = set()
        for b in centers:
            for h in h_elements:
                xs, ys, cs, g = self.wreath_commutator(b, h)
                if any(xs) or any(ys) or g != self.e:
                    raise ConstructionError("[B', H] left the center of B")
                comm_vectors.add(cs)
        rank, null = _nullspace_mod_p(sorted(comm_vectors), n, p)
        if len(null) != 1:
            raise ConstructionError(f"[B', H] has index p^{len(null)} in B', expected p")
        lam = null[0]
        lead = next(v for v in lam if v)
        inv = pow(lead, -1, p)
        self.functional = tuple(v * inv % p for v in lam)
        k = next(j for j, v in enumerate(self.functional) if v)
        w = [0] * n
        w[k] = pow(self.functional[k], -1, p)
        self.lift = tuple(w)
        return {"rank([B',H])": rank, "index": p ** len(null)}

    def project(self, a):
        xs, ys, cs, g = a
        return (xs, ys, sum(l * c for l, c in zip(self.functional, cs)) % self.p, g)

    def lift_elem(self, q):
        xs, ys, cbar, g = q
        return (xs, ys, tuple(cbar * w % self.p for w in self.lift), g)

    def mul(self, a, b):
        return self.project(self.wreath_mul(self.lift_elem(a), self.lift_elem(b)))

    def inv(self, a):
        return self.project(self.wreath_inv(self.lift_elem(a)))

    def commutator(self, a, b):
        return self.project(self.wreath_commutator(self.lift_elem(a), self.lift_elem(b)))

    def identity(self):
        z = self.zero_vec()
        return (z, z, 0, self.e)


def _b_quotient_elements(wq):
    """All of B_i = B / [B', H], as quotient tuples."""
    p, n = wq.p, wq.n
    coords = families.all_tuples((p,) * (2 * n + 1))
    out = []
    for row in coords:
        out.append((tuple(int(v) for v in row[:n]), tuple(int(v) for v in row[n : 2 * n]), int(row[2 * n]), wq.e))
    return out


def _b_generators(wq):
    z = wq.zero_vec()
    out = []
    for j in range(wq.n):
        unit = tuple(1 if t == j else 0 for t in range(wq.n))
        out += [(unit, z, 0, wq.e), (z, unit, 0, wq.e)]
    return out


def subgroup_closure(candidates, mul, identity, conjugators=(), inv=None, guard=ENUMERATION_GUARD):
    """Subgroup generated by ``candidates`` (normal closure if ``conjugators``).

    Returns an irredundant generator list and the element set; only
    candidates outside the current subgroup trigger a re-closure.
    """
    gens, members = [], {identity}

    def add(c):
        nonlocal members
        if c in members:
            return False
        gens.append(c)
        members = set(closure(gens, mul, identity, guard=guard)[0])
        return True

    for c in candidates:
        add(c)
    changed = bool(conjugators)
    while changed:
        changed = False
        for g in list(gens):
            for t in conjugators:
                if add(mul(mul(inv(t), g), t)):
                    changed = True
    return gens, members


@dataclass
class StageBuild:
    level: int
    tower: Tower
    group: OracleGroup
    definition: OracleGroup | None
    iso: np.ndarray | None
    generators: list
    details: dict = field(default_factory=dict)
    factor_masks: list = field(default_factory=list)


def build_from_definition(tower, i, guard=ENUMERATION_GUARD):
    """Route B for i = 2 (and the trivial i = 1)."""
    p1 = tower.primes[0]
    K = families.cyclic(p1)
    if i == 1:
        return K, {}, None
    if i != 2:
        raise GuardExceeded("route B is only implemented for i <= 2")
    p = tower.prime(2)
    wq = WreathQuotient(K, p)
    n = K.n
    # H is generated by K and B; [b', fg] = [b', g] for b' central in B, but
    # the commutators with the B generators are included to show they vanish.
    z = wq.zero_vec()
    h_elements = [(z, z, z, g) for g in range(n)]
    for j in range(n):
        unit = tuple(1 if t == j else 0 for t in range(n))
        h_elements += [(unit, z, z, wq.e), (z, unit, z, wq.e)]
    details = wq.derive_quotient(h_elements)

    R = K.minimal_normal_subgroups()
    if len(R) != 1:
        raise ConstructionError("G_1 must have a unique minimal normal subgroup")
    r_elems = [int(g) for g in R[0].elements]
    ident = wq.identity()
    r_quot = [(z, z, 0, r) for r in r_elems]
    b_gens = _b_generators(wq)
    if p ** (2 * n + 1) <= guard:
        # literal: every commutator [b, r] with b in B_2, r in R_1
        comms = sorted({wq.commutator(b, r) for b in _b_quotient_elements(wq) for r in r_quot})
        d_gens, d_set = subgroup_closure(comms, wq.mul, ident, guard=guard)
        details["D_2 route"] = "all [b, r]"
    else:
        # [X, Y] is the normal closure in <X, Y> of commutators of generators
        comms = sorted({wq.commutator(b, r) for b in b_gens for r in r_quot})
        d_gens, d_set = subgroup_closure(comms, wq.mul, ident, conjugators=b_gens + r_quot, inv=wq.inv, guard=guard)
        details["D_2 route"] = "normal closure of generator commutators"
    gens = d_gens + [(z, z, 0, g) for g in K.generating_set()]
    elements, index = closure(gens, wq.mul, ident, guard=guard)
    table = table_from_generators(elements, index, gens, wq.mul)
    group = OracleGroup(table, elements, f"G_2{tower.primes[:2]} (definition)")
    details.update({"|D_2|": len(d_set), "functional": wq.functional})
    group.wq = wq
    group.d_mask = SubgroupMask(group.mask(index[d] for d in d_set))
    group.index = index
    return group, details, wq


def _definition_images(tower, gens, wq, def_group):
    z = wq.zero_vec()
    images = []
    for g in gens:
        if g.depth == 1:
            images.append(def_group.index[(z, z, 0, g.exponent)])
            continue
        v = g.level_vector(2)
        xs, ys = [0] * wq.n, [0] * wq.n
        for key, (x, y) in v.pairs.items():
            xs[key.exponent], ys[key.exponent] = x, y
        images.append(def_group.index[(tuple(xs), tuple(ys), v.center, wq.e)])
    return images


def match_by_generators(A, gens_a, B, imgs_b):
    """Extend generator images to a map A -> B by BFS; ``None`` if ill-defined."""
    iso = -np.ones(A.n, dtype=np.int64)
    iso[A.identity] = B.identity
    frontier = [A.identity]
    gidx = A.generators
    while frontier:
        nxt = []
        for x in frontier:
            for ga, gb in zip(gidx, imgs_b):
                y = A.table[x, ga]
                img = B.table[iso[x], gb]
                if iso[y] < 0:
                    iso[y] = img
                    nxt.append(y)
                elif iso[y] != img:
                    return None
        frontier = nxt
    return iso


def enumerate_tower_stage(config, i, guard=ENUMERATION_GUARD):
    """Build G_i both ways (i <= 2) and match them by generator correspondence."""
    tower = config if isinstance(config, Tower) else Tower(config)
    if not 1 <= i <= min(2, tower.max_level):
        raise GuardExceeded(f"stage {i} is not enumerable (only i <= 2)")
    order = sizes.group_order(tower.primes, i)
    if order is None or order > guard:
        raise GuardExceeded(f"|G_{i}| = {order} exceeds the guard {guard}")
    group, gens = build_from_tower(tower, i, guard)
    definition, details, wq = build_from_definition(tower, i, guard)
    if i == 1:
        iso = match_by_generators(group, gens, definition, [1 % definition.n])
    else:
        iso = match_by_generators(group, gens, definition, _definition_images(tower, gens, wq, definition))
    if iso is None or definition.n != group.n or sorted(iso.tolist()) != list(range(group.n)):
        raise ConstructionError(f"the two constructions of G_{i} do not match")
    build = StageBuild(i, tower, group, definition, iso, gens, details)
    if i == 2:
        build.factor_masks = orbit_factors(build)
    return build


def orbit_factors(build):
    """E_l = [prod_{j in O_l} A_j, R_1] for each R_1-orbit O_l, inside route B."""
    D, wq = build.definition, build.definition.wq
    K = wq.K
    R = K.minimal_normal_subgroups()[0]
    r_elems = [int(g) for g in R.elements]
    n, p = wq.n, wq.p
    seen, orbits = set(), []
    for j in range(n):
        if j in seen:
            continue
        orb = sorted({int(K.table[j, r]) for r in r_elems})
        seen.update(orb)
        orbits.append(orb)
    masks = []
    z = wq.zero_vec()
    for orb in orbits:
        r_quot = [(z, z, 0, r) for r in r_elems]
        if p ** (2 * len(orb) + 1) <= ENUMERATION_GUARD:
            comms = set()
            for row in families.all_tuples((p,) * (2 * len(orb) + 1)):
                xs, ys = [0] * n, [0] * n
                for t, j in enumerate(orb):
                    xs[j], ys[j] = int(row[t]), int(row[len(orb) + t])
                b = (tuple(xs), tuple(ys), int(row[-1]), wq.e)
                comms.update(wq.commutator(b, r) for r in r_quot)
            members = comms
        else:
            p_gens = [g for g in _b_generators(wq) if any(g[0][j] or g[1][j] for j in orb)]
            comms = sorted({wq.commutator(b, r) for b in p_gens for r in r_quot})
            _, members = subgroup_closure(comms, wq.mul, wq.identity(), p_gens + r_quot, wq.inv)
        masks.append(D.generate(sorted(D.index[c] for c in members)))
    return masks


EXHAUSTIVE_PRODUCTS = 10**5


def crosscheck_stage(config, i, guard=ENUMERATION_GUARD, exhaustive_limit=EXHAUSTIVE_PRODUCTS, seed=0):
    """Product and order comparison of the two constructions.

    When ``|G_i|^2`` is within ``exhaustive_limit`` every product is recomputed
    by tower multiplication and compared with route B; otherwise a seeded
    sample of that many pairs is used (and the report says so).
    """
    report = Report(f"crosscheck of stage {i}")
    try:
        build = enumerate_tower_stage(config, i, guard)
    except (OracleError, ValueError) as exc:
        report.check(f"stage {i} built two ways", False, str(exc))
        return report
    A, B, iso = build.group, build.definition, build.iso
    tower = build.tower
    n = A.n
    report.check(f"|G_{i}| agrees", A.n == B.n, f"{A.n} vs {B.n}")
    if n * n <= exhaustive_limit:
        left = np.repeat(np.arange(n), n)
        right = np.tile(np.arange(n), n)
        claim = f"all {n}x{n} products agree under the generator matching"
    else:
        rng = np.random.default_rng(seed)
        left = rng.integers(0, n, exhaustive_limit)
        right = rng.integers(0, n, exhaustive_limit)
        claim = f"{exhaustive_limit} sampled products agree under the generator matching"
    index = {a: k for k, a in enumerate(A.elements)}
    direct = np.array([index[tower.multiply(A.elements[a], A.elements[b])] for a, b in zip(left, right)])
    agree = bool((iso[direct] == B.table[iso[left], iso[right]]).all())
    agree = agree and bool((A.table[left, right] == direct).all())
    report.check(claim, agree)
    tower_orders = np.array([tower.order(a) for a in A.elements])
    report.check("element orders agree", bool((tower_orders == B.element_orders()[iso]).all()))
    if i == 2:
        d_tower = SubgroupMask(np.array([tower.in_T(a, 2) for a in A.elements]))
        d_def = B.d_mask
        report.check(
            "D_2 = [B_2, R_1] (route B) matches the orbit-sum-zero vectors (route A)",
            SubgroupMask(B.d_mask.mask[iso]) == d_tower,
            f"|D_2| = {len(d_def)}",
        )
        report.check("[B', G_1] has index p_2 in B'", build.details.get("index") == tower.prime(2))
        facs = build.factor_masks
        report.check("orbit factors E_l are extra-special", all(is_extraspecial(B, E) for E in facs), f"{len(facs)} factor(s)")
        commute = all(
            bool((B.table[np.ix_(E.elements, F.elements)] == B.table[np.ix_(F.elements, E.elements)].T).all())
            for a, E in enumerate(facs)
            for F in facs[a + 1 :]
        )
        report.check("distinct orbit factors commute", commute)
        joined = B.generate(np.concatenate([E.elements for E in facs]))
        report.check("D_2 is the central product of its orbit factors", joined == d_def)
    return report


def normal_subgroups(G):
    """Complete list of normal subgroups, sorted by order."""
    if G.n > ENUMERATION_GUARD:
        raise GuardExceeded(f"|G| = {G.n} exceeds the guard")
    return G.normal_subgroups()


def unique_minimal_normal(G, prime=None, normals=None):
    """The unique minimal normal subgroup R; it must be central of prime order."""
    normals = normal_subgroups(G) if normals is None else normals
    minimal = G.minimal_normal_subgroups(normals)
    if len(minimal) != 1:
        raise ConstructionError(f"{len(minimal)} minimal normal subgroups, expected one")
    R = minimal[0]
    if not R <= G.center():
        raise ConstructionError("the minimal normal subgroup is not central")
    order = len(R)
    if prime is not None and order != prime:
        raise ConstructionError(f"|R| = {order}, expected {prime}")
    if order < 2 or any(order % d == 0 for d in range(2, int(order**0.5) + 1)):
        raise ConstructionError(f"|R| = {order} is not prime")
    return R


def _level_mask(G, pred):
    return SubgroupMask(np.array([bool(pred(a)) for a in G.elements]))


def verify_lala(G, i, k, report=None):
    """T_ik normal, complemented by G_{k-1}, and [T_ik, R_{k-1}] = T_ik.

    ``G`` is the tower-side stage group (its element handles are tower
    elements), as returned in ``enumerate_tower_stage(...).group``.
    """
    report = report if report is not None else Report(f"T_({i},{k}) structure in G_{i}")
    if i < 2:
        report.skip(f"claims for i={i}", "not applicable: G_1 has no T_k")
        return report
    if not 2 <= k <= i:
        raise ValueError(f"need 2 <= k <= i, got i={i}, k={k}")
    tower = G.tower
    T = _level_mask(G, lambda a: tower.in_T(a, k))
    C = _level_mask(G, lambda a: a.depth <= k - 1)
    report.check(f"T_{i}{k} is a normal subgroup", G.is_subgroup(T) and G.is_normal(T), f"|T| = {len(T)}")
    complement = (
        G.is_subgroup(C)
        and len(T & C) == 1
        and G.product_set(T, C) == G.whole()
    )
    report.check(f"T_{i}{k} is complemented by G_{k - 1}", complement, f"|G_{k - 1}| = {len(C)}")
    kernel = _level_mask(G, lambda a: tower.project(a, k).is_identity())
    report.check(f"kernel of the projection to G_{k - 1} is T_{i}{k}", kernel == T)
    r_gen = tower.embed(tower.center_generator(k - 1), i)
    R = G.generate([G.index[r_gen]])
    TR = G.commutator_subgroup(T, R)
    report.check(f"[T_{i}{k}, R_{k - 1}] = T_{i}{k}", TR == T, f"|R_{k - 1}| = {len(R)}")
    return report


def stage_lattice_report(config, i=2, report=None):
    """Lattice facts at stage i: sizes, unique central minimal normal R_i = D_i', T_k claims."""
    build = enumerate_tower_stage(config, i)
    G, tower = build.group, build.tower
    report = report if report is not None else Report(f"stage {i} lattice for primes {tower.primes[:i]}")
    expected = sizes.group_order(tower.primes, i)
    report.check(f"|G_{i}| = {expected}", G.n == expected, f"enumerated {G.n}")
    normals = normal_subgroups(G)
    try:
        R = unique_minimal_normal(G, tower.prime(i), normals)
    except ConstructionError as exc:
        report.check("unique minimal normal subgroup", False, str(exc))
        return report, build
    report.check("unique minimal normal subgroup, central, of order p_i", True, f"|R| = {len(R)}, {len(normals)} normal subgroups")
    report.check(
        "every nontrivial normal subgroup contains R_i",
        all(R <= N for N in normals if len(N) > 1),
    )
    r_gen = G.index[tower.embed(tower.center_generator(i), i)]
    report.check("R_i is generated by center_generator(i)", G.generate([r_gen]) == R)
    if i >= 2:
        D = _level_mask(G, lambda a: tower.in_T(a, i))
        report.check(f"|D_{i}| = {tower.prime(i) ** sizes.d_dimension(tower.primes, i)}", len(D) == tower.prime(i) ** sizes.d_dimension(tower.primes, i), f"{len(D)}")
        report.check(f"D_{i} is extra-special", is_extraspecial(G, D))
        report.check(f"R_{i} = D_{i}'", G.derived_subgroup(D) == R)
        for k in range(2, i + 1):
            verify_lala(G, i, k, report)
    return report, build
